#pragma once

// Line-oriented text formats.
//
//   # comment (a '#' at the start of a line or after whitespace)
//   entity N                 network, typed network
//   channel A B              network
//   label N: a,b,c           labels
//   level X < Y | level X    level poset, tuple labels
//   tuple N: LEV; c1,c2      tuple labels
//   flowtype T               typed network
//   part E T P               typed network
//   tchannel T P Q           typed network
//   intra E P Q X            typed network (rule from part P to part Q of E)
//
// Names contain no whitespace and none of ':' ',' '<' ';'. Names must be
// declared before use, except levels, which are declared by appearing. The
// document kind follows from the directives used; mixing directives of
// different kinds is an error.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "flowsec/error.hpp"
#include "flowsec/labeling.hpp"
#include "flowsec/multiflow.hpp"
#include "flowsec/network.hpp"
#include "flowsec/tuple_labels.hpp"

namespace flowsec {

enum class DocumentKind { network, labels, level_poset, tuple_labels, typed_network };

inline std::string_view to_string(DocumentKind kind) {
  switch (kind) {
    case DocumentKind::network: return "network";
    case DocumentKind::labels: return "labels";
    case DocumentKind::level_poset: return "level-poset";
    case DocumentKind::tuple_labels: return "tuple-labels";
    case DocumentKind::typed_network: return "typed-network";
  }
  return "?";
}

struct TupleLabelsDocument {
  LevelPoset levels;
  std::map<std::string, TupleLabel> labels;

  friend bool operator==(const TupleLabelsDocument&, const TupleLabelsDocument&) = default;
};

struct Document {
  std::variant<Network, RawLabels, LevelPoset, TupleLabelsDocument, TypedNetwork> payload;

  DocumentKind kind() const { return static_cast<DocumentKind>(payload.index()); }
};

inline bool is_valid_name(std::string_view name) {
  if (name.empty()) return false;
  return std::none_of(name.begin(), name.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == ':' || c == ',' || c == '<' ||
           c == ';';
  });
}

namespace detail {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

struct Line {
  std::size_t number;
  std::string text;  // comment stripped
  std::vector<Token> words;
};

inline Line split_line(std::size_t number, std::string_view raw) {
  Line line{number, {}, {}};
  std::size_t end = raw.size();
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '#' && (i == 0 || std::isspace(static_cast<unsigned char>(raw[i - 1])))) {
      end = i;
      break;
    }
  }
  line.text = std::string(raw.substr(0, end));
  std::size_t i = 0;
  while (i < line.text.size()) {
    while (i < line.text.size() && std::isspace(static_cast<unsigned char>(line.text[i]))) ++i;
    if (i >= line.text.size()) break;
    const std::size_t start = i;
    while (i < line.text.size() && !std::isspace(static_cast<unsigned char>(line.text[i]))) ++i;
    line.words.push_back({line.text.substr(start, i - start), start + 1});
  }
  return line;
}

inline std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 1;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(start, nl - start);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    Line line = split_line(number, raw);
    if (!line.words.empty()) lines.push_back(std::move(line));
    ++number;
    start = nl + 1;
  }
  return lines;
}

[[noreturn]] inline void syntax(const Line& line, std::size_t column, const std::string& what) {
  throw SyntaxError(line.number, column, what);
}

[[noreturn]] inline void semantic(const Line& line, std::size_t column, const std::string& what) {
  throw SemanticError(line.number, column, what);
}

inline const Token& name_at(const Line& line, std::size_t index) {
  const Token& t = line.words.at(index);
  if (!is_valid_name(t.text)) syntax(line, t.column, "invalid name '" + t.text + "'");
  return t;
}

inline void expect_words(const Line& line, std::size_t count, std::string_view usage) {
  if (line.words.size() != count) {
    const std::size_t col = line.words.size() > count ? line.words[count].column
                                                      : line.text.size() + 1;
    syntax(line, col, "expected '" + std::string(usage) + "'");
  }
}

// A name with its position, cut out of free text such as "N: a,b".
struct Piece {
  std::string text;
  std::size_t column;
};

inline Piece trimmed(const std::string& text, std::size_t begin, std::size_t end) {
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  return {text.substr(begin, end - begin), begin + 1};
}

// The text after the directive keyword, split at the first ':'.
inline std::pair<Piece, std::size_t> head_and_colon(const Line& line, std::string_view usage) {
  const std::size_t after = line.words[0].column - 1 + line.words[0].text.size();
  const std::size_t colon = line.text.find(':', after);
  if (colon == std::string::npos) syntax(line, line.text.size() + 1, "expected '" + std::string(usage) + "'");
  Piece head = trimmed(line.text, after, colon);
  if (!is_valid_name(head.text)) syntax(line, head.column, "invalid name '" + head.text + "'");
  return {head, colon + 1};
}

// Comma-separated names in [begin, end); empty input is an empty list.
inline std::vector<Piece> name_list(const Line& line, std::size_t begin, std::size_t end) {
  std::vector<Piece> out;
  if (trimmed(line.text, begin, end).text.empty()) return out;
  std::size_t start = begin;
  while (true) {
    std::size_t comma = line.text.find(',', start);
    if (comma == std::string::npos || comma >= end) comma = end;
    Piece p = trimmed(line.text, start, comma);
    if (!is_valid_name(p.text)) {
      syntax(line, p.text.empty() ? start + 1 : p.column, "invalid name '" + p.text + "'");
    }
    out.push_back(std::move(p));
    if (comma == end) break;
    start = comma + 1;
  }
  return out;
}

inline DocumentKind infer_kind(const std::vector<Line>& lines) {
  bool typed = false, tuple = false, label = false, level = false;
  for (const auto& line : lines) {
    const auto& d = line.words[0].text;
    typed |= d == "flowtype" || d == "part" || d == "tchannel" || d == "intra";
    tuple |= d == "tuple";
    label |= d == "label";
    level |= d == "level";
  }
  if (typed) return DocumentKind::typed_network;
  if (tuple) return DocumentKind::tuple_labels;
  if (label) return DocumentKind::labels;
  if (level) return DocumentKind::level_poset;
  return DocumentKind::network;
}

inline bool allowed(DocumentKind kind, const std::string& d) {
  switch (kind) {
    case DocumentKind::network: return d == "entity" || d == "channel";
    case DocumentKind::labels: return d == "label";
    case DocumentKind::level_poset: return d == "level";
    case DocumentKind::tuple_labels: return d == "level" || d == "tuple";
    case DocumentKind::typed_network:
      return d == "entity" || d == "flowtype" || d == "part" || d == "tchannel" || d == "intra";
  }
  return false;
}

inline Network parse_network(const std::vector<Line>& lines) {
  std::vector<std::string> entities;
  std::set<std::string> declared;
  std::vector<NamedChannel> channels;
  for (const auto& line : lines) {
    if (line.words[0].text == "entity") {
      expect_words(line, 2, "entity NAME");
      const auto& t = name_at(line, 1);
      if (!declared.insert(t.text).second) semantic(line, t.column, "duplicate entity '" + t.text + "'");
      entities.push_back(t.text);
    } else {
      expect_words(line, 3, "channel FROM TO");
      const auto& a = name_at(line, 1);
      const auto& b = name_at(line, 2);
      for (const Token* t : {&a, &b}) {
        if (!declared.contains(t->text)) semantic(line, t->column, "unknown entity '" + t->text + "'");
      }
      channels.emplace_back(a.text, b.text);
    }
  }
  return build_network(std::move(entities), channels);
}

inline RawLabels parse_labels(const std::vector<Line>& lines) {
  RawLabels labels;
  for (const auto& line : lines) {
    auto [head, rest] = head_and_colon(line, "label NAME: a,b,...");
    std::set<std::string> names;
    for (auto& p : name_list(line, rest, line.text.size())) names.insert(std::move(p.text));
    if (!labels.emplace(head.text, std::move(names)).second) {
      semantic(line, head.column, "duplicate label for '" + head.text + "'");
    }
  }
  return labels;
}

inline LevelPoset parse_levels(const std::vector<Line>& lines) {
  std::vector<NamedChannel> covers;
  std::vector<std::string> levels;
  std::vector<const Line*> cover_lines;
  for (const auto& line : lines) {
    if (line.words[0].text != "level") continue;
    const std::size_t after = line.words[0].column - 1 + line.words[0].text.size();
    const std::size_t lt = line.text.find('<', after);
    if (line.words.size() == 2 && lt == std::string::npos) {
      levels.push_back(name_at(line, 1).text);
      continue;
    }
    // "level X < Y", with or without spaces around '<'.
    if (lt == std::string::npos || line.text.find('<', lt + 1) != std::string::npos) {
      syntax(line, line.words.size() > 1 ? line.words[1].column : line.text.size() + 1,
             "expected 'level LOWER < HIGHER' or 'level NAME'");
    }
    Piece lo = trimmed(line.text, after, lt);
    Piece hi = trimmed(line.text, lt + 1, line.text.size());
    for (const Piece* p : {&lo, &hi}) {
      if (!is_valid_name(p->text)) syntax(line, p->column, "invalid level name '" + p->text + "'");
    }
    if (lo.text == hi.text) semantic(line, lo.column, "level '" + lo.text + "' declared below itself");
    covers.emplace_back(lo.text, hi.text);
    cover_lines.push_back(&line);
  }
  try {
    return LevelPoset::from_covers(covers, levels);
  } catch (const CyclicLevels&) {
    // Report the first line that closes a cycle.
    for (std::size_t k = 1; k <= covers.size(); ++k) {
      try {
        LevelPoset::from_covers({covers.begin(), covers.begin() + static_cast<std::ptrdiff_t>(k)});
      } catch (const CyclicLevels&) {
        semantic(*cover_lines[k - 1], cover_lines[k - 1]->words[1].column,
                 "level declarations form a cycle");
      }
    }
    throw;
  }
}

inline TupleLabelsDocument parse_tuple_labels(const std::vector<Line>& lines) {
  TupleLabelsDocument doc;
  doc.levels = parse_levels(lines);
  for (const auto& line : lines) {
    if (line.words[0].text != "tuple") continue;
    auto [head, rest] = head_and_colon(line, "tuple NAME: LEVEL; c1,c2");
    std::size_t semi = line.text.find(';', rest);
    if (semi == std::string::npos) semi = line.text.size();
    Piece level = trimmed(line.text, rest, semi);
    if (!is_valid_name(level.text)) syntax(line, level.column, "invalid level name '" + level.text + "'");
    if (!doc.levels.contains(level.text)) semantic(line, level.column, "unknown level '" + level.text + "'");
    TupleLabel label{level.text, {}};
    if (semi < line.text.size()) {
      for (auto& p : name_list(line, semi + 1, line.text.size())) label.categories.insert(std::move(p.text));
    }
    if (!doc.labels.emplace(head.text, std::move(label)).second) {
      semantic(line, head.column, "duplicate tuple label for '" + head.text + "'");
    }
  }
  return doc;
}

inline TypedNetwork parse_typed_network(const std::vector<Line>& lines) {
  struct Record {
    const Line* line;
    std::size_t column;
  };
  std::vector<std::string> types, entities;
  std::vector<PartDecl> parts;
  std::vector<TypedChannel> channels;
  std::vector<IntraRule> rules;
  std::set<std::string> declared_types, declared_entities;
  // Which list each line appended to, for locating build errors.
  std::vector<std::pair<char, Record>> order;

  for (const auto& line : lines) {
    const auto& d = line.words[0].text;
    if (d == "flowtype") {
      expect_words(line, 2, "flowtype NAME");
      const auto& t = name_at(line, 1);
      if (!declared_types.insert(t.text).second) semantic(line, t.column, "duplicate flow type '" + t.text + "'");
      types.push_back(t.text);
    } else if (d == "entity") {
      expect_words(line, 2, "entity NAME");
      const auto& t = name_at(line, 1);
      if (!declared_entities.insert(t.text).second) semantic(line, t.column, "duplicate entity '" + t.text + "'");
      entities.push_back(t.text);
    } else if (d == "part") {
      expect_words(line, 4, "part ENTITY FLOWTYPE PART");
      const auto& e = name_at(line, 1);
      const auto& t = name_at(line, 2);
      const auto& p = name_at(line, 3);
      if (!declared_entities.contains(e.text)) semantic(line, e.column, "unknown entity '" + e.text + "'");
      if (!declared_types.contains(t.text)) semantic(line, t.column, "unknown flow type '" + t.text + "'");
      parts.push_back({e.text, t.text, p.text});
      order.push_back({'p', {&line, p.column}});
    } else if (d == "tchannel") {
      expect_words(line, 4, "tchannel FLOWTYPE FROM TO");
      const auto& t = name_at(line, 1);
      if (!declared_types.contains(t.text)) semantic(line, t.column, "unknown flow type '" + t.text + "'");
      channels.push_back({t.text, name_at(line, 2).text, name_at(line, 3).text});
      order.push_back({'c', {&line, line.words[2].column}});
    } else {
      expect_words(line, 5, "intra ENTITY FROM TO TRANSFORMATION");
      const auto& e = name_at(line, 1);
      if (!declared_entities.contains(e.text)) semantic(line, e.column, "unknown entity '" + e.text + "'");
      rules.push_back({e.text, name_at(line, 2).text, name_at(line, 3).text, name_at(line, 4).text});
      order.push_back({'r', {&line, line.words[2].column}});
    }
  }

  try {
    return TypedNetwork::build(types, entities, parts, channels, rules);
  } catch (const Error& first) {
    // Rebuild with growing prefixes to find the offending line.
    std::size_t np = 0, nc = 0, nr = 0;
    for (const auto& [which, rec] : order) {
      np += which == 'p';
      nc += which == 'c';
      nr += which == 'r';
      try {
        TypedNetwork::build(types, entities, {parts.begin(), parts.begin() + static_cast<std::ptrdiff_t>(np)},
                            {channels.begin(), channels.begin() + static_cast<std::ptrdiff_t>(nc)},
                            {rules.begin(), rules.begin() + static_cast<std::ptrdiff_t>(nr)});
      } catch (const Error& e) {
        semantic(*rec.line, rec.column, e.what());
      }
    }
    throw SemanticError(lines.empty() ? 1 : lines.back().number, 1, first.what());
  }
}

}  // namespace detail

inline Document parse(std::string_view text) {
  const auto lines = detail::split_lines(text);
  const DocumentKind kind = detail::infer_kind(lines);
  for (const auto& line : lines) {
    const auto& d = line.words[0];
    static const std::set<std::string> known = {"entity", "channel", "label",    "level", "tuple",
                                                "flowtype", "part", "tchannel", "intra"};
    if (!known.contains(d.text)) detail::syntax(line, d.column, "unknown directive '" + d.text + "'");
    if (!detail::allowed(kind, d.text)) {
      detail::semantic(line, d.column,
                       "directive '" + d.text + "' cannot appear in a " + std::string(to_string(kind)) +
                           " document");
    }
  }
  switch (kind) {
    case DocumentKind::network: return {detail::parse_network(lines)};
    case DocumentKind::labels: return {detail::parse_labels(lines)};
    case DocumentKind::level_poset: return {detail::parse_levels(lines)};
    case DocumentKind::tuple_labels: return {detail::parse_tuple_labels(lines)};
    case DocumentKind::typed_network: return {detail::parse_typed_network(lines)};
  }
  throw Error("unreachable");
}

// "LEVEL;c1,c2" or "LEVEL".
inline TupleLabel parse_tuple_label(std::string_view text) {
  const std::string line = "tuple x: " + std::string(text);
  auto lines = detail::split_lines(line);
  if (lines.empty()) throw SyntaxError(1, 1, "empty tuple label");
  const auto& l = lines.front();
  const std::size_t rest = line.find(':') + 1;
  std::size_t semi = l.text.find(';', rest);
  if (semi == std::string::npos) semi = l.text.size();
  auto level = detail::trimmed(l.text, rest, semi);
  if (!is_valid_name(level.text)) throw SyntaxError(1, 1, "invalid level name '" + level.text + "'");
  TupleLabel out{level.text, {}};
  if (semi < l.text.size()) {
    for (auto& p : detail::name_list(l, semi + 1, l.text.size())) out.categories.insert(std::move(p.text));
  }
  return out;
}

inline Document parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse(text);
}

namespace detail {

inline std::string join(const std::vector<std::string>& names, std::string_view sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += sep;
    out += names[i];
  }
  return out;
}

inline std::string join(const std::set<std::string>& names, std::string_view sep = ",") {
  return join(std::vector<std::string>(names.begin(), names.end()), sep);
}

inline void emit_level_lines(std::ostream& out, const LevelPoset& levels) {
  const auto covers = levels.covers();
  std::set<std::string> covered;
  for (const auto& [lo, hi] : covers) {
    covered.insert(lo);
    covered.insert(hi);
  }
  for (const auto& l : levels.levels()) {
    if (!covered.contains(l)) out << "level " << l << '\n';
  }
  for (const auto& [lo, hi] : covers) out << "level " << lo << " < " << hi << '\n';
}

}  // namespace detail

inline std::string emit(const Network& net) {
  std::ostringstream out;
  auto names = net.entities().names();
  std::sort(names.begin(), names.end());
  for (const auto& n : names) out << "entity " << n << '\n';
  auto channels = net.named_channels();
  std::sort(channels.begin(), channels.end());
  for (const auto& [a, b] : channels) out << "channel " << a << ' ' << b << '\n';
  return out.str();
}

inline std::string emit(const RawLabels& labels) {
  std::ostringstream out;
  for (const auto& [name, label] : labels) {
    out << "label " << name << ':';
    if (!label.empty()) out << ' ' << detail::join(label);
    out << '\n';
  }
  return out.str();
}

inline std::string emit(const LevelPoset& levels) {
  std::ostringstream out;
  detail::emit_level_lines(out, levels);
  return out.str();
}

inline std::string emit(const TupleLabelsDocument& doc) {
  std::ostringstream out;
  detail::emit_level_lines(out, doc.levels);
  for (const auto& [name, label] : doc.labels) {
    out << "tuple " << name << ": " << label.level;
    if (!label.categories.empty()) out << "; " << detail::join(label.categories);
    out << '\n';
  }
  return out.str();
}

inline std::string emit(const TypedNetwork& tn) {
  std::ostringstream out;
  auto types = tn.flow_types().names();
  std::sort(types.begin(), types.end());
  for (const auto& t : types) out << "flowtype " << t << '\n';
  auto names = tn.base_entities().names();
  std::sort(names.begin(), names.end());
  for (const auto& n : names) out << "entity " << n << '\n';
  for (const auto& p : tn.explicit_parts()) out << "part " << p.entity << ' ' << p.flow_type << ' ' << p.part << '\n';
  for (const auto& c : tn.named_channels()) out << "tchannel " << c.flow_type << ' ' << c.from << ' ' << c.to << '\n';
  for (const auto& r : tn.rules()) {
    out << "intra " << r.entity << ' ' << r.from_part << ' ' << r.to_part << ' ' << r.transformation << '\n';
  }
  return out.str();
}

inline std::string emit(const Document& doc) {
  return std::visit([](const auto& payload) { return emit(payload); }, doc.payload);
}

// Equal as documents: same entities, relations and labels irrespective of
// declaration order.
inline bool equivalent(const Document& a, const Document& b) {
  return a.kind() == b.kind() && emit(a) == emit(b);
}

// Analysis output.

inline std::string emit_poset(const CondensationPoset& poset, bool all_pairs = false) {
  std::ostringstream out;
  for (ClassId c = 0; c < poset.class_count(); ++c) out << "class " << poset.class_name(c) << '\n';
  if (all_pairs) {
    for (ClassId a = 0; a < poset.class_count(); ++a) {
      poset.up_set(a).for_each([&](ClassId b) {
        if (a != b) out << "leq " << poset.class_name(a) << ' ' << poset.class_name(b) << '\n';
      });
    }
  } else {
    for (const auto& [a, b] : poset.cover_edges()) {
      out << "leq " << poset.class_name(a) << ' ' << poset.class_name(b) << '\n';
    }
  }
  return out.str();
}

// "[A,G]: A,B,C,F,G,H" per class, in class order.
inline std::string emit_class_labels(const CondensationPoset& poset, const LabelAssignment& labels) {
  std::ostringstream out;
  for (ClassId c = 0; c < poset.class_count(); ++c) {
    const ClassId lc = labels.class_of(poset.members(c).front());
    out << poset.class_name(c) << ": " << detail::join(labels.class_label(lc)) << '\n';
  }
  return out.str();
}

inline std::string emit_set_label(const SetLabel& label) { return detail::join(display_names(label)); }

inline std::string emit_multiflow(const MultiflowReport& report) {
  std::ostringstream out;
  for (const auto& [type, poset] : report.per_type_posets) {
    out << "flowtype " << type << '\n';
    std::istringstream body(emit_poset(poset));
    for (std::string line; std::getline(body, line);) out << "  " << line << '\n';
  }
  out << "merged\n";
  std::istringstream body(emit_poset(report.merged_poset));
  for (std::string line; std::getline(body, line);) out << "  " << line << '\n';
  for (ClassId c : report.collapsed_classes) {
    out << "collapsed " << report.merged_poset.class_name(c) << '\n';
  }
  return out.str();
}

}  // namespace flowsec
