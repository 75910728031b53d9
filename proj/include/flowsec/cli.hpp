#pragma once

// The flowsec command line. Each subcommand reads one or two documents and
// delegates to one library operation.
//
// Exit codes: 0 success (or a "true" answer), 1 a "false" answer from a
// query subcommand, 2 usage or input errors.

#include <algorithm>
#include <iostream>
#include <iterator>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flowsec/dot.hpp"
#include "flowsec/flow_relation.hpp"
#include "flowsec/io.hpp"
#include "flowsec/labeling.hpp"
#include "flowsec/multiflow.hpp"
#include "flowsec/poset.hpp"
#include "flowsec/security.hpp"
#include "flowsec/tuple_labels.hpp"

namespace flowsec::cli {

inline constexpr int kOk = 0;
inline constexpr int kFalse = 1;
inline constexpr int kInputError = 2;

namespace detail {

class UsageError : public Error {
 public:
  using Error::Error;
};

inline Document read_document(const std::string& path) {
  if (path == "-") {
    std::string text((std::istreambuf_iterator<char>(std::cin)), std::istreambuf_iterator<char>());
    return parse(text);
  }
  return parse_file(path);
}

inline const Network& as_network(const Document& doc, const std::string& path) {
  if (const auto* net = std::get_if<Network>(&doc.payload)) return *net;
  throw UsageError(path + ": expected a network document, got " + std::string(to_string(doc.kind())));
}

inline CondensationPoset as_poset(const Document& doc, const std::string& path, std::ostream& err) {
  switch (doc.kind()) {
    case DocumentKind::network: return condense(std::get<Network>(doc.payload));
    case DocumentKind::labels: {
      const auto& raw = std::get<RawLabels>(doc.payload);
      for (const auto& name : own_name_gaps(raw)) {
        err << "warning: label of '" << name << "' does not contain its own name\n";
      }
      return flow_from_labels(raw);
    }
    case DocumentKind::tuple_labels: {
      const auto& t = std::get<TupleLabelsDocument>(doc.payload);
      return flow_from_labels(to_raw_labels(batch_translate(t.labels, t.levels)));
    }
    default:
      throw UsageError(path + ": cannot derive a flow relation from a " +
                       std::string(to_string(doc.kind())) + " document");
  }
}

inline LevelPoset as_levels(const Document& doc, const std::string& path) {
  if (const auto* lp = std::get_if<LevelPoset>(&doc.payload)) return *lp;
  if (const auto* t = std::get_if<TupleLabelsDocument>(&doc.payload)) return t->levels;
  throw UsageError(path + ": expected a level-poset document");
}

inline int answer(std::ostream& out, bool value) {
  out << (value ? "true" : "false") << '\n';
  return value ? kOk : kFalse;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Data-flow security analysis of channel networks", "flowsec"};
  app.require_subcommand(1);

  std::string file, file2, x, y;
  std::vector<std::string> names;
  bool all_pairs = false, by_class = false;
  std::string view = "poset";
  int status = kOk;
  std::function<int()> action;

  auto* format = app.add_subcommand("format", "any document in canonical form");
  format->add_option("file", file, "any document")->required();
  format->callback([&] {
    action = [&] { out << emit(detail::read_document(file)); return kOk; };
  });

  auto* closure = app.add_subcommand("closure", "CanFlow relation of a network, as channels");
  closure->add_option("file", file, "network")->required();
  closure->callback([&] {
    action = [&] { out << emit(channels_from_flow(transitive_closure(detail::as_network(detail::read_document(file), file)))); return kOk; };
  });

  auto* condense_cmd = app.add_subcommand("condense", "equivalence classes and their order");
  condense_cmd->add_option("file", file, "network, labels or tuple labels")->required();
  condense_cmd->add_flag("--all", all_pairs, "list every strict pair instead of cover edges");
  condense_cmd->callback([&] {
    action = [&] { out << emit_poset(detail::as_poset(detail::read_document(file), file, err), all_pairs); return kOk; };
  });

  auto* labels_cmd = app.add_subcommand("labels", "set labels synthesized from a network");
  labels_cmd->add_option("file", file, "network")->required();
  labels_cmd->add_flag("--classes", by_class, "one line per equivalence class");
  labels_cmd->callback([&] {
    action = [&] {
      const auto poset = detail::as_poset(detail::read_document(file), file, err);
      const auto labels = compute_labels(poset);
      out << (by_class ? emit_class_labels(poset, labels) : emit(entity_labels(labels)));
      return kOk;
    };
  });

  auto* reduce = app.add_subcommand("reduce", "a minimum channel relation with the same flow");
  reduce->add_option("file", file, "network or labels")->required();
  reduce->callback([&] {
    action = [&] { out << emit(transitive_reduction(detail::as_poset(detail::read_document(file), file, err))); return kOk; };
  });

  auto* from_labels = app.add_subcommand("from-labels", "equivalence classes implied by labels");
  from_labels->add_option("file", file, "labels or tuple labels")->required();
  from_labels->add_flag("--all", all_pairs, "list every strict pair instead of cover edges");
  from_labels->callback([&] {
    action = [&] {
      const Document doc = detail::read_document(file);
      if (doc.kind() != DocumentKind::labels && doc.kind() != DocumentKind::tuple_labels) {
        throw detail::UsageError(file + ": expected a labels document");
      }
      out << emit_poset(detail::as_poset(doc, file, err), all_pairs);
      return kOk;
    };
  });

  auto* query = app.add_subcommand("query-flow", "can data flow from X to Y");
  query->add_option("file", file, "network or labels")->required();
  query->add_option("from", x)->required();
  query->add_option("to", y)->required();
  query->callback([&] {
    action = [&] {
      const auto poset = detail::as_poset(detail::read_document(file), file, err);
      return detail::answer(out, can_flow(compute_labels(poset), x, y));
    };
  });

  auto* secrecy = app.add_subcommand("secrecy", "maximum secrecy classes");
  secrecy->add_option("file", file, "network or labels")->required();
  secrecy->callback([&] {
    action = [&] {
      const auto poset = detail::as_poset(detail::read_document(file), file, err);
      for (ClassId c : max_secrecy_classes(poset)) out << poset.class_name(c) << '\n';
      return kOk;
    };
  });

  auto* integrity = app.add_subcommand("integrity", "maximum integrity classes");
  integrity->add_option("file", file, "network or labels")->required();
  integrity->callback([&] {
    action = [&] {
      const auto poset = detail::as_poset(detail::read_document(file), file, err);
      for (ClassId c : max_integrity_classes(poset)) out << poset.class_name(c) << '\n';
      return kOk;
    };
  });

  auto* conflict = app.add_subcommand(
      "conflict", "are the entities in conflict; without entities, list conflicting pairs");
  conflict->add_option("file", file, "network or labels")->required();
  conflict->add_option("entities", names, "two or more entities");
  conflict->callback([&] {
    action = [&] {
      const auto poset = detail::as_poset(detail::read_document(file), file, err);
      if (names.empty()) {
        for (const auto& [a, b] : security_report(poset).conflicts) out << "conflict " << a << ' ' << b << '\n';
        return kOk;
      }
      if (names.size() < 2) throw detail::UsageError("conflict needs at least two entities");
      return detail::answer(out, in_conflict(poset, names));
    };
  });

  auto* implementation = app.add_subcommand(
      "implementation", "does CANDIDATE condense to the same poset as REFERENCE");
  implementation->add_option("candidate", file, "network")->required();
  implementation->add_option("reference", file2, "network or labels")->required();
  implementation->callback([&] {
    action = [&] {
      const Document doc = detail::read_document(file);
      const auto& candidate = detail::as_network(doc, file);
      Document ref = detail::read_document(file2);
      return detail::answer(out, is_implementation(candidate, detail::as_poset(ref, file2, err)));
    };
  });

  auto* tuple_leq_cmd = app.add_subcommand("tuple-leq", "compare two tuple labels LEVEL;c1,c2");
  tuple_leq_cmd->add_option("levels", file, "level poset")->required();
  tuple_leq_cmd->add_option("a", x)->required();
  tuple_leq_cmd->add_option("b", y)->required();
  tuple_leq_cmd->callback([&] {
    action = [&] {
      const auto levels = detail::as_levels(detail::read_document(file), file);
      return detail::answer(out, tuple_leq(parse_tuple_label(x), parse_tuple_label(y), levels));
    };
  });

  auto* tuple_to_set_cmd = app.add_subcommand(
      "tuple-to-set", "translate a tuple label, or every label of a tuple-labels file");
  tuple_to_set_cmd->add_option("levels", file, "level poset or tuple labels")->required();
  tuple_to_set_cmd->add_option("label", x, "LEVEL;c1,c2");
  tuple_to_set_cmd->callback([&] {
    action = [&] {
      const Document doc = detail::read_document(file);
      const auto levels = detail::as_levels(doc, file);
      if (!x.empty()) {
        out << emit_set_label(tuple_to_set(parse_tuple_label(x), levels)) << '\n';
        return kOk;
      }
      const auto* t = std::get_if<TupleLabelsDocument>(&doc.payload);
      if (!t) throw detail::UsageError("no label given and '" + file + "' holds no tuple labels");
      for (const auto& [entity, label] : batch_translate(t->labels, levels)) {
        out << "label " << entity << ": " << emit_set_label(label) << '\n';
      }
      return kOk;
    };
  });

  auto* multiflow = app.add_subcommand("multiflow", "per-type and merged analysis of typed flows");
  multiflow->add_option("file", file, "typed network")->required();
  multiflow->callback([&] {
    action = [&] {
      const Document doc = detail::read_document(file);
      const auto* tn = std::get_if<TypedNetwork>(&doc.payload);
      if (!tn) throw detail::UsageError(file + ": expected a typed-network document");
      out << emit_multiflow(analyze(*tn));
      return kOk;
    };
  });

  auto* dot = app.add_subcommand("dot", "graphviz rendering");
  dot->add_option("file", file, "network or labels")->required();
  dot->add_option("--view", view, "poset (labeled classes), entities (labeled, reduced channels) or channels")
      ->check(CLI::IsMember({"poset", "entities", "channels"}));
  dot->callback([&] {
    action = [&] {
      const Document doc = detail::read_document(file);
      if (view == "channels") {
        out << emit_dot_channels(detail::as_network(doc, file));
        return kOk;
      }
      const auto poset = detail::as_poset(doc, file, err);
      const auto labels = compute_labels(poset);
      out << (view == "poset" ? emit_dot(poset, labels)
                              : emit_dot_entities(transitive_reduction(poset), labels));
      return kOk;
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }

  try {
    status = action ? action() : kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return status;
}

}  // namespace flowsec::cli
