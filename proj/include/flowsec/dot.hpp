#pragma once

#include <sstream>
#include <string>
#include <string_view>

#include "flowsec/labeling.hpp"
#include "flowsec/network.hpp"
#include "flowsec/poset.hpp"

namespace flowsec {

namespace detail {

inline std::string dot_quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

inline std::string label_text(const LabelAssignment& labels, ClassId label_class) {
  std::string out;
  const auto names = labels.class_label(label_class);
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ',';
    out += names[i];
  }
  return out;
}

}  // namespace detail

// The labeled class poset: one node per class, "[B,F,H] : B,F,H", cover
// edges only, no reflexive edges, greater classes drawn above smaller ones.
inline std::string emit_dot(const CondensationPoset& poset, const LabelAssignment& labels) {
  std::ostringstream out;
  out << "digraph flow {\n  rankdir=BT;\n  node [shape=box];\n";
  for (ClassId c = 0; c < poset.class_count(); ++c) {
    const ClassId lc = labels.class_of(poset.members(c).front());
    out << "  c" << c << " [label="
        << detail::dot_quote(poset.class_name(c) + " : " + detail::label_text(labels, lc)) << "];\n";
  }
  for (const auto& [a, b] : poset.cover_edges()) out << "  c" << a << " -> c" << b << ";\n";
  out << "}\n";
  return out.str();
}

// Entities with their labels over a channel relation, typically a reduced
// one. Self-channels are not drawn.
inline std::string emit_dot_entities(const Network& net, const LabelAssignment& labels) {
  std::ostringstream out;
  out << "digraph flow {\n  rankdir=BT;\n  node [shape=box];\n";
  const auto ids = net.entities().sorted_ids();
  for (EntityId e : ids) {
    const auto& name = net.entities().name(e);
    out << "  " << detail::dot_quote(name) << " [label="
        << detail::dot_quote(name + " : " + detail::label_text(labels, labels.class_of(name))) << "];\n";
  }
  for (const auto& [a, b] : net.named_channels()) {
    if (a != b) out << "  " << detail::dot_quote(a) << " -> " << detail::dot_quote(b) << ";\n";
  }
  out << "}\n";
  return out.str();
}

// The raw channel relation.
inline std::string emit_dot_channels(const Network& net) {
  std::ostringstream out;
  out << "digraph channels {\n";
  for (EntityId e : net.entities().sorted_ids()) out << "  " << detail::dot_quote(net.entities().name(e)) << ";\n";
  auto channels = net.named_channels();
  std::sort(channels.begin(), channels.end());
  for (const auto& [a, b] : channels) {
    out << "  " << detail::dot_quote(a) << " -> " << detail::dot_quote(b) << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace flowsec
