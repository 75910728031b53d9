#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flowsec/error.hpp"
#include "flowsec/index_set.hpp"
#include "flowsec/network.hpp"
#include "flowsec/poset.hpp"

namespace flowsec {

// Classes with no outgoing flow: not strictly dominated by any other.
inline std::vector<ClassId> max_secrecy_classes(const CondensationPoset& poset) {
  std::vector<ClassId> out;
  for (ClassId c = 0; c < poset.class_count(); ++c) {
    if (poset.is_maximal(c)) out.push_back(c);
  }
  return out;
}

// Classes with no incoming flow: dominating no other class.
inline std::vector<ClassId> max_integrity_classes(const CondensationPoset& poset) {
  std::vector<ClassId> out;
  for (ClassId c = 0; c < poset.class_count(); ++c) {
    if (poset.is_minimal(c)) out.push_back(c);
  }
  return out;
}

// Classes that every class in `classes` can flow to.
inline IndexSet common_upper_bounds(const CondensationPoset& poset,
                                    std::span<const ClassId> classes) {
  IndexSet bounds = IndexSet::full(poset.class_count());
  for (ClassId c : classes) {
    bounds &= poset.up_set(c);
    if (bounds.empty()) break;
  }
  return bounds;
}

// True iff no entity exists to which all of `entities` can flow. Two members
// of one class are never in conflict: the class is their common target.
inline bool in_conflict(const CondensationPoset& poset, std::span<const std::string> entities) {
  if (entities.size() < 2) throw Error("a conflict query needs at least two entities");
  std::vector<ClassId> classes;
  classes.reserve(entities.size());
  for (const auto& name : entities) classes.push_back(poset.class_of(name));
  return common_upper_bounds(poset, classes).empty();
}

inline bool in_conflict(const CondensationPoset& poset, const std::string& x, const std::string& y) {
  const std::string pair[] = {x, y};
  return in_conflict(poset, pair);
}

// Unordered pairs of classes {a, b}, a < b, with no common upper bound.
inline std::vector<ClassEdge> conflicting_class_pairs(const CondensationPoset& poset) {
  std::vector<ClassEdge> out;
  for (ClassId a = 0; a < poset.class_count(); ++a) {
    for (ClassId b = a + 1; b < poset.class_count(); ++b) {
      if (!poset.up_set(a).intersects(poset.up_set(b))) out.emplace_back(a, b);
    }
  }
  return out;
}

struct SecurityReport {
  std::vector<ClassId> max_secrecy;
  std::vector<ClassId> max_integrity;
  // Unordered entity pairs (first < second by name) in conflict.
  std::vector<NamedChannel> conflicts;
};

inline SecurityReport security_report(const CondensationPoset& poset) {
  SecurityReport report;
  report.max_secrecy = max_secrecy_classes(poset);
  report.max_integrity = max_integrity_classes(poset);
  const auto& names = poset.entities().names();
  for (const auto& [a, b] : conflicting_class_pairs(poset)) {
    for (EntityId x : poset.members(a)) {
      for (EntityId y : poset.members(b)) {
        auto pair = std::minmax(names[x], names[y]);
        report.conflicts.emplace_back(pair.first, pair.second);
      }
    }
  }
  std::sort(report.conflicts.begin(), report.conflicts.end());
  return report;
}

// True iff `candidate` condenses to `poset`. Both must name the same entities.
inline bool is_implementation(const Network& candidate, const CondensationPoset& poset) {
  if (!candidate.entities().same_names(poset.entities())) {
    throw EntityMismatch("candidate network and poset have different entities");
  }
  return isomorphic(condense(candidate), poset);
}

}  // namespace flowsec
