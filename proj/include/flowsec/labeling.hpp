#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "flowsec/error.hpp"
#include "flowsec/index_set.hpp"
#include "flowsec/network.hpp"
#include "flowsec/poset.hpp"

namespace flowsec {

// Set labels attached to equivalence classes, Lab(x) = Lab([x]) for entities.
//
// A label is a set of entity names. Internally it is stored as a set of
// blocks, where blocks partition the entities: synthesized labels use the
// equivalence classes themselves as blocks (a label is a union of Ownlabels),
// while user-supplied labels use one block per entity. Inclusion between two
// labels of the same assignment is then inclusion between their block sets.
// This keeps synthesized labels proportional to the number of classes rather
// than the number of entities.
class LabelAssignment {
 public:
  LabelAssignment() = default;

  const EntityTable& entities() const noexcept { return entities_; }
  std::size_t class_count() const noexcept { return own_.size(); }
  ClassId class_of(EntityId e) const { return class_of_.at(e); }
  ClassId class_of(std::string_view name) const { return class_of(entities_.id(name)); }

  // Members of the class, i.e. the names making up Ownlabel.
  const std::vector<EntityId>& own_members(ClassId c) const { return own_.at(c); }

  std::vector<EntityId> label_ids(ClassId c) const {
    std::vector<EntityId> out;
    labels_.at(c).for_each([&](IndexSet::value_type b) {
      out.insert(out.end(), blocks_[b].begin(), blocks_[b].end());
    });
    std::sort(out.begin(), out.end(), [&](EntityId a, EntityId b) {
      return entities_.name(a) < entities_.name(b);
    });
    return out;
  }

  // Sorted names of Lab(c).
  std::vector<std::string> class_label(ClassId c) const {
    std::vector<std::string> out;
    for (EntityId e : label_ids(c)) out.push_back(entities_.name(e));
    return out;
  }

  std::vector<std::string> label(std::string_view entity) const {
    return class_label(class_of(entity));
  }

  std::size_t label_size(ClassId c) const {
    std::size_t n = 0;
    labels_.at(c).for_each([&](IndexSet::value_type b) { n += blocks_[b].size(); });
    return n;
  }

  bool label_contains(ClassId c, EntityId e) const {
    return labels_.at(c).contains(block_of_.at(e));
  }

  bool label_subset(ClassId a, ClassId b) const {
    return labels_.at(a).is_subset_of(labels_.at(b));
  }

  bool label_equal(ClassId a, ClassId b) const { return labels_.at(a) == labels_.at(b); }

  // Ownlabel(c) ⊆ Lab(c).
  bool contains_own(ClassId c) const {
    return std::all_of(own_.at(c).begin(), own_.at(c).end(),
                       [&](EntityId e) { return label_contains(c, e); });
  }

  // Lab(c) = Ownlabel(c).
  bool equals_own(ClassId c) const {
    return contains_own(c) && label_size(c) == own_.at(c).size();
  }

 private:
  friend LabelAssignment compute_labels(const CondensationPoset& poset);
  friend LabelAssignment assign_labels(const CondensationPoset& poset,
                                       const std::vector<std::set<std::string>>& class_labels);

  EntityTable entities_;
  std::vector<ClassId> class_of_;
  std::vector<std::vector<EntityId>> own_;
  std::vector<std::vector<EntityId>> blocks_;
  std::vector<IndexSet::value_type> block_of_;
  std::vector<IndexSet> labels_;
};

// Lab([x]) = union of Ownlabel([y]) over all [y] ⊑ [x].
//
// Classes are visited bottom-up in topological order; a bottom class keeps
// just its Ownlabel and every other class is finished before it is pushed to
// its successors, i.e. after everything strictly below it. The work is one
// set union per class-level edge; the union itself costs time proportional
// to the label, so total output can still be quadratic (a chain of k classes
// has labels of total size k(k+1)/2).
inline LabelAssignment compute_labels(const CondensationPoset& poset) {
  const std::size_t k = poset.class_count();
  LabelAssignment out;
  out.entities_ = poset.entities();
  out.class_of_.resize(poset.entities().size());
  out.block_of_.resize(poset.entities().size());
  out.own_.resize(k);
  for (ClassId c = 0; c < k; ++c) {
    out.own_[c] = poset.members(c);
    for (EntityId e : out.own_[c]) {
      out.class_of_[e] = c;
      out.block_of_[e] = c;
    }
  }
  out.blocks_ = out.own_;

  out.labels_.assign(k, IndexSet());
  for (ClassId c = 0; c < k; ++c) {
    out.labels_[c] = IndexSet(k);
    out.labels_[c].insert(c);
  }
  for (ClassId c : poset.topological_order()) {
    for (ClassId next : poset.successors(c)) out.labels_[next] |= out.labels_[c];
  }
  return out;
}

// Wraps user-chosen labels, one per class of `poset`, for checking against
// it. Every name must be a declared entity.
inline LabelAssignment assign_labels(const CondensationPoset& poset,
                                     const std::vector<std::set<std::string>>& class_labels) {
  const std::size_t n = poset.entities().size();
  const std::size_t k = poset.class_count();
  if (class_labels.size() != k) throw MissingLabel("expected one label per class");
  LabelAssignment out;
  out.entities_ = poset.entities();
  out.class_of_.resize(n);
  out.block_of_.resize(n);
  out.own_.resize(k);
  out.blocks_.resize(n);
  for (ClassId c = 0; c < k; ++c) {
    out.own_[c] = poset.members(c);
    for (EntityId e : out.own_[c]) out.class_of_[e] = c;
  }
  for (EntityId e = 0; e < n; ++e) {
    out.blocks_[e] = {e};
    out.block_of_[e] = e;
  }
  for (ClassId c = 0; c < k; ++c) {
    IndexSet s(n);
    for (const auto& name : class_labels[c]) s.insert(poset.entities().id(name));
    out.labels_.push_back(std::move(s));
  }
  return out;
}

// Lab(x) ⊆ Lab(y).
inline bool can_flow(const LabelAssignment& labels, std::string_view x, std::string_view y) {
  return labels.label_subset(labels.class_of(x), labels.class_of(y));
}

namespace detail {

// Groups entities with equal labels into classes and orders classes by label
// inclusion. Candidate pairs are tested smaller-label-first since a label
// can only be included in one at least as large.
inline CondensationPoset poset_from_label_sets(EntityTable entities,
                                               const std::vector<IndexSet>& entity_labels) {
  const std::size_t n = entities.size();
  std::vector<EntityId> by_content(n);
  for (EntityId e = 0; e < n; ++e) by_content[e] = e;
  std::vector<std::vector<IndexSet::value_type>> content(n);
  for (EntityId e = 0; e < n; ++e) content[e] = entity_labels[e].to_vector();
  std::sort(by_content.begin(), by_content.end(), [&](EntityId a, EntityId b) {
    if (content[a].size() != content[b].size()) return content[a].size() < content[b].size();
    return content[a] < content[b];
  });

  std::vector<ClassId> class_of(n);
  std::vector<EntityId> representative;
  for (std::size_t i = 0; i < n; ++i) {
    const EntityId e = by_content[i];
    if (i == 0 || content[e] != content[representative.back()]) representative.push_back(e);
    class_of[e] = static_cast<ClassId>(representative.size() - 1);
  }

  // Classes are numbered by increasing label size.
  std::vector<ClassEdge> edges;
  const std::size_t k = representative.size();
  for (ClassId a = 0; a < k; ++a) {
    const IndexSet& la = entity_labels[representative[a]];
    for (ClassId b = a + 1; b < k; ++b) {
      const IndexSet& lb = entity_labels[representative[b]];
      if (content[representative[a]].size() < content[representative[b]].size() &&
          la.is_subset_of(lb)) {
        edges.emplace_back(a, b);
      }
    }
  }
  return CondensationPoset::from_class_graph(std::move(entities), class_of, k, edges);
}

}  // namespace detail

// Recovers the poset from labels alone: equal labels share a class, and
// C1 ⊑ C2 iff Lab(C1) ⊆ Lab(C2).
inline CondensationPoset flow_from_labels(const LabelAssignment& labels) {
  const std::size_t n = labels.entities().size();
  std::vector<IndexSet> per_entity;
  per_entity.reserve(n);
  for (EntityId e = 0; e < n; ++e) {
    auto ids = labels.label_ids(labels.class_of(e));
    per_entity.push_back(IndexSet::from_elements(n, {ids.begin(), ids.end()}));
  }
  return detail::poset_from_label_sets(labels.entities(), per_entity);
}

// Entity -> label, where label elements are arbitrary names (entity names,
// categories, translated tuple labels).
using RawLabels = std::map<std::string, std::set<std::string>>;

inline CondensationPoset flow_from_labels(const std::vector<std::string>& entities,
                                          const RawLabels& labels) {
  EntityTable table(entities);
  std::unordered_map<std::string, IndexSet::value_type> atoms;
  for (const auto& name : entities) {
    auto it = labels.find(name);
    if (it == labels.end()) throw MissingLabel("entity '" + name + "' has no label");
    for (const auto& a : it->second) atoms.emplace(a, static_cast<IndexSet::value_type>(atoms.size()));
  }
  std::vector<IndexSet> per_entity;
  per_entity.reserve(entities.size());
  for (const auto& name : entities) {
    std::vector<IndexSet::value_type> ids;
    for (const auto& a : labels.at(name)) ids.push_back(atoms.at(a));
    per_entity.push_back(IndexSet::from_elements(atoms.size(), std::move(ids)));
  }
  return detail::poset_from_label_sets(std::move(table), per_entity);
}

// Every entity in `labels`, in key order.
inline CondensationPoset flow_from_labels(const RawLabels& labels) {
  std::vector<std::string> entities;
  for (const auto& [name, _] : labels) entities.push_back(name);
  return flow_from_labels(entities, labels);
}

// Lab(x) for every entity x.
inline RawLabels entity_labels(const LabelAssignment& labels) {
  RawLabels out;
  for (EntityId e = 0; e < labels.entities().size(); ++e) {
    auto names = labels.class_label(labels.class_of(e));
    out.emplace(labels.entities().name(e), std::set<std::string>(names.begin(), names.end()));
  }
  return out;
}

// Entities whose label omits their own name. Synthesized labels never do.
inline std::vector<std::string> own_name_gaps(const RawLabels& labels) {
  std::vector<std::string> out;
  for (const auto& [name, label] : labels) {
    if (!label.contains(name)) out.push_back(name);
  }
  return out;
}

struct IsomorphismReport {
  // Pairs of distinct classes that received the same label.
  std::vector<ClassEdge> injectivity_violations;
  // Pairs where leq and label inclusion disagree.
  std::vector<ClassEdge> order_violations;
  // Classes whose label lacks one of their own members' names.
  std::vector<ClassId> own_label_gaps;

  bool isomorphic() const { return injectivity_violations.empty() && order_violations.empty(); }
};

inline IsomorphismReport verify_isomorphism(const CondensationPoset& poset,
                                            const LabelAssignment& labels) {
  if (labels.class_count() != poset.class_count() ||
      !labels.entities().same_names(poset.entities())) {
    throw EntityMismatch("labels do not cover the classes of the poset");
  }
  const std::size_t k = poset.class_count();
  // Label classes may be numbered differently; go through a member.
  std::vector<ClassId> to_label(k);
  for (ClassId c = 0; c < k; ++c) {
    to_label[c] = labels.class_of(poset.entities().name(poset.members(c).front()));
  }
  IsomorphismReport report;
  for (ClassId a = 0; a < k; ++a) {
    if (!labels.contains_own(to_label[a])) report.own_label_gaps.push_back(a);
    for (ClassId b = 0; b < k; ++b) {
      if (a == b) continue;
      const bool subset = labels.label_subset(to_label[a], to_label[b]);
      if (a < b && subset && labels.label_equal(to_label[a], to_label[b])) {
        report.injectivity_violations.emplace_back(a, b);
      }
      if (poset.leq(a, b) != subset) report.order_violations.emplace_back(a, b);
    }
  }
  return report;
}

}  // namespace flowsec
