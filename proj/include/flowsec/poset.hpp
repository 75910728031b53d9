#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flowsec/error.hpp"
#include "flowsec/flow_relation.hpp"
#include "flowsec/index_set.hpp"
#include "flowsec/network.hpp"

namespace flowsec {

using ClassId = std::uint32_t;
using ClassEdge = std::pair<ClassId, ClassId>;

// Tarjan's strongly connected components, iterative so that deep graphs do
// not exhaust the call stack. `successors(v)` must return a range of vertex
// ids. Components are numbered in completion order, which is a reverse
// topological order of the condensation (sinks get the smallest numbers).
template <typename Successors>
std::vector<std::uint32_t> strong_components(std::size_t vertex_count, Successors&& successors,
                                             std::uint32_t& component_count) {
  constexpr std::uint32_t kUnvisited = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> index(vertex_count, kUnvisited);
  std::vector<std::uint32_t> low(vertex_count, 0);
  std::vector<std::uint32_t> component(vertex_count, kUnvisited);
  std::vector<std::uint32_t> stack;
  std::vector<std::pair<std::uint32_t, std::size_t>> frames;
  std::uint32_t next_index = 0;
  component_count = 0;

  for (std::uint32_t root = 0; root < vertex_count; ++root) {
    if (index[root] != kUnvisited) continue;
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    frames.emplace_back(root, 0);

    while (!frames.empty()) {
      auto& [v, edge] = frames.back();
      const auto& out = successors(v);
      if (edge < out.size()) {
        const std::uint32_t w = out[edge++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          frames.emplace_back(w, 0);
        } else if (component[w] == kUnvisited) {
          // Visited and unassigned means w is still on the stack.
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::uint32_t done = v;
      if (low[done] == index[done]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          component[w] = component_count;
        } while (w != done);
        ++component_count;
      }
      frames.pop_back();
      if (!frames.empty()) {
        const std::uint32_t parent = frames.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
    }
  }
  return component;
}

// The partial order of CanFlow equivalence classes.
//
// Classes are canonical: members are sorted by name and classes are numbered
// by their smallest member name, so equal inputs give equal posets no matter
// how entities or channels were ordered. The order itself is stored as a
// generating DAG between classes (not necessarily reduced); leq() answers
// from up-sets computed on first use.
class CondensationPoset {
 public:
  CondensationPoset() : cache_(std::make_shared<Cache>()) {}

  // Builds a poset from any class assignment and any class-level relation
  // whose reflexive-transitive closure is the intended order. Raw class ids
  // must all be used. Throws NotAPartialOrder if the relation has a cycle.
  static CondensationPoset from_class_graph(EntityTable entities,
                                            const std::vector<ClassId>& raw_class_of,
                                            std::size_t raw_class_count,
                                            const std::vector<ClassEdge>& raw_edges) {
    const std::size_t n = entities.size();
    if (raw_class_of.size() != n) throw Error("class assignment does not cover every entity");

    std::vector<std::vector<EntityId>> raw_members(raw_class_count);
    for (std::size_t e = 0; e < n; ++e) {
      const ClassId c = raw_class_of[e];
      if (c >= raw_class_count) throw Error("class id out of range");
      raw_members[c].push_back(static_cast<EntityId>(e));
    }
    const auto& names = entities.names();
    auto by_name = [&](EntityId a, EntityId b) { return names[a] < names[b]; };
    for (auto& m : raw_members) {
      if (m.empty()) throw Error("empty equivalence class");
      std::sort(m.begin(), m.end(), by_name);
    }

    std::vector<ClassId> order(raw_class_count);
    for (std::size_t c = 0; c < raw_class_count; ++c) order[c] = static_cast<ClassId>(c);
    std::sort(order.begin(), order.end(), [&](ClassId a, ClassId b) {
      return names[raw_members[a].front()] < names[raw_members[b].front()];
    });
    std::vector<ClassId> renumber(raw_class_count);
    for (std::size_t i = 0; i < order.size(); ++i) renumber[order[i]] = static_cast<ClassId>(i);

    CondensationPoset p;
    p.entities_ = std::move(entities);
    p.members_.resize(raw_class_count);
    for (std::size_t c = 0; c < raw_class_count; ++c) {
      p.members_[renumber[c]] = std::move(raw_members[c]);
    }
    p.class_of_.resize(n);
    for (std::size_t e = 0; e < n; ++e) p.class_of_[e] = renumber[raw_class_of[e]];

    std::vector<ClassEdge> edges;
    edges.reserve(raw_edges.size());
    for (const auto& [a, b] : raw_edges) {
      if (a >= raw_class_count || b >= raw_class_count) throw Error("class id out of range");
      if (a != b) edges.emplace_back(renumber[a], renumber[b]);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    p.successors_.resize(raw_class_count);
    p.predecessors_.resize(raw_class_count);
    for (const auto& [a, b] : edges) {
      p.successors_[a].push_back(b);
      p.predecessors_[b].push_back(a);
    }
    p.edge_count_ = edges.size();
    p.compute_topological_order();
    return p;
  }

  const EntityTable& entities() const noexcept { return entities_; }
  std::size_t class_count() const noexcept { return members_.size(); }

  const std::vector<EntityId>& members(ClassId c) const { return members_.at(c); }

  std::vector<std::string> member_names(ClassId c) const {
    std::vector<std::string> out;
    for (EntityId e : members(c)) out.push_back(entities_.name(e));
    return out;
  }

  // "[B,F,H]"
  std::string class_name(ClassId c) const {
    std::string out = "[";
    const auto& m = members(c);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i) out += ',';
      out += entities_.name(m[i]);
    }
    return out + "]";
  }

  ClassId class_of(EntityId e) const { return class_of_.at(e); }
  ClassId class_of(std::string_view name) const { return class_of(entities_.id(name)); }

  const std::vector<ClassId>& successors(ClassId c) const { return successors_.at(c); }
  const std::vector<ClassId>& predecessors(ClassId c) const { return predecessors_.at(c); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  // Bottom classes first.
  const std::vector<ClassId>& topological_order() const noexcept { return topo_order_; }
  std::size_t topological_rank(ClassId c) const { return topo_rank_.at(c); }

  // Minimal: dominates no other class. Maximal: dominated by no other class.
  bool is_minimal(ClassId c) const { return predecessors(c).empty(); }
  bool is_maximal(ClassId c) const { return successors(c).empty(); }

  // Every class D with c ⊑ D, including c.
  const IndexSet& up_set(ClassId c) const { return up_sets().at(c); }

  bool leq(ClassId a, ClassId b) const { return up_set(a).contains(b); }
  bool leq(std::string_view x, std::string_view y) const {
    return leq(class_of(x), class_of(y));
  }

  // The Hasse diagram: the unique minimal generating relation.
  std::vector<ClassEdge> cover_edges() const {
    std::vector<ClassEdge> covers;
    IndexSet covered(class_count());
    for (ClassId u = 0; u < class_count(); ++u) {
      std::vector<ClassId> next = successors(u);
      std::sort(next.begin(), next.end(), [&](ClassId a, ClassId b) {
        return topo_rank_[a] < topo_rank_[b];
      });
      covered = IndexSet(class_count());
      // A successor reachable through an earlier one precedes it in
      // topological order, so it is already covered when reached.
      for (ClassId v : next) {
        if (covered.contains(v)) continue;
        covers.emplace_back(u, v);
        covered |= up_set(v);
      }
    }
    std::sort(covers.begin(), covers.end());
    return covers;
  }

  std::size_t nontrivial_class_count() const {
    return static_cast<std::size_t>(std::count_if(
        members_.begin(), members_.end(), [](const auto& m) { return m.size() > 1; }));
  }

 private:
  struct Cache {
    std::once_flag once;
    std::vector<IndexSet> up;
  };

  void compute_topological_order() {
    const std::size_t k = class_count();
    std::vector<std::size_t> indegree(k);
    for (std::size_t c = 0; c < k; ++c) indegree[c] = predecessors_[c].size();
    topo_order_.clear();
    topo_order_.reserve(k);
    for (std::size_t c = 0; c < k; ++c) {
      if (indegree[c] == 0) topo_order_.push_back(static_cast<ClassId>(c));
    }
    for (std::size_t head = 0; head < topo_order_.size(); ++head) {
      for (ClassId s : successors_[topo_order_[head]]) {
        if (--indegree[s] == 0) topo_order_.push_back(s);
      }
    }
    if (topo_order_.size() != k) {
      throw NotAPartialOrder("class relation contains a cycle; it is not antisymmetric");
    }
    topo_rank_.assign(k, 0);
    for (std::size_t i = 0; i < k; ++i) topo_rank_[topo_order_[i]] = i;
  }

  const std::vector<IndexSet>& up_sets() const {
    std::call_once(cache_->once, [this] {
      const std::size_t k = class_count();
      std::vector<IndexSet> up(k);
      for (auto it = topo_order_.rbegin(); it != topo_order_.rend(); ++it) {
        IndexSet s(k);
        s.insert(*it);
        for (ClassId next : successors_[*it]) s |= up[next];
        up[*it] = std::move(s);
      }
      cache_->up = std::move(up);
    });
    return cache_->up;
  }

  EntityTable entities_;
  std::vector<std::vector<EntityId>> members_;
  std::vector<ClassId> class_of_;
  std::vector<std::vector<ClassId>> successors_;
  std::vector<std::vector<ClassId>> predecessors_;
  std::size_t edge_count_ = 0;
  std::vector<ClassId> topo_order_;
  std::vector<std::size_t> topo_rank_;
  std::shared_ptr<Cache> cache_;
};

// Equivalence classes are the strongly connected components of the channel
// digraph; class edges are the channels between different components.
inline CondensationPoset condense(const Network& net) {
  std::uint32_t count = 0;
  auto component = strong_components(
      net.size(), [&](std::uint32_t v) -> const std::vector<EntityId>& { return net.successors(v); },
      count);
  std::vector<ClassEdge> edges;
  edges.reserve(net.channels().size());
  for (const auto& [from, to] : net.channels()) {
    if (component[from] != component[to]) edges.emplace_back(component[from], component[to]);
  }
  return CondensationPoset::from_class_graph(net.entities(), component, count, edges);
}

inline bool flow_between(const CondensationPoset& poset, std::string_view x, std::string_view y) {
  return poset.leq(x, y);
}

// Same entity names, same partition, same order. Entity declaration order is
// irrelevant.
inline bool isomorphic(const CondensationPoset& a, const CondensationPoset& b) {
  if (a.class_count() != b.class_count()) return false;
  if (!a.entities().same_names(b.entities())) return false;
  for (ClassId c = 0; c < a.class_count(); ++c) {
    if (a.member_names(c) != b.member_names(c)) return false;
  }
  for (ClassId c = 0; c < a.class_count(); ++c) {
    if (!(a.up_set(c) == b.up_set(c))) return false;
  }
  return true;
}

// A minimum-size channel relation realizing the poset: each class with k > 1
// members becomes a k-cycle in name order, and each cover edge C1 -> C2 links
// the smallest-named member of C1 to the smallest-named member of C2.
inline Network transitive_reduction(const CondensationPoset& poset) {
  std::vector<Channel> channels;
  for (ClassId c = 0; c < poset.class_count(); ++c) {
    const auto& m = poset.members(c);
    if (m.size() < 2) continue;
    for (std::size_t i = 0; i < m.size(); ++i) channels.emplace_back(m[i], m[(i + 1) % m.size()]);
  }
  for (const auto& [from, to] : poset.cover_edges()) {
    channels.emplace_back(poset.members(from).front(), poset.members(to).front());
  }
  return Network(poset.entities(), std::move(channels));
}

}  // namespace flowsec
