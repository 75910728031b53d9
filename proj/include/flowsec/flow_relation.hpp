#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "flowsec/error.hpp"
#include "flowsec/index_set.hpp"
#include "flowsec/network.hpp"

namespace flowsec {

// The CanFlow preorder over a network's entities: row(x) holds every y with
// CF(x, y). Rows are dense bit vectors for up to IndexSet::kAlwaysDense
// entities and adaptive beyond that.
class FlowRelation {
 public:
  FlowRelation() = default;
  FlowRelation(EntityTable entities, std::vector<IndexSet> rows)
      : entities_(std::move(entities)), rows_(std::move(rows)) {}

  // An arbitrary relation given by pairs, not checked for being a preorder.
  static FlowRelation from_pairs(EntityTable entities, const std::vector<Channel>& pairs) {
    std::vector<IndexSet> rows(entities.size(), IndexSet(entities.size()));
    for (const auto& [x, y] : pairs) rows.at(x).insert(y);
    return FlowRelation(std::move(entities), std::move(rows));
  }

  const EntityTable& entities() const noexcept { return entities_; }
  std::size_t size() const noexcept { return rows_.size(); }
  const IndexSet& row(EntityId x) const { return rows_.at(x); }

  bool reaches(EntityId x, EntityId y) const { return rows_.at(x).contains(y); }
  bool reaches(std::string_view x, std::string_view y) const {
    return reaches(entities_.id(x), entities_.id(y));
  }

  std::size_t pair_count() const {
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.size();
    return n;
  }

  bool is_reflexive() const {
    for (std::size_t x = 0; x < rows_.size(); ++x) {
      if (!rows_[x].contains(static_cast<EntityId>(x))) return false;
    }
    return true;
  }

  bool is_transitive() const {
    for (const auto& r : rows_) {
      bool closed = true;
      r.for_each([&](EntityId y) {
        if (closed && !rows_[y].is_subset_of(r)) closed = false;
      });
      if (!closed) return false;
    }
    return true;
  }

  bool is_preorder() const { return is_reflexive() && is_transitive(); }

  friend bool operator==(const FlowRelation& a, const FlowRelation& b) {
    return a.entities_ == b.entities_ && a.rows_ == b.rows_;
  }

 private:
  EntityTable entities_;
  std::vector<IndexSet> rows_;
};

struct ClosureOptions {
  // Largest entity count closed with the cubic bit-matrix algorithm; larger
  // networks use one graph search per source.
  std::size_t cubic_limit = 2000;
};

namespace detail {

inline std::vector<IndexSet> closure_by_matrix(const Network& net) {
  const std::size_t n = net.size();
  std::vector<IndexSet> rows;
  rows.reserve(n);
  for (std::size_t x = 0; x < n; ++x) {
    rows.push_back(IndexSet::dense(n));
    rows.back().insert(static_cast<EntityId>(x));
  }
  for (const auto& [from, to] : net.channels()) rows[from].insert(to);
  // Warshall: after step k, rows reflect paths through intermediates < k+1.
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i != k && rows[i].contains(static_cast<EntityId>(k))) rows[i] |= rows[k];
    }
  }
  return rows;
}

inline std::vector<IndexSet> closure_by_search(const Network& net) {
  const std::size_t n = net.size();
  std::vector<IndexSet> rows;
  rows.reserve(n);
  std::vector<std::uint32_t> seen(n, 0);
  std::vector<EntityId> stack;
  for (std::size_t src = 0; src < n; ++src) {
    const auto stamp = static_cast<std::uint32_t>(src + 1);
    std::vector<EntityId> reached;
    stack.assign(1, static_cast<EntityId>(src));
    seen[src] = stamp;
    while (!stack.empty()) {
      EntityId x = stack.back();
      stack.pop_back();
      reached.push_back(x);
      for (EntityId y : net.successors(x)) {
        if (seen[y] != stamp) {
          seen[y] = stamp;
          stack.push_back(y);
        }
      }
    }
    rows.push_back(IndexSet::from_elements(n, std::move(reached)));
  }
  return rows;
}

}  // namespace detail

inline FlowRelation transitive_closure(const Network& net, ClosureOptions options = {}) {
  auto rows = net.size() <= options.cubic_limit ? detail::closure_by_matrix(net)
                                                : detail::closure_by_search(net);
  return FlowRelation(net.entities(), std::move(rows));
}

inline bool flow_between(const FlowRelation& flow, std::string_view x, std::string_view y) {
  return flow.reaches(x, y);
}

// Channel(x, y) = CF(x, y): the implementation with every possible channel.
inline Network channels_from_flow(const FlowRelation& flow) {
  if (!flow.is_reflexive()) throw NotAPreorder("flow relation is not reflexive");
  if (!flow.is_transitive()) throw NotAPreorder("flow relation is not transitive");
  std::vector<Channel> channels;
  channels.reserve(flow.pair_count());
  for (std::size_t x = 0; x < flow.size(); ++x) {
    flow.row(static_cast<EntityId>(x)).for_each([&](EntityId y) {
      channels.emplace_back(static_cast<EntityId>(x), y);
    });
  }
  return Network(flow.entities(), std::move(channels));
}

}  // namespace flowsec
