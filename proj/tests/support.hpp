#pragma once

// Test-only fixtures, generators and brute-force oracles. The oracles work on
// plain boolean matrices and share no code with the library's algorithms.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "flowsec/multiflow.hpp"
#include "flowsec/network.hpp"
#include "flowsec/poset.hpp"

namespace flowsec::testing {

using Matrix = std::vector<std::vector<bool>>;

// R := R ∪ R∘R from the reflexive closure of `edges`, until stable.
inline Matrix fixpoint_closure(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  Matrix r(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) r[i][i] = true;
  for (const auto& [a, b] : edges) r[a][b] = true;
  bool changed = true;
  while (changed) {
    changed = false;
    Matrix next = r;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (!r[i][j]) continue;
        for (std::size_t k = 0; k < n; ++k) {
          if (r[j][k] && !next[i][k]) {
            next[i][k] = true;
            changed = true;
          }
        }
      }
    }
    r = std::move(next);
  }
  return r;
}

inline Matrix fixpoint_closure(const Network& net) {
  std::vector<std::pair<std::size_t, std::size_t>> edges(net.channels().begin(), net.channels().end());
  return fixpoint_closure(net.size(), edges);
}

// Entity names are shuffled so that declaration order, id order and name
// order all differ.
inline Network random_network(std::mt19937& rng, std::size_t n, double edge_probability) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("n" + std::to_string(i));
  std::shuffle(names.begin(), names.end(), rng);
  std::bernoulli_distribution edge(edge_probability);
  std::vector<NamedChannel> channels;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (edge(rng)) channels.emplace_back(names[i], names[j]);
    }
  }
  std::shuffle(channels.begin(), channels.end(), rng);
  return build_network(names, channels);
}

// A random poset given directly as classes plus a random DAG between them,
// along with its order computed by the fixpoint oracle.
struct RandomPoset {
  std::vector<std::string> entities;
  std::vector<std::vector<std::string>> classes;
  Matrix leq;  // over `classes` indices
  CondensationPoset poset;
};

inline RandomPoset random_poset(std::mt19937& rng, std::size_t max_classes, std::size_t max_members = 3,
                                double edge_probability = 0.35) {
  std::uniform_int_distribution<std::size_t> class_count(1, max_classes);
  std::uniform_int_distribution<std::size_t> member_count(1, max_members);
  std::bernoulli_distribution edge(edge_probability);
  RandomPoset out;
  const std::size_t k = class_count(rng);
  std::size_t next = 0;
  std::vector<ClassId> class_of;
  for (std::size_t c = 0; c < k; ++c) {
    out.classes.emplace_back();
    const std::size_t m = member_count(rng);
    for (std::size_t i = 0; i < m; ++i) {
      out.classes.back().push_back("v" + std::to_string(next++));
      class_of.push_back(static_cast<ClassId>(c));
    }
  }
  for (const auto& c : out.classes) out.entities.insert(out.entities.end(), c.begin(), c.end());
  // Edges follow a random linear extension, so the relation is acyclic.
  std::vector<std::size_t> rank(k);
  for (std::size_t i = 0; i < k; ++i) rank[i] = i;
  std::shuffle(rank.begin(), rank.end(), rng);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<ClassEdge> class_edges;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      if (rank[a] < rank[b] && edge(rng)) {
        edges.emplace_back(a, b);
        class_edges.emplace_back(static_cast<ClassId>(a), static_cast<ClassId>(b));
      }
    }
  }
  out.leq = fixpoint_closure(k, edges);
  out.poset = CondensationPoset::from_class_graph(EntityTable(out.entities), class_of, k, class_edges);
  return out;
}

// Index in `rp.classes` of the class holding `name`.
inline std::size_t oracle_class(const RandomPoset& rp, const std::string& name) {
  for (std::size_t c = 0; c < rp.classes.size(); ++c) {
    if (std::find(rp.classes[c].begin(), rp.classes[c].end(), name) != rp.classes[c].end()) return c;
  }
  return rp.classes.size();
}

// Smallest number of edges over k nodes whose reflexive-transitive closure is
// exactly `target`. Exhaustive over subsets of the strict pairs of target, by
// increasing size.
inline std::size_t brute_force_min_edges(const Matrix& target) {
  const std::size_t k = target.size();
  std::vector<std::pair<std::size_t, std::size_t>> candidates;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      if (a != b && target[a][b]) candidates.emplace_back(a, b);
    }
  }
  const std::size_t m = candidates.size();
  // Same fixpoint as above, on bitmask rows for speed.
  std::vector<std::uint32_t> want(k, 0);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      if (target[a][b]) want[a] |= 1u << b;
    }
  }
  auto closes_to_target = [&](const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    std::vector<std::uint32_t> r(k, 0);
    for (std::size_t i = 0; i < k; ++i) r[i] = 1u << i;
    for (const auto& [a, b] : edges) r[a] |= 1u << b;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < k; ++i) {
        std::uint32_t next = r[i];
        for (std::size_t j = 0; j < k; ++j) {
          if (r[i] >> j & 1u) next |= r[j];
        }
        if (next != r[i]) {
          r[i] = next;
          changed = true;
        }
      }
    }
    return r == want;
  };
  for (std::size_t size = 0; size <= m; ++size) {
    // Enumerate subsets of the given size via an index combination.
    std::vector<std::size_t> pick(size);
    for (std::size_t i = 0; i < size; ++i) pick[i] = i;
    while (true) {
      std::vector<std::pair<std::size_t, std::size_t>> edges;
      for (std::size_t i : pick) edges.push_back(candidates[i]);
      if (closes_to_target(edges)) return size;
      std::size_t i = size;
      while (i > 0 && pick[i - 1] == m - size + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return m;
}

// Cycles B->F->H->B and A->G->A, with B->A, C->A, G->D, G->E. Classes:
// [A,G], [B,F,H], [C], [D], [E].
inline Network eight_entities() {
  return build_network({"A", "B", "C", "D", "E", "F", "G", "H"},
                       {{"B", "F"}, {"F", "H"}, {"H", "B"}, {"A", "G"}, {"G", "A"},
                        {"B", "A"}, {"C", "A"}, {"G", "D"}, {"G", "E"}});
}

// Two flow types over the eight entities above. "order" carries the
// eight-entity channels; "billing" runs E->G, D->G, G->A, A->C, A->B. Each
// type alone is acyclic outside the order cycles, but together they join
// every entity into one class. E and G are trusted and may be split.
inline TypedNetwork two_flows(bool split) {
  std::vector<TypedChannel> channels;
  for (const auto& [a, b] : std::vector<NamedChannel>{{"B", "F"}, {"F", "H"}, {"H", "B"}, {"A", "G"}, {"G", "A"},
                                                     {"B", "A"}, {"C", "A"}, {"G", "D"}, {"G", "E"}}) {
    channels.push_back({"order", a, b});
  }
  for (const auto& [a, b] : std::vector<NamedChannel>{{"E", "G"}, {"D", "G"}, {"G", "A"}, {"A", "C"}, {"A", "B"}}) {
    channels.push_back({"billing", a, b});
  }
  auto tn = TypedNetwork::build({"order", "billing"}, {"A", "B", "C", "D", "E", "F", "G", "H"}, {}, channels);
  if (split) {
    tn = split_entity(tn, "E", {{"order", "E'"}, {"billing", "E''"}});
    tn = split_entity(tn, "G", {{"order", "G'"}, {"billing", "G''"}});
  }
  return tn;
}

inline std::vector<std::vector<std::string>> class_names(const CondensationPoset& poset,
                                                         const std::vector<ClassId>& classes) {
  std::vector<std::vector<std::string>> out;
  for (ClassId c : classes) out.push_back(poset.member_names(c));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace flowsec::testing
