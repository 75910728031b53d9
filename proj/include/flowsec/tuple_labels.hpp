#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "flowsec/error.hpp"
#include "flowsec/flow_relation.hpp"
#include "flowsec/labeling.hpp"
#include "flowsec/network.hpp"
#include "flowsec/poset.hpp"

namespace flowsec {

// A finite poset of security levels, authored as a cover relation
// ("X < Y") and closed on construction. Need not be total.
class LevelPoset {
 public:
  LevelPoset() = default;

  // `levels` may list levels that appear in no cover. Throws CyclicLevels if
  // the covers contain a cycle (including X < X).
  static LevelPoset from_covers(const std::vector<NamedChannel>& covers,
                                const std::vector<std::string>& levels = {}) {
    std::set<std::string> names(levels.begin(), levels.end());
    for (const auto& [lo, hi] : covers) {
      if (lo == hi) throw CyclicLevels("level '" + lo + "' declared below itself");
      names.insert(lo);
      names.insert(hi);
    }
    Network net = build_network({names.begin(), names.end()}, covers);
    if (condense(net).nontrivial_class_count() != 0) {
      throw CyclicLevels("level declarations contain a cycle");
    }
    LevelPoset lp;
    lp.order_ = transitive_closure(net);
    return lp;
  }

  // Sorted.
  const std::vector<std::string>& levels() const noexcept { return order_.entities().names(); }
  std::size_t size() const noexcept { return order_.size(); }
  bool contains(std::string_view level) const { return order_.entities().find(level).has_value(); }

  bool leq(std::string_view a, std::string_view b) const {
    return order_.reaches(id(a), id(b));
  }

  // { l : l <= level }, sorted.
  std::vector<std::string> down_set(std::string_view level) const {
    const EntityId top = id(level);
    std::vector<std::string> out;
    for (EntityId l = 0; l < size(); ++l) {
      if (order_.reaches(l, top)) out.push_back(order_.entities().name(l));
    }
    return out;
  }

  // Hasse diagram of the level order, sorted.
  std::vector<NamedChannel> covers() const {
    const auto reduced = transitive_reduction(condense(channels_from_flow(order_)));
    std::vector<NamedChannel> out = reduced.named_channels();
    std::sort(out.begin(), out.end());
    return out;
  }

  friend bool operator==(const LevelPoset& a, const LevelPoset& b) { return a.order_ == b.order_; }

 private:
  EntityId id(std::string_view level) const {
    auto found = order_.entities().find(level);
    if (!found) throw UnknownLevel("unknown level '" + std::string(level) + "'");
    return *found;
  }

  FlowRelation order_;
};

struct TupleLabel {
  std::string level;
  std::set<std::string> categories;

  friend bool operator==(const TupleLabel&, const TupleLabel&) = default;
};

// The category universe C. An empty optional accepts any category.
using CategoryUniverse = std::optional<std::set<std::string>>;

// Set(λ). Level-categories carry kLevelPrefix so they can never coincide
// with a user category, even one spelled like a level.
struct SetLabel {
  std::set<std::string> names;

  friend bool operator==(const SetLabel&, const SetLabel&) = default;
};

inline constexpr std::string_view kLevelPrefix = "lev:";

inline std::string level_category(std::string_view level) {
  return std::string(kLevelPrefix) + std::string(level);
}

inline bool is_level_category(std::string_view name) { return name.starts_with(kLevelPrefix); }

inline void validate(const TupleLabel& label, const LevelPoset& levels,
                     const CategoryUniverse& universe = std::nullopt) {
  if (!levels.contains(label.level)) throw UnknownLevel("unknown level '" + label.level + "'");
  if (!universe) return;
  for (const auto& c : label.categories) {
    if (!universe->contains(c)) throw UnknownCategory("unknown category '" + c + "'");
  }
}

// ⟨lev, cat⟩ <= ⟨lev', cat'⟩ iff lev <= lev' and cat ⊆ cat'.
inline bool tuple_leq(const TupleLabel& a, const TupleLabel& b, const LevelPoset& levels,
                      const CategoryUniverse& universe = std::nullopt) {
  validate(a, levels, universe);
  validate(b, levels, universe);
  return levels.leq(a.level, b.level) &&
         std::includes(b.categories.begin(), b.categories.end(), a.categories.begin(),
                       a.categories.end());
}

// Set(⟨lev, cat⟩) = { Cat(l) : l <= lev } ∪ cat.
inline SetLabel tuple_to_set(const TupleLabel& label, const LevelPoset& levels,
                             const CategoryUniverse& universe = std::nullopt) {
  validate(label, levels, universe);
  SetLabel out{label.categories};
  for (const auto& l : levels.down_set(label.level)) out.names.insert(level_category(l));
  return out;
}

inline std::map<std::string, SetLabel> batch_translate(
    const std::map<std::string, TupleLabel>& labels, const LevelPoset& levels,
    const CategoryUniverse& universe = std::nullopt) {
  std::map<std::string, SetLabel> out;
  for (const auto& [entity, label] : labels) out.emplace(entity, tuple_to_set(label, levels, universe));
  return out;
}

// Input for flow_from_labels.
inline RawLabels to_raw_labels(const std::map<std::string, SetLabel>& labels) {
  RawLabels out;
  for (const auto& [entity, label] : labels) out.emplace(entity, label.names);
  return out;
}

// Readable form: level-categories lose their prefix unless that would make
// them collide with a category of the same label. Sorted.
inline std::vector<std::string> display_names(const SetLabel& label) {
  std::vector<std::string> out;
  for (const auto& name : label.names) {
    if (is_level_category(name)) {
      std::string bare = name.substr(kLevelPrefix.size());
      out.push_back(label.names.contains(bare) ? name : bare);
    } else {
      out.push_back(name);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace flowsec
