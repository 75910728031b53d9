#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "flowsec/error.hpp"
#include "flowsec/network.hpp"
#include "flowsec/poset.hpp"

namespace flowsec {

// An entity that takes part in flow type `flow_type` through part `part`.
struct PartDecl {
  std::string entity;
  std::string flow_type;
  std::string part;

  friend auto operator<=>(const PartDecl&, const PartDecl&) = default;
};

// A channel of one flow type between two parts of that type. An entity that
// was never split is its own part in every flow type.
struct TypedChannel {
  std::string flow_type;
  std::string from;
  std::string to;

  friend auto operator<=>(const TypedChannel&, const TypedChannel&) = default;
};

// A declared data flow between two parts of one trusted entity, labeled with
// the transformation applied on the way (sanitation, encryption, ...). The
// transformation is metadata only.
struct IntraRule {
  std::string entity;
  std::string from_part;
  std::string to_part;
  std::string transformation;

  friend auto operator<=>(const IntraRule&, const IntraRule&) = default;
};

// Several coexisting flow relations over one set of base entities. Each
// (entity, flow type) has exactly one part; parts of one entity do not
// communicate unless an IntraRule says so.
class TypedNetwork {
 public:
  TypedNetwork() = default;

  static TypedNetwork build(std::vector<std::string> flow_types,
                            std::vector<std::string> base_entities,
                            const std::vector<PartDecl>& parts,
                            const std::vector<TypedChannel>& channels,
                            const std::vector<IntraRule>& rules = {}) {
    TypedNetwork tn;
    tn.types_ = EntityTable(std::move(flow_types));
    tn.base_ = EntityTable(std::move(base_entities));
    const std::size_t n = tn.base_.size();
    const std::size_t types = tn.types_.size();
    tn.parts_.assign(n, std::vector<std::string>(types));
    for (EntityId e = 0; e < n; ++e) {
      for (auto& p : tn.parts_[e]) p = tn.base_.name(e);
    }
    std::set<std::pair<EntityId, EntityId>> assigned;
    for (const auto& decl : parts) {
      const EntityId e = tn.base_.id(decl.entity);
      const EntityId t = tn.type_id(decl.flow_type);
      if (!assigned.emplace(e, t).second) {
        throw PartNameClash("entity '" + decl.entity + "' has two parts for flow type '" +
                            decl.flow_type + "'");
      }
      tn.parts_[e][t] = decl.part;
    }
    tn.check_part_names();

    tn.channels_.resize(types);
    for (const auto& ch : channels) {
      const EntityId t = tn.type_id(ch.flow_type);
      tn.channels_[t].emplace_back(tn.resolve(t, ch.from), tn.resolve(t, ch.to));
    }
    for (auto& list : tn.channels_) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
    }

    for (const auto& rule : rules) tn.add_rule(rule);
    std::sort(tn.rules_.begin(), tn.rules_.end());
    tn.rules_.erase(std::unique(tn.rules_.begin(), tn.rules_.end()), tn.rules_.end());
    return tn;
  }

  const EntityTable& flow_types() const noexcept { return types_; }
  const EntityTable& base_entities() const noexcept { return base_; }

  const std::string& part(EntityId entity, EntityId flow_type) const {
    return parts_.at(entity).at(flow_type);
  }
  const std::string& part(std::string_view entity, std::string_view flow_type) const {
    return part(base_.id(entity), type_id(flow_type));
  }

  bool is_split(EntityId entity) const {
    return std::any_of(parts_.at(entity).begin(), parts_.at(entity).end(),
                       [&](const std::string& p) { return p != base_.name(entity); });
  }

  // Channels of one flow type as base entity pairs, sorted.
  const std::vector<Channel>& channels(EntityId flow_type) const { return channels_.at(flow_type); }

  const std::vector<IntraRule>& rules() const noexcept { return rules_; }

  // Entities taking part in a flow type: channel endpoints of that type plus
  // entities with an explicit part for it. Sorted by id.
  std::vector<EntityId> participants(EntityId flow_type) const {
    std::set<EntityId> out;
    for (const auto& [a, b] : channels(flow_type)) {
      out.insert(a);
      out.insert(b);
    }
    for (EntityId e = 0; e < base_.size(); ++e) {
      if (parts_[e][flow_type] != base_.name(e)) out.insert(e);
    }
    return {out.begin(), out.end()};
  }

  // Parts that differ from the entity name, sorted.
  std::vector<PartDecl> explicit_parts() const {
    std::vector<PartDecl> out;
    for (EntityId e = 0; e < base_.size(); ++e) {
      for (EntityId t = 0; t < types_.size(); ++t) {
        if (parts_[e][t] != base_.name(e)) out.push_back({base_.name(e), types_.name(t), parts_[e][t]});
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // Channels named by part, sorted.
  std::vector<TypedChannel> named_channels() const {
    std::vector<TypedChannel> out;
    for (EntityId t = 0; t < types_.size(); ++t) {
      for (const auto& [a, b] : channels_[t]) {
        out.push_back({types_.name(t), parts_[a][t], parts_[b][t]});
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // The base entity a part belongs to.
  EntityId owner(std::string_view part_name) const {
    for (EntityId e = 0; e < base_.size(); ++e) {
      for (const auto& p : parts_[e]) {
        if (p == part_name) return e;
      }
    }
    throw UnknownEntity("unknown part '" + std::string(part_name) + "'");
  }

  // Same base entities, flow types, parts, channels and rules, regardless of
  // declaration order.
  friend bool operator==(const TypedNetwork& a, const TypedNetwork& b) {
    auto sorted = [](const EntityTable& t) {
      auto v = t.names();
      std::sort(v.begin(), v.end());
      return v;
    };
    return sorted(a.base_) == sorted(b.base_) && sorted(a.types_) == sorted(b.types_) &&
           a.explicit_parts() == b.explicit_parts() && a.named_channels() == b.named_channels() &&
           a.rules_ == b.rules_;
  }

 private:
  friend TypedNetwork split_entity(const TypedNetwork& tn, std::string_view entity,
                                   const std::map<std::string, std::string>& assignments);

  EntityId type_id(std::string_view flow_type) const {
    auto t = types_.find(flow_type);
    if (!t) throw UnknownFlowType("unknown flow type '" + std::string(flow_type) + "'");
    return *t;
  }

  EntityId resolve(EntityId flow_type, const std::string& part_name) const {
    for (EntityId e = 0; e < base_.size(); ++e) {
      if (parts_[e][flow_type] == part_name) return e;
    }
    throw UnknownEntity("'" + part_name + "' is not a part of flow type '" +
                        types_.name(flow_type) + "'");
  }

  // Part names are unique across entities; an entity's own name may only be
  // used as its own default part.
  void check_part_names() const {
    std::unordered_map<std::string, EntityId> owner;
    for (EntityId e = 0; e < base_.size(); ++e) owner.emplace(base_.name(e), e);
    std::set<std::string> explicit_names;
    for (EntityId e = 0; e < base_.size(); ++e) {
      for (const auto& p : parts_[e]) {
        if (p == base_.name(e)) continue;
        auto [it, fresh] = owner.emplace(p, e);
        if (!fresh && it->second != e) {
          throw PartNameClash("part name '" + p + "' is already in use");
        }
      }
      std::set<std::string> own(parts_[e].begin(), parts_[e].end());
      std::size_t custom = 0;
      for (const auto& p : parts_[e]) custom += p != base_.name(e);
      std::size_t distinct_custom = own.size() - (own.contains(base_.name(e)) ? 1 : 0);
      if (distinct_custom != custom) {
        throw PartNameClash("entity '" + base_.name(e) + "' reuses a part name across flow types");
      }
    }
  }

  void add_rule(const IntraRule& rule) {
    const EntityId e = base_.id(rule.entity);
    auto has = [&](const std::string& p) {
      return std::find(parts_[e].begin(), parts_[e].end(), p) != parts_[e].end();
    };
    if (!has(rule.from_part) || !has(rule.to_part)) {
      throw UnknownEntity("intra-entity rule names a part that entity '" + rule.entity +
                          "' does not have");
    }
    if (rule.from_part == rule.to_part) {
      throw Error("intra-entity rule must connect two different parts");
    }
    rules_.push_back(rule);
  }

  EntityTable types_;
  EntityTable base_;
  std::vector<std::vector<std::string>> parts_;  // [entity][flow type]
  std::vector<std::vector<Channel>> channels_;   // [flow type]
  std::vector<IntraRule> rules_;
};

// Splits a trusted entity: for each listed flow type, its part for that type
// gets the given fresh name. Channels keep their endpoints, so every channel
// of type t that touched the entity now touches its type-t part.
inline TypedNetwork split_entity(const TypedNetwork& tn, std::string_view entity,
                                 const std::map<std::string, std::string>& assignments) {
  const EntityId e = tn.base_.id(entity);
  TypedNetwork out = tn;
  std::map<std::string, std::string> renamed;
  for (const auto& [type, part_name] : assignments) {
    const EntityId t = tn.type_id(type);
    const std::string& old = tn.parts_[e][t];
    if (old == part_name) continue;
    if (part_name == tn.base_.name(e) && part_name != old) {
      throw PartNameClash("part name '" + part_name + "' is the entity's own name");
    }
    out.parts_[e][t] = part_name;
    renamed[old] = part_name;
  }
  // Fresh means unused by anything else, including other new parts.
  std::set<std::string> fresh;
  for (const auto& [type, part_name] : assignments) {
    if (tn.parts_[e][tn.type_id(type)] == part_name) continue;
    if (!fresh.insert(part_name).second) {
      throw PartNameClash("part name '" + part_name + "' assigned twice");
    }
    for (EntityId other = 0; other < tn.base_.size(); ++other) {
      if (tn.base_.name(other) == part_name) {
        throw PartNameClash("part name '" + part_name + "' is already in use");
      }
      for (const auto& p : tn.parts_[other]) {
        if (p == part_name) throw PartNameClash("part name '" + part_name + "' is already in use");
      }
    }
  }
  out.check_part_names();

  // Rules follow a renamed part when the old name is gone from the entity.
  for (auto& rule : out.rules_) {
    if (rule.entity != entity) continue;
    for (std::string* p : {&rule.from_part, &rule.to_part}) {
      const auto& now = out.parts_[e];
      if (std::find(now.begin(), now.end(), *p) != now.end()) continue;
      std::size_t uses = std::count(tn.parts_[e].begin(), tn.parts_[e].end(), *p);
      auto it = renamed.find(*p);
      if (it == renamed.end() || uses != 1) {
        throw PartNameClash("split would leave an intra-entity rule without part '" + *p + "'");
      }
      *p = it->second;
    }
  }
  std::sort(out.rules_.begin(), out.rules_.end());
  return out;
}

struct MultiflowReport {
  // Keyed by flow type; entities are the parts of the participating entities.
  std::map<std::string, CondensationPoset> per_type_posets;
  // All channels of all types over base entities, parts re-identified.
  CondensationPoset merged_poset;
  // All channels plus intra-entity rules over parts.
  CondensationPoset part_poset;
  // Classes of merged_poset that join two or more classes of some per-type
  // poset.
  std::vector<ClassId> collapsed_classes;
};

// The flow of one type alone, over its participants' parts.
inline Network type_network(const TypedNetwork& tn, EntityId flow_type) {
  const auto members = tn.participants(flow_type);
  std::vector<EntityId> local(tn.base_entities().size());
  std::vector<std::string> names;
  for (std::size_t i = 0; i < members.size(); ++i) {
    local[members[i]] = static_cast<EntityId>(i);
    names.push_back(tn.part(members[i], flow_type));
  }
  std::vector<Channel> channels;
  for (const auto& [a, b] : tn.channels(flow_type)) channels.emplace_back(local[a], local[b]);
  return Network(EntityTable(std::move(names)), std::move(channels));
}

inline Network merged_network(const TypedNetwork& tn) {
  std::vector<Channel> channels;
  for (EntityId t = 0; t < tn.flow_types().size(); ++t) {
    channels.insert(channels.end(), tn.channels(t).begin(), tn.channels(t).end());
  }
  return Network(tn.base_entities(), std::move(channels));
}

inline Network part_network(const TypedNetwork& tn) {
  std::vector<std::string> names;
  std::map<std::string, EntityId> id;
  for (EntityId e = 0; e < tn.base_entities().size(); ++e) {
    for (EntityId t = 0; t < tn.flow_types().size(); ++t) {
      const auto& p = tn.part(e, t);
      if (id.emplace(p, static_cast<EntityId>(names.size())).second) names.push_back(p);
    }
    if (tn.flow_types().size() == 0) {
      id.emplace(tn.base_entities().name(e), static_cast<EntityId>(names.size()));
      names.push_back(tn.base_entities().name(e));
    }
  }
  std::vector<Channel> channels;
  for (EntityId t = 0; t < tn.flow_types().size(); ++t) {
    for (const auto& [a, b] : tn.channels(t)) {
      channels.emplace_back(id.at(tn.part(a, t)), id.at(tn.part(b, t)));
    }
  }
  for (const auto& rule : tn.rules()) channels.emplace_back(id.at(rule.from_part), id.at(rule.to_part));
  return Network(EntityTable(std::move(names)), std::move(channels));
}

inline MultiflowReport analyze(const TypedNetwork& tn) {
  MultiflowReport report;
  report.merged_poset = condense(merged_network(tn));
  report.part_poset = condense(part_network(tn));

  const std::size_t merged_classes = report.merged_poset.class_count();
  std::vector<bool> collapsed(merged_classes, false);
  for (EntityId t = 0; t < tn.flow_types().size(); ++t) {
    CondensationPoset poset = condense(type_network(tn, t));
    // Per merged class, the first per-type class seen inside it.
    std::vector<std::optional<ClassId>> seen(merged_classes);
    for (ClassId c = 0; c < poset.class_count(); ++c) {
      const EntityId base = tn.owner(poset.entities().name(poset.members(c).front()));
      const ClassId m = report.merged_poset.class_of(base);
      if (seen[m] && *seen[m] != c) collapsed[m] = true;
      if (!seen[m]) seen[m] = c;
    }
    report.per_type_posets.emplace(tn.flow_types().name(t), std::move(poset));
  }
  for (ClassId m = 0; m < merged_classes; ++m) {
    if (collapsed[m]) report.collapsed_classes.push_back(m);
  }
  return report;
}

}  // namespace flowsec
