#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "flowsec/error.hpp"

namespace flowsec {

using EntityId = std::uint32_t;
using Channel = std::pair<EntityId, EntityId>;
using NamedChannel = std::pair<std::string, std::string>;

// Entity names in declaration order plus a name -> id lookup. Shared by every
// structure that indexes entities.
class EntityTable {
 public:
  EntityTable() = default;

  explicit EntityTable(std::vector<std::string> names) : names_(std::move(names)) {
    index_.reserve(names_.size());
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (!index_.emplace(names_[i], static_cast<EntityId>(i)).second) {
        throw DuplicateEntity("duplicate entity '" + names_[i] + "'");
      }
    }
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(EntityId id) const { return names_.at(id); }

  std::optional<EntityId> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  EntityId id(std::string_view name) const {
    auto found = find(name);
    if (!found) throw UnknownEntity("unknown entity '" + std::string(name) + "'");
    return *found;
  }

  // Ids sorted by name, bytewise.
  std::vector<EntityId> sorted_ids() const {
    std::vector<EntityId> ids(names_.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<EntityId>(i);
    std::sort(ids.begin(), ids.end(),
              [&](EntityId a, EntityId b) { return names_[a] < names_[b]; });
    return ids;
  }

  bool same_names(const EntityTable& other) const {
    if (size() != other.size()) return false;
    return std::all_of(names_.begin(), names_.end(),
                       [&](const std::string& n) { return other.find(n).has_value(); });
  }

  friend bool operator==(const EntityTable& a, const EntityTable& b) {
    return a.names_ == b.names_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, EntityId> index_;
};

// A finite set of named entities with a Channel relation between them.
// Channels form a set: duplicates collapse, and the stored order is sorted by
// (from, to) id regardless of input order. Self-channels are kept.
class Network {
 public:
  Network() = default;

  Network(EntityTable entities, std::vector<Channel> channels)
      : entities_(std::move(entities)), channels_(std::move(channels)) {
    for (const auto& [from, to] : channels_) {
      if (from >= entities_.size() || to >= entities_.size()) {
        throw UnknownEndpoint("channel endpoint out of range");
      }
    }
    std::sort(channels_.begin(), channels_.end());
    channels_.erase(std::unique(channels_.begin(), channels_.end()), channels_.end());
    successors_.resize(entities_.size());
    for (const auto& [from, to] : channels_) successors_[from].push_back(to);
  }

  const EntityTable& entities() const noexcept { return entities_; }
  std::size_t size() const noexcept { return entities_.size(); }
  const std::vector<Channel>& channels() const noexcept { return channels_; }
  const std::vector<EntityId>& successors(EntityId id) const { return successors_.at(id); }

  bool has_channel(EntityId from, EntityId to) const {
    return std::binary_search(channels_.begin(), channels_.end(), Channel{from, to});
  }

  std::vector<NamedChannel> named_channels() const {
    std::vector<NamedChannel> out;
    out.reserve(channels_.size());
    for (const auto& [from, to] : channels_) {
      out.emplace_back(entities_.name(from), entities_.name(to));
    }
    return out;
  }

  friend bool operator==(const Network& a, const Network& b) {
    return a.entities_ == b.entities_ && a.channels_ == b.channels_;
  }

 private:
  EntityTable entities_;
  std::vector<Channel> channels_;
  std::vector<std::vector<EntityId>> successors_;
};

inline Network build_network(std::vector<std::string> entities,
                             const std::vector<NamedChannel>& channels) {
  EntityTable table(std::move(entities));
  std::vector<Channel> ids;
  ids.reserve(channels.size());
  for (const auto& [from, to] : channels) {
    auto f = table.find(from);
    auto t = table.find(to);
    if (!f || !t) {
      throw UnknownEndpoint("channel " + from + " -> " + to + " references undeclared entity '" +
                            (f ? to : from) + "'");
    }
    ids.emplace_back(*f, *t);
  }
  return Network(std::move(table), std::move(ids));
}

}  // namespace flowsec
