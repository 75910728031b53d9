#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace flowsec {

// A set of small integers drawn from [0, universe). Small sets over a large
// universe are kept as a sorted vector; a set switches to a bit vector once
// the vector would take more memory than the bits, and never switches back
// on growth. Universes up to kAlwaysDense start out as bit vectors.
//
// All comparisons are extensional: two sets with different representations
// but the same members compare equal.
class IndexSet {
 public:
  using value_type = std::uint32_t;
  static constexpr std::size_t kAlwaysDense = 4096;

  IndexSet() = default;
  explicit IndexSet(std::size_t universe) : universe_(universe) {
    if (universe_ <= kAlwaysDense) to_dense();
  }

  static IndexSet dense(std::size_t universe) {
    IndexSet s;
    s.universe_ = universe;
    s.to_dense();
    return s;
  }

  static IndexSet full(std::size_t universe) {
    IndexSet s = dense(universe);
    s.bits_.set();
    return s;
  }

  // Builds a set from members in any order; duplicates are ignored.
  static IndexSet from_elements(std::size_t universe, std::vector<value_type> elems) {
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    IndexSet s;
    s.universe_ = universe;
    s.sparse_ = std::move(elems);
    assert(s.sparse_.empty() || s.sparse_.back() < universe);
    if (universe <= kAlwaysDense) {
      s.to_dense();
    } else {
      s.maybe_densify();
    }
    return s;
  }

  std::size_t universe() const noexcept { return universe_; }
  bool is_dense() const noexcept { return dense_; }

  std::size_t size() const { return dense_ ? bits_.count() : sparse_.size(); }
  bool empty() const { return dense_ ? bits_.none() : sparse_.empty(); }

  bool contains(value_type i) const {
    assert(i < universe_);
    if (dense_) return bits_.test(i);
    return std::binary_search(sparse_.begin(), sparse_.end(), i);
  }

  void insert(value_type i) {
    assert(i < universe_);
    if (dense_) {
      bits_.set(i);
      return;
    }
    auto it = std::lower_bound(sparse_.begin(), sparse_.end(), i);
    if (it != sparse_.end() && *it == i) return;
    sparse_.insert(it, i);
    maybe_densify();
  }

  IndexSet& operator|=(const IndexSet& other) {
    assert(universe_ == other.universe_);
    if (other.dense_) {
      if (!dense_) to_dense();
      bits_ |= other.bits_;
    } else if (dense_) {
      for (value_type i : other.sparse_) bits_.set(i);
    } else {
      std::vector<value_type> merged;
      merged.reserve(sparse_.size() + other.sparse_.size());
      std::set_union(sparse_.begin(), sparse_.end(), other.sparse_.begin(),
                     other.sparse_.end(), std::back_inserter(merged));
      sparse_ = std::move(merged);
      maybe_densify();
    }
    return *this;
  }

  IndexSet& operator&=(const IndexSet& other) {
    assert(universe_ == other.universe_);
    if (dense_ && other.dense_) {
      bits_ &= other.bits_;
      return *this;
    }
    // At least one side is sparse, so the result is sparse-sized.
    const IndexSet& small = dense_ ? other : *this;
    const IndexSet& probe = dense_ ? *this : other;
    std::vector<value_type> kept;
    for (value_type i : small.sparse_) {
      if (probe.contains(i)) kept.push_back(i);
    }
    if (universe_ <= kAlwaysDense) {
      bits_.reset();
      for (value_type i : kept) bits_.set(i);
      dense_ = true;
    } else {
      sparse_ = std::move(kept);
      bits_.clear();
      dense_ = false;
    }
    return *this;
  }

  bool is_subset_of(const IndexSet& other) const {
    assert(universe_ == other.universe_);
    if (dense_ && other.dense_) return bits_.is_subset_of(other.bits_);
    if (!dense_ && !other.dense_) {
      return std::includes(other.sparse_.begin(), other.sparse_.end(), sparse_.begin(),
                           sparse_.end());
    }
    if (!dense_) {
      return std::all_of(sparse_.begin(), sparse_.end(),
                         [&](value_type i) { return other.bits_.test(i); });
    }
    // Dense subset of a sparse superset.
    if (bits_.count() > other.sparse_.size()) return false;
    for (auto i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i)) {
      if (!std::binary_search(other.sparse_.begin(), other.sparse_.end(),
                              static_cast<value_type>(i))) {
        return false;
      }
    }
    return true;
  }

  bool intersects(const IndexSet& other) const {
    assert(universe_ == other.universe_);
    if (dense_ && other.dense_) return bits_.intersects(other.bits_);
    const IndexSet& small = dense_ ? other : *this;
    const IndexSet& probe = dense_ ? *this : other;
    return std::any_of(small.sparse_.begin(), small.sparse_.end(),
                       [&](value_type i) { return probe.contains(i); });
  }

  // Visits members in increasing order.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    if (dense_) {
      for (auto i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i)) {
        fn(static_cast<value_type>(i));
      }
    } else {
      for (value_type i : sparse_) fn(i);
    }
  }

  std::vector<value_type> to_vector() const {
    if (!dense_) return sparse_;
    std::vector<value_type> out;
    out.reserve(bits_.count());
    for_each([&](value_type i) { out.push_back(i); });
    return out;
  }

  friend bool operator==(const IndexSet& a, const IndexSet& b) {
    if (a.universe_ != b.universe_) return false;
    if (a.dense_ && b.dense_) return a.bits_ == b.bits_;
    if (!a.dense_ && !b.dense_) return a.sparse_ == b.sparse_;
    return a.size() == b.size() && a.is_subset_of(b);
  }

 private:
  using Bits = boost::dynamic_bitset<std::uint64_t>;

  void to_dense() {
    bits_.resize(universe_);
    for (value_type i : sparse_) bits_.set(i);
    sparse_.clear();
    sparse_.shrink_to_fit();
    dense_ = true;
  }

  void maybe_densify() {
    if (sparse_.size() * 32 > universe_) to_dense();
  }

  std::size_t universe_ = 0;
  bool dense_ = false;
  std::vector<value_type> sparse_;
  Bits bits_;
};

}  // namespace flowsec
