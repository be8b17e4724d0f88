#pragma once

#include <cstdint>
#include <vector>

#include "dnachannel/sequence.hpp"

namespace dnachannel {

// One distinct molecule species in the pool. `weight` is a real-valued
// abundance (PCR multiplies by non-integer factors; integerization happens
// only at sampling/thinning time). `origin` is the reference id the molecule
// descends from, or -1 if unknown. `terminated` marks synthesis-truncated
// strands lacking a functional primer end.
struct PoolEntry {
  Sequence seq;
  double weight = 0.0;
  std::int32_t origin = -1;
  bool terminated = false;
};

// Multiset of molecules with real abundances. After normalize(), entries are
// sorted by (origin, terminated, seq), duplicates under that key are merged
// by weight addition, and non-positive weights are dropped; total_weight is
// the sequential sum over the canonical order so it is identical regardless
// of how the entries were produced.
class Pool {
 public:
  Pool() = default;

  void add(PoolEntry entry) { entries_.push_back(std::move(entry)); }
  void add(Sequence seq, double weight, std::int32_t origin = -1,
           bool terminated = false) {
    entries_.push_back(PoolEntry{std::move(seq), weight, origin, terminated});
  }

  // Canonicalize: sort, merge duplicates, drop weights <= 0, recompute
  // total weight. Every mutating pipeline step ends with a normalized pool.
  void normalize();

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  double total_weight() const noexcept { return total_weight_; }

  const std::vector<PoolEntry>& entries() const noexcept { return entries_; }
  std::vector<PoolEntry>& mutable_entries() noexcept { return entries_; }

  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  // Physical redundancy r = total_weight / M.
  double physical_redundancy(std::size_t reference_count) const;

 private:
  std::vector<PoolEntry> entries_;
  double total_weight_ = 0.0;
};

// Reference designs: ids are dense 0..M-1 by vector position; all sequences
// share target_length.
struct ReferenceSet {
  std::vector<Sequence> sequences;
  std::size_t target_length = 0;

  std::size_t size() const noexcept { return sequences.size(); }
};

}  // namespace dnachannel
