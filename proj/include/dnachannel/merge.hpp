#pragma once

#include <cstdint>

#include "dnachannel/rng.hpp"
#include "dnachannel/sequence.hpp"

namespace dnachannel {

struct MergeParams {
  // Bounds on the candidate MERGED length (the reconstructed molecule).
  // With reads of length len_f/len_r, a merged length of m corresponds to a
  // pairwise read overlap of len_f + len_r - m, so the default window
  // [ceil(0.87*target), target] admits the designed molecule while
  // rejecting spurious short overlaps. Defaults are derived from
  // target_length when the counts are left at 0.
  std::size_t target_length = 0;
  std::size_t min_overlap = 0;  // default ceil(0.87 * target_length)
  std::size_t max_overlap = 0;  // default target_length
  double max_mismatch_ratio = 0.20;
  enum class ConflictPolicy { random, fail };
  ConflictPolicy conflict_policy = ConflictPolicy::random;

  // Fills min/max_overlap defaults from target_length.
  static MergeParams defaults(std::size_t target_length);

  bool operator==(const MergeParams&) const = default;
};

struct MergeResult {
  enum class Outcome { Merged, NoOverlap, TooManyMismatches };
  Outcome outcome = Outcome::NoOverlap;
  Sequence merged;             // set only for Merged
  std::size_t overlap_len = 0;  // pairwise read overlap of the chosen layout
  std::size_t mismatches = 0;
};

// Merges a forward read with a reverse read (instrument orientation; it is
// reverse-complemented internally). Scans merged lengths from max_overlap
// down to min_overlap, keeps the layout minimizing mismatches/overlap_len
// (ties prefer the longer pairwise overlap), and accepts iff that ratio is
// <= max_mismatch_ratio. Conflicting overlap positions are resolved per
// conflict_policy: random picks either base with an unbiased coin; fail
// rejects any accepted layout that still carries conflicts.
MergeResult merge_pair(const Sequence& fwd, const Sequence& rev,
                       const MergeParams& params, RngStream& rng);

}  // namespace dnachannel
