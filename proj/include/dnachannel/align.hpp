#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "dnachannel/pool.hpp"
#include "dnachannel/sequence.hpp"

namespace dnachannel {

// Alignment operation counts. Insertions/deletions are oriented as edits
// transforming the first argument (reference) into the second (read):
// insertions are read-only characters, deletions are reference-only ones.
struct OpCounts {
  std::int64_t substitutions = 0;
  std::int64_t insertions = 0;
  std::int64_t deletions = 0;
  std::int64_t distance = 0;

  bool operator==(const OpCounts& o) const {
    return substitutions == o.substitutions && insertions == o.insertions &&
           deletions == o.deletions && distance == o.distance;
  }
};

// Unit-cost global edit distance.
std::int64_t edit_distance(const Sequence& a, const Sequence& b);

// Banded early-abandon variant: returns the exact distance when it is
// <= max_dist, otherwise any value > max_dist (always max_dist + 1).
// Differential-tested against edit_distance.
std::int64_t bounded_edit_distance(const Sequence& a, const Sequence& b,
                                   std::int64_t max_dist);

// Optimal global alignment op counts under the fixed tie-break order
// match > substitution > deletion > insertion (applied along a canonical
// forward walk over suffix distances, so counts are deterministic).
OpCounts edit_ops(const Sequence& a, const Sequence& b);

// Same walk, additionally accumulating the substitution pairs into
// pair_counts[from][to] (A=0, C=1, G=2, T=3).
OpCounts edit_ops_with_pairs(const Sequence& a, const Sequence& b,
                             std::int64_t pair_counts[4][4]);

// Alignment with zero-cost leading/trailing gaps on either sequence,
// returning interior op counts only. Objective: maximize
// (matches - interior distance) -- the unit-score overlap alignment -- with
// ties broken toward the smaller interior distance; the canonical path uses
// the same op preference as edit_ops and start preference (0,0), then
// (0,1..n), then (1..m,0). Interior distance never exceeds
// edit_ops(a,b).distance.
OpCounts semiglobal_ops(const Sequence& a, const Sequence& b);

struct MatchResult {
  std::int64_t read_id = 0;
  std::int32_t reference_id = -1;
  OpCounts ops;
  bool correct_length = false;
  // True when another reference achieved the same minimal distance; the
  // lowest id wins but the match is excluded from substitution-matrix
  // estimation.
  bool ambiguous = false;
};

// k-mer postings index over a reference set, plus an exact-sequence lookup
// for the (dominant) error-free case.
class RefIndex {
 public:
  RefIndex(const ReferenceSet& refs, int k);

  int k() const { return k_; }
  const ReferenceSet& refs() const { return *refs_; }

  // All reference ids sharing at least one k-mer with `read`, ascending,
  // deduplicated.
  std::vector<std::int32_t> candidates(const Sequence& read) const;

  // Reference id whose sequence equals `read` exactly, or -1.
  std::int32_t exact_match(const Sequence& read) const;

  // Postings list for one packed k-mer (empty if absent); exposed for
  // completeness tests.
  const std::vector<std::int32_t>* postings(std::uint64_t packed_kmer) const;

  // Largest edit distance for which the k-mer prefilter provably produces
  // every reference as a candidate (q-gram lemma: d*k <= len(read) - k).
  std::int64_t guaranteed_distance(std::size_t read_len) const;

 private:
  const ReferenceSet* refs_;
  int k_;
  std::unordered_map<std::uint64_t, std::vector<std::int32_t>> postings_;
  std::unordered_map<std::uint64_t, std::vector<std::int32_t>> exact_;
};

RefIndex build_ref_index(const ReferenceSet& refs, int k = 12);

// Best-reference lookup: minimal edit distance over the reference set, ties
// to the lowest id (flagged ambiguous), std::nullopt when the minimum
// exceeds max_dist. The k-mer prefilter is exact: whenever it cannot prove
// its candidate set covers the best match (no candidates, or best candidate
// distance above the q-gram guarantee), the scan falls back to the full
// reference set, so results equal a naive full scan.
std::optional<MatchResult> match_reference(const Sequence& read,
                                           const RefIndex& index,
                                           std::int64_t max_dist);

// Reference implementation used by the differential tests: scans every
// reference with plain bounded distances.
std::optional<MatchResult> match_reference_naive(const Sequence& read,
                                                 const ReferenceSet& refs,
                                                 std::int64_t max_dist);

// Default matching cutoff: 15% of the target length.
std::int64_t default_max_dist(std::size_t target_length);

// Packs s[pos..pos+k) into 2-bit encoding; caller guarantees validity.
std::uint64_t pack_kmer(const Sequence& s, std::size_t pos, int k);

}  // namespace dnachannel
