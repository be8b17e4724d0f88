#include "dnachannel/merge.hpp"

#include <algorithm>
#include <cmath>

#include "dnachannel/errors.hpp"

namespace dnachannel {

MergeParams MergeParams::defaults(std::size_t target_length) {
  MergeParams p;
  p.target_length = target_length;
  p.min_overlap = static_cast<std::size_t>(
      std::ceil(0.87 * static_cast<double>(target_length)));
  p.max_overlap = target_length;
  return p;
}

namespace {

void check_params(const MergeParams& p) {
  if (p.min_overlap < 1 || p.min_overlap > p.max_overlap) {
    throw PrecondViolation("merge requires 1 <= min_overlap <= max_overlap");
  }
  if (p.max_mismatch_ratio < 0.0 || p.max_mismatch_ratio > 1.0) {
    throw PrecondViolation("max_mismatch_ratio must lie in [0,1]");
  }
}

}  // namespace

MergeResult merge_pair(const Sequence& fwd, const Sequence& rev,
                       const MergeParams& params, RngStream& rng) {
  MergeParams p = params;
  if (p.min_overlap == 0 && p.max_overlap == 0 && p.target_length > 0) {
    p = MergeParams::defaults(p.target_length);
    p.max_mismatch_ratio = params.max_mismatch_ratio;
    p.conflict_policy = params.conflict_policy;
  }
  check_params(p);

  const Sequence rc = reverse_complement(rev);
  const std::size_t len_f = fwd.size();
  const std::size_t len_r = rc.size();

  // Layout for merged length m: fwd occupies [0, len_f), rc occupies
  // [m - len_r, m); the reads overlap on [m - len_r, len_f).
  bool found = false;
  std::size_t best_m = 0;
  std::size_t best_o = 0;
  std::size_t best_mm = 0;
  for (std::size_t m = p.max_overlap; m + 1 > p.min_overlap; --m) {
    if (m < std::max(len_f, len_r)) continue;  // merged must contain both
    const std::size_t total = len_f + len_r;
    if (m >= total) continue;  // pairwise overlap < 1
    const std::size_t o = total - m;
    const std::size_t r_start = m - len_r;
    std::size_t mm = 0;
    for (std::size_t pos = r_start; pos < len_f; ++pos) {
      if (fwd[pos] != rc[pos - r_start]) ++mm;
    }
    // minimize mm/o; ties prefer larger o (exact integer cross-compare)
    if (!found || mm * best_o < best_mm * o ||
        (mm * best_o == best_mm * o && o > best_o)) {
      found = true;
      best_m = m;
      best_o = o;
      best_mm = mm;
    }
  }

  MergeResult result;
  if (!found) {
    result.outcome = MergeResult::Outcome::NoOverlap;
    return result;
  }
  result.overlap_len = best_o;
  result.mismatches = best_mm;
  if (static_cast<double>(best_mm) >
      p.max_mismatch_ratio * static_cast<double>(best_o)) {
    result.outcome = MergeResult::Outcome::TooManyMismatches;
    return result;
  }
  if (best_mm > 0 && p.conflict_policy == MergeParams::ConflictPolicy::fail) {
    result.outcome = MergeResult::Outcome::TooManyMismatches;
    return result;
  }

  const std::size_t r_start = best_m - len_r;
  Sequence merged;
  merged.reserve(best_m);
  merged.assign(fwd);
  merged.resize(best_m);
  for (std::size_t pos = len_f; pos < best_m; ++pos) {
    merged[pos] = rc[pos - r_start];
  }
  if (best_mm > 0) {
    for (std::size_t pos = r_start; pos < len_f; ++pos) {
      const char rb = rc[pos - r_start];
      if (fwd[pos] != rb && rng.uniform() < 0.5) {
        merged[pos] = rb;
      }
    }
  }
  result.outcome = MergeResult::Outcome::Merged;
  result.merged = std::move(merged);
  return result;
}

}  // namespace dnachannel
