#pragma once

#include <cstdint>
#include <vector>

#include "dnachannel/pool.hpp"
#include "dnachannel/rng.hpp"
#include "dnachannel/submatrix.hpp"

namespace dnachannel {

struct SynthesisParams {
  // Copy-count distribution: Gamma(copy_shape, copy_scale) rounded to the
  // nearest nonnegative integer. When copy_fixed > 0 every reference gets
  // exactly that many copies instead (used to set up uniform pools).
  double copy_shape = 8.0;
  double copy_scale = 16.0;
  std::int64_t copy_fixed = 0;

  // Per-nucleotide synthesis error rates (p_term is the termination
  // reaction; terminated strands are truncated and flagged).
  IdsRates rates;
  ConditionalSubMatrix sub_matrix = ConditionalSubMatrix::uniform();

  // Memory guard for very high physical redundancy: at most this many
  // distinct errored variants are materialized per reference; beyond it,
  // sampled variants carry proportionally larger weights so total errored
  // mass and expected error rates are preserved exactly. The default never
  // binds for copy counts below ~200.
  std::int64_t max_variants_per_ref = 200;

  bool operator==(const SynthesisParams&) const = default;
};

// Draws M copy counts from Gamma(shape, scale), each rounded to the nearest
// nonnegative integer; copy_fixed > 0 yields that exact count for every
// reference instead (no draws are consumed).
std::vector<std::int64_t> sample_copy_counts(std::size_t M,
                                             const SynthesisParams& params,
                                             RngStream& rng);

// Single-copy error injection: the per-position deletion / substitution /
// insertion / termination scan.
InjectResult inject_synthesis_errors(const Sequence& s,
                                     const SynthesisParams& params,
                                     RngStream& rng);

// Builds the initial pool: per reference, draw a copy count, split copies
// into error-free (aggregated into one weighted entry) and errored ones
// (each materialized via a scan conditioned on at least one event firing).
// Entries record origin = reference id; terminated strands carry the
// terminated marker. Reference i consumes the substream ("synthesis", i),
// so the result is independent of traversal order.
Pool synthesize_pool(const ReferenceSet& refs, const SynthesisParams& params,
                     const RngStream& rng, int threads = 1);

}  // namespace dnachannel
