#pragma once

#include <cstdint>

#include "dnachannel/pool.hpp"
#include "dnachannel/rng.hpp"

namespace dnachannel {

// PCR efficiency model. strand_specific draws one efficiency per entry
// (sequence-determined bias, constant across cycles); per_cycle draws a
// fresh efficiency every cycle (stochastic amplification noise).
struct EfficiencyModel {
  enum class Mode { strand_specific, per_cycle };
  Mode mode = Mode::strand_specific;
  double mean = 1.85;
  double stddev = 0.0;

  bool operator==(const EfficiencyModel&) const = default;
};

struct DecayParams {
  enum class Enzyme { proofreading, non_proofreading };
  double half_lives = 0.0;
  Enzyme enzyme = Enzyme::proofreading;
  // Expected deamination events per strand per half-life for a strand of
  // typical 50% C+G content (the per-strand rate scales linearly with the
  // C+G fraction). Free parameter: the source data only shows the
  // signature (elevated C->T / G->A), not an absolute rate.
  double deam_events_per_strand_per_halflife = 0.05;
  // Entries whose integerized weight is at or above this use expectation
  // scaling instead of binomial thinning.
  double integerization_threshold = 1e6;
  // Memory guard: at most this many deamination variants are materialized
  // per entry; weights scale so mutated mass is preserved.
  std::int64_t max_variants_per_entry = 64;

  bool operator==(const DecayParams&) const = default;
};

// Stochastic thinning used by decay and dilute: weights below `threshold`
// (after rounding to the nearest integer) are binomially thinned with
// survival probability p; larger weights are scaled by p directly.
double thin_weight(double weight, double p, RngStream& rng,
                   double threshold = 1e6);

// PCR amplification. Entries marked terminated lack primers and are removed
// before amplification (cycles == 0 is an exact identity and skips even the
// removal). Efficiency draws in strand_specific mode are clamped to [1,2]
// per draw; per_cycle products are clamped to [1, 2^cycles] in aggregate so
// single-cycle noise is preserved but the total never exceeds perfect
// doubling or shrinks the entry.
Pool pcr(const Pool& pool, int cycles, const EfficiencyModel& eff,
         const RngStream& rng, int threads = 1);

// Storage decay: binomial breakage thinning with survival 2^(-half_lives),
// then deamination (see apply_deamination). half_lives == 0 is an identity.
Pool decay(const Pool& pool, const DecayParams& params, const RngStream& rng,
           int threads = 1);

// Deamination step alone, exposed for direct testing. Per-strand hit
// probability p_hit = 1 - exp(-lambda), lambda = rate * half_lives * 2 *
// cg_fraction(seq). proofreading enzymes lose a molecule only when both
// strands are hit (probability p_hit^2); non_proofreading enzymes read each
// hit molecule half as the original and half with the hit site flipped
// (C->T, or G->A when the deaminated cytosine lies on the complementary
// strand).
Pool apply_deamination(const Pool& pool, const DecayParams& params,
                       const RngStream& rng, int threads = 1);

// Random subsampling: integerize weights, keep each unit with probability
// keep_fraction (expectation scaling above threshold), drop empty entries.
Pool dilute(const Pool& pool, double keep_fraction, const RngStream& rng,
            double threshold = 1e6, int threads = 1);

// `steps` rounds of dilute(keep_fraction) followed by bias-free
// amplification by amp_factor. Requires keep_fraction * amp_factor == 1
// within 1e-9 so expected pool size is preserved.
Pool interact(const Pool& pool, int steps, double keep_fraction,
              double amp_factor, const RngStream& rng, int threads = 1);

// Per-strand deamination hit probability for a given sequence under the
// given parameters (helper shared with tests).
double deamination_hit_prob(const Sequence& seq, const DecayParams& params);

}  // namespace dnachannel
