#include "dnachannel/process.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dnachannel/errors.hpp"
#include "dnachannel/parallel.hpp"
#include "dnachannel/sequence.hpp"

namespace dnachannel {

namespace {

constexpr std::size_t kGrain = 4096;

// Stable per-entry stream id. Includes origin and the terminated flag so
// distinct entries that share a sequence still draw independent samples.
std::uint64_t entry_salt(const PoolEntry& e) {
  std::uint64_t h = hash_label(e.seq);
  h = mix_u64(h, static_cast<std::uint64_t>(
                     static_cast<std::int64_t>(e.origin)));
  return mix_u64(h, e.terminated ? 1 : 0);
}

void check_efficiency(const EfficiencyModel& eff) {
  if (!(eff.mean > 1.0) || !(eff.mean <= 2.0)) {
    throw PrecondViolation("PCR efficiency mean must lie in (1,2]");
  }
  if (eff.stddev < 0.0) {
    throw PrecondViolation("PCR efficiency stddev must be >= 0");
  }
}

}  // namespace

double thin_weight(double weight, double p, RngStream& rng, double threshold) {
  if (p < 0.0 || p > 1.0) {
    throw PrecondViolation("thinning probability must lie in [0,1]");
  }
  if (weight <= 0.0) return 0.0;
  if (weight >= threshold) return weight * p;
  const std::int64_t w_int =
      static_cast<std::int64_t>(std::llround(weight));
  if (w_int <= 0) return 0.0;
  if (static_cast<double>(w_int) >= threshold) return weight * p;
  return static_cast<double>(rng.binomial(w_int, p));
}

Pool pcr(const Pool& pool, int cycles, const EfficiencyModel& eff,
         const RngStream& rng, int threads) {
  if (cycles < 0) throw PrecondViolation("pcr cycles must be >= 0");
  check_efficiency(eff);
  if (cycles == 0) return pool;

  Pool out;
  std::vector<PoolEntry> entries;
  entries.reserve(pool.size());
  for (const PoolEntry& e : pool) {
    if (!e.terminated) entries.push_back(e);  // no primers: diluted out
  }

  const double max_factor = std::ldexp(1.0, cycles);  // 2^cycles
  parallel_for(entries.size(), threads, kGrain,
               [&](std::size_t, std::size_t b, std::size_t e) {
                 for (std::size_t i = b; i < e; ++i) {
                   PoolEntry& entry = entries[i];
                   // Efficiency is a property of the sequence, so the
                   // stream is keyed on the sequence alone: identical
                   // molecules amplify identically.
                   RngStream er =
                       rng.substream("pcr", hash_label(entry.seq));
                   double factor;
                   if (eff.mode == EfficiencyModel::Mode::strand_specific) {
                     double E = er.normal(eff.mean, eff.stddev);
                     E = std::clamp(E, 1.0, 2.0);
                     factor = std::pow(E, cycles);
                   } else {
                     factor = 1.0;
                     for (int c = 0; c < cycles; ++c) {
                       factor *= er.normal(eff.mean, eff.stddev);
                     }
                     factor = std::clamp(factor, 1.0, max_factor);
                   }
                   entry.weight *= factor;
                 }
               });

  for (PoolEntry& e : entries) out.add(std::move(e));
  out.normalize();
  return out;
}

double deamination_hit_prob(const Sequence& seq, const DecayParams& params) {
  const double lambda = params.deam_events_per_strand_per_halflife *
                        params.half_lives * 2.0 * cg_fraction(seq);
  return 1.0 - std::exp(-lambda);
}

Pool apply_deamination(const Pool& pool, const DecayParams& params,
                       const RngStream& rng, int threads) {
  if (params.deam_events_per_strand_per_halflife < 0.0) {
    throw PrecondViolation("deamination rate must be >= 0");
  }
  if (params.deam_events_per_strand_per_halflife == 0.0 ||
      params.half_lives == 0.0) {
    return pool;
  }

  std::vector<PoolEntry> entries(pool.entries());
  const std::size_t chunks = (entries.size() + kGrain - 1) / kGrain;
  std::vector<std::vector<PoolEntry>> emitted(chunks);

  parallel_chunks(
      entries.size(), chunks, threads,
      [&](std::size_t chunk, std::size_t b, std::size_t e) {
        std::vector<std::size_t> sites;
        for (std::size_t i = b; i < e; ++i) {
          PoolEntry& entry = entries[i];
          const double p_hit = deamination_hit_prob(entry.seq, params);
          if (p_hit <= 0.0 || entry.weight <= 0.0) continue;
          RngStream er = rng.substream("deam", entry_salt(entry));

          if (params.enzyme == DecayParams::Enzyme::proofreading) {
            // Molecule lost only when both strands are hit.
            entry.weight = thin_weight(entry.weight, 1.0 - p_hit * p_hit,
                                       er, params.integerization_threshold);
            continue;
          }

          // non_proofreading: each hit molecule reads half original, half
          // with the hit site flipped.
          const double n_hit = thin_weight(
              entry.weight, p_hit, er, params.integerization_threshold);
          if (n_hit <= 0.0) continue;
          sites.clear();
          for (std::size_t pos = 0; pos < entry.seq.size(); ++pos) {
            const char c = entry.seq[pos];
            if (c == 'C' || c == 'G') sites.push_back(pos);
          }
          if (sites.empty()) continue;  // p_hit would be 0; defensive
          entry.weight -= n_hit / 2.0;
          const std::int64_t n_emit = std::min<std::int64_t>(
              params.max_variants_per_entry,
              std::max<std::int64_t>(
                  1, static_cast<std::int64_t>(std::llround(n_hit))));
          const double w_each = (n_hit / 2.0) / static_cast<double>(n_emit);
          for (std::int64_t v = 0; v < n_emit; ++v) {
            const std::size_t pos = sites[static_cast<std::size_t>(
                er.uniform_int(sites.size()))];
            PoolEntry mut = entry;
            mut.weight = w_each;
            mut.seq[pos] = (mut.seq[pos] == 'C') ? 'T' : 'A';
            emitted[chunk].push_back(std::move(mut));
          }
        }
      });

  Pool out;
  for (PoolEntry& e : entries) {
    if (e.weight > 0.0) out.add(std::move(e));
  }
  for (auto& chunk : emitted) {
    for (PoolEntry& e : chunk) out.add(std::move(e));
  }
  out.normalize();
  return out;
}

Pool decay(const Pool& pool, const DecayParams& params, const RngStream& rng,
           int threads) {
  if (params.half_lives < 0.0) {
    throw PrecondViolation("half_lives must be >= 0");
  }
  if (params.half_lives == 0.0) return pool;

  const double survival = std::exp2(-params.half_lives);
  std::vector<PoolEntry> entries(pool.entries());
  parallel_for(entries.size(), threads, kGrain,
               [&](std::size_t, std::size_t b, std::size_t e) {
                 for (std::size_t i = b; i < e; ++i) {
                   PoolEntry& entry = entries[i];
                   RngStream er =
                       rng.substream("decay", entry_salt(entry));
                   entry.weight =
                       thin_weight(entry.weight, survival, er,
                                   params.integerization_threshold);
                 }
               });

  Pool broken;
  for (PoolEntry& e : entries) {
    if (e.weight > 0.0) broken.add(std::move(e));
  }
  broken.normalize();
  return apply_deamination(broken, params, rng, threads);
}

Pool dilute(const Pool& pool, double keep_fraction, const RngStream& rng,
            double threshold, int threads) {
  if (!(keep_fraction > 0.0) || keep_fraction > 1.0) {
    throw PrecondViolation("keep_fraction must lie in (0,1]");
  }
  std::vector<PoolEntry> entries(pool.entries());
  parallel_for(entries.size(), threads, kGrain,
               [&](std::size_t, std::size_t b, std::size_t e) {
                 for (std::size_t i = b; i < e; ++i) {
                   PoolEntry& entry = entries[i];
                   // Integerize even at keep_fraction == 1 (documented:
                   // identity holds up to integerization).
                   const double w_int = std::llround(entry.weight);
                   if (w_int <= 0.0) {
                     entry.weight = 0.0;
                     continue;
                   }
                   if (keep_fraction == 1.0) {
                     entry.weight = w_int;
                     continue;
                   }
                   RngStream er =
                       rng.substream("dilute", entry_salt(entry));
                   entry.weight =
                       thin_weight(w_int, keep_fraction, er, threshold);
                 }
               });
  Pool out;
  for (PoolEntry& e : entries) {
    if (e.weight > 0.0) out.add(std::move(e));
  }
  out.normalize();
  return out;
}

Pool interact(const Pool& pool, int steps, double keep_fraction,
              double amp_factor, const RngStream& rng, int threads) {
  if (steps < 0) throw PrecondViolation("interact steps must be >= 0");
  if (std::fabs(keep_fraction * amp_factor - 1.0) > 1e-9) {
    throw PrecondViolation(
        "interact requires keep_fraction * amp_factor == 1 (pool size "
        "preserved in expectation)");
  }
  Pool current = pool;
  for (int s = 0; s < steps; ++s) {
    current = dilute(current, keep_fraction, rng.substream("interact", s),
                     1e6, threads);
    std::vector<PoolEntry> entries(current.entries());
    for (PoolEntry& e : entries) e.weight *= amp_factor;
    Pool amplified;
    for (PoolEntry& e : entries) amplified.add(std::move(e));
    amplified.normalize();
    current = std::move(amplified);
  }
  return current;
}

}  // namespace dnachannel
