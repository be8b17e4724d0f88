#include "dnachannel/synthesis.hpp"

#include <algorithm>
#include <cmath>

#include "dnachannel/errors.hpp"
#include "dnachannel/parallel.hpp"

namespace dnachannel {

namespace {

void check_params(const SynthesisParams& p) {
  if (!(p.copy_shape > 0.0) || !(p.copy_scale > 0.0)) {
    throw PrecondViolation("copy_shape and copy_scale must be > 0");
  }
  if (p.copy_fixed < 0) {
    throw PrecondViolation("copy_fixed must be >= 0");
  }
  if (p.max_variants_per_ref < 1) {
    throw PrecondViolation("max_variants_per_ref must be >= 1");
  }
}

// Emits one errored copy conditioned on at least one scan event firing.
// suffix_q[j] = product over t >= j of (1 - p_t), where p_t is the total
// per-position event probability at position t; suffix_q[len] = 1. The scan
// walks positions and, while no event has fired, replaces the unconditional
// event probability p_j with p_j / (1 - suffix_q[j]) — the probability of an
// event at j given at least one event in the remaining suffix. From the
// first event on, the scan continues unconditioned, so the conditional
// distribution matches rejection sampling of the plain scan exactly.
InjectResult inject_conditioned(const Sequence& s, const IdsRates& rates,
                                const ConditionalSubMatrix& matrix,
                                const std::vector<double>& pos_prob,
                                const std::vector<double>& suffix_q,
                                RngStream& rng) {
  InjectResult out;
  out.seq.reserve(s.size() + 4);
  std::size_t i = 0;
  bool fired = false;
  // Conditioned phase: up to and including the first event. The retry loop
  // covers the ~1-ulp floating-point corner where the forced fire at the
  // last event-capable position rounds below 1.
  for (int attempt = 0; !fired; ++attempt) {
    if (attempt > 1000) {
      throw PrecondViolation(
          "conditioned injection failed to fire an event; "
          "per-position probabilities are all zero");
    }
    out.seq.clear();
    out.terminated = false;
    for (i = 0; i < s.size(); ++i) {
      const char c = s[i];
      const int b = base_index(c);
      const double p_here = pos_prob[i];
      const double p_fire = p_here / (1.0 - suffix_q[i]);
      const double u = rng.uniform();
      if (!(u < p_fire)) {
        out.seq.push_back(c);
        continue;
      }
      fired = true;
      // An event fires at i; pick which one proportionally to its share.
      const double p_sub_eff = 4.0 * rates.p_sub * matrix.row_mass(b);
      const double v = (u / p_fire) * p_here;
      if (v < rates.p_del) {
        // deletion: emit nothing
      } else if (v < rates.p_del + p_sub_eff) {
        const double unit = (v - rates.p_del) / p_sub_eff;
        out.seq.push_back(matrix.draw_target(b, unit));
      } else if (v < rates.p_del + p_sub_eff + rates.p_ins) {
        out.seq.push_back(index_base(static_cast<int>(rng.uniform_int(4))));
        out.seq.push_back(c);
      } else {
        out.terminated = true;
        return out;
      }
      ++i;
      break;
    }
  }
  // Unconditioned remainder.
  for (; i < s.size(); ++i) {
    const char c = s[i];
    const int b = base_index(c);
    const double p_sub_eff = 4.0 * rates.p_sub * matrix.row_mass(b);
    const double u = rng.uniform();
    if (u < rates.p_del) {
      continue;
    }
    if (u < rates.p_del + p_sub_eff) {
      const double unit = (u - rates.p_del) / p_sub_eff;
      out.seq.push_back(matrix.draw_target(b, unit));
      continue;
    }
    if (u < rates.p_del + p_sub_eff + rates.p_ins) {
      out.seq.push_back(index_base(static_cast<int>(rng.uniform_int(4))));
      out.seq.push_back(c);
      continue;
    }
    if (u < rates.p_del + p_sub_eff + rates.p_ins + rates.p_term) {
      out.terminated = true;
      return out;
    }
    out.seq.push_back(c);
  }
  return out;
}

}  // namespace

std::vector<std::int64_t> sample_copy_counts(std::size_t M,
                                             const SynthesisParams& params,
                                             RngStream& rng) {
  check_params(params);
  if (M < 1) throw PrecondViolation("sample_copy_counts requires M >= 1");
  if (params.copy_fixed > 0) {
    return std::vector<std::int64_t>(M, params.copy_fixed);
  }
  std::vector<std::int64_t> counts(M);
  for (std::size_t i = 0; i < M; ++i) {
    const double g = rng.gamma(params.copy_shape, params.copy_scale);
    counts[i] = static_cast<std::int64_t>(std::llround(std::max(0.0, g)));
  }
  return counts;
}

InjectResult inject_synthesis_errors(const Sequence& s,
                                     const SynthesisParams& params,
                                     RngStream& rng) {
  return inject_ids(s, params.rates, params.sub_matrix, rng);
}

Pool synthesize_pool(const ReferenceSet& refs, const SynthesisParams& params,
                     const RngStream& rng, int threads) {
  check_params(params);
  const std::size_t M = refs.size();
  Pool pool;
  if (M == 0) return pool;

  // Copy counts come from one dedicated stream in reference order so they
  // are identical regardless of how per-reference work is scheduled.
  RngStream copy_rng = rng.substream("synthesis/copies");
  std::vector<std::int64_t> counts = sample_copy_counts(M, params, copy_rng);

  const IdsRates& rates = params.rates;
  const bool noiseless = rates.p_sub == 0.0 && rates.p_ins == 0.0 &&
                         rates.p_del == 0.0 && rates.p_term == 0.0;

  std::vector<std::vector<PoolEntry>> per_chunk;
  const std::size_t grain = 256;
  const std::size_t chunks = (M + grain - 1) / grain;
  per_chunk.resize(chunks);

  parallel_chunks(M, chunks, threads, [&](std::size_t chunk, std::size_t b,
                                          std::size_t e) {
    std::vector<PoolEntry>& out = per_chunk[chunk];
    std::vector<double> pos_prob;
    std::vector<double> suffix_q;
    for (std::size_t i = b; i < e; ++i) {
      const std::int64_t c = counts[i];
      if (c <= 0) continue;
      const Sequence& ref = refs.sequences[i];
      const auto id = static_cast<std::int32_t>(i);
      if (noiseless || ref.empty()) {
        out.push_back(PoolEntry{ref, static_cast<double>(c), id, false});
        continue;
      }

      // Per-position event probabilities and suffix no-event products.
      const std::size_t L = ref.size();
      pos_prob.assign(L, 0.0);
      suffix_q.assign(L + 1, 1.0);
      for (std::size_t j = L; j-- > 0;) {
        pos_prob[j] =
            per_position_event_prob(rates, params.sub_matrix,
                                    base_index(ref[j]));
        suffix_q[j] = suffix_q[j + 1] * (1.0 - pos_prob[j]);
      }
      const double p_any = 1.0 - suffix_q[0];

      RngStream ref_rng = rng.substream("synthesis/errors", i);
      const std::int64_t errored = ref_rng.binomial(c, p_any);
      if (c - errored > 0) {
        out.push_back(
            PoolEntry{ref, static_cast<double>(c - errored), id, false});
      }
      if (errored <= 0) continue;

      const std::int64_t emit =
          std::min<std::int64_t>(errored, params.max_variants_per_ref);
      const double weight_each =
          static_cast<double>(errored) / static_cast<double>(emit);
      for (std::int64_t v = 0; v < emit; ++v) {
        InjectResult r = inject_conditioned(ref, rates, params.sub_matrix,
                                            pos_prob, suffix_q, ref_rng);
        out.push_back(
            PoolEntry{std::move(r.seq), weight_each, id, r.terminated});
      }
    }
  });

  for (auto& chunk : per_chunk) {
    for (auto& entry : chunk) pool.add(std::move(entry));
  }
  pool.normalize();
  return pool;
}

}  // namespace dnachannel
