#pragma once

#include <cstdint>
#include <vector>

#include "dnachannel/pool.hpp"
#include "dnachannel/rng.hpp"
#include "dnachannel/submatrix.hpp"

namespace dnachannel {

struct ChannelConfig;  // defined in config.hpp

// Per-base read error rates plus the conditional substitution matrix.
struct ErrorProfile {
  double p_sub = 0.0;
  double p_ins = 0.0;
  double p_del = 0.0;
  ConditionalSubMatrix sub_matrix = ConditionalSubMatrix::uniform();

  IdsRates rates() const {
    return IdsRates{p_sub, p_ins, p_del, /*p_term=*/0.0};
  }

  bool operator==(const ErrorProfile&) const = default;
};

// One paired-end observation. `reverse` is in instrument orientation (the
// reverse-complement strand read from its own 5' end). template_origin is
// simulation-only ground truth (-1 when unknown).
struct ReadPair {
  Sequence forward;
  Sequence reverse;
  std::int32_t template_origin = -1;
};

using ReadSet = std::vector<ReadPair>;

// Multinomial template sampling: returns one count per pool entry (in the
// pool's canonical order) summing to n_reads exactly. Sequential
// conditional-binomial construction on a single stream, so the result is
// independent of thread count.
std::vector<std::int64_t> draw_template_counts(const Pool& pool,
                                               std::int64_t n_reads,
                                               RngStream& rng);

// Expands draw_template_counts into the drawn template sequences, grouped
// in pool order (the draw is a multiset; grouping carries no information).
std::vector<Sequence> draw_templates(const Pool& pool, std::int64_t n_reads,
                                     RngStream& rng);

// Reads one template: forward = error-injected template truncated to
// read_len; reverse = error-injected reverse complement truncated likewise.
// The two injections use independent substreams ("fwd"/"rev") of `rng`.
// Templates shorter than read_len after injection yield natural-length
// reads.
ReadPair sequence_pair(const Sequence& templ, const ErrorProfile& profile,
                       std::size_t read_len, const RngStream& rng);

// Full channel: synthesize -> configured stages -> template draws -> paired
// reads with ground-truth origins. Defined with the orchestration code.
ReadSet run_channel(const ReferenceSet& refs, const ChannelConfig& config,
                    const RngStream& rng, int threads = 1);

}  // namespace dnachannel
