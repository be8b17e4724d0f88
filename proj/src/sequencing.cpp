#include "dnachannel/sequencing.hpp"

#include <algorithm>

#include "dnachannel/errors.hpp"

namespace dnachannel {

std::vector<std::int64_t> draw_template_counts(const Pool& pool,
                                               std::int64_t n_reads,
                                               RngStream& rng) {
  if (pool.empty()) throw EmptyPool();
  if (n_reads < 0) throw PrecondViolation("n_reads must be >= 0");
  const auto& entries = pool.entries();
  std::vector<std::int64_t> counts(entries.size(), 0);
  std::int64_t remaining = n_reads;
  double weight_left = pool.total_weight();
  for (std::size_t i = 0; i < entries.size() && remaining > 0; ++i) {
    double p;
    if (i + 1 == entries.size()) {
      p = 1.0;  // everything left lands on the last entry
    } else {
      p = entries[i].weight / weight_left;
      p = std::clamp(p, 0.0, 1.0);
    }
    const std::int64_t k = rng.binomial(remaining, p);
    counts[i] = k;
    remaining -= k;
    weight_left -= entries[i].weight;
    if (weight_left <= 0.0 && remaining > 0) {
      // Floating-point slack: dump the tail on this entry.
      counts[i] += remaining;
      remaining = 0;
    }
  }
  return counts;
}

std::vector<Sequence> draw_templates(const Pool& pool, std::int64_t n_reads,
                                     RngStream& rng) {
  const std::vector<std::int64_t> counts =
      draw_template_counts(pool, n_reads, rng);
  std::vector<Sequence> out;
  out.reserve(static_cast<std::size_t>(n_reads));
  const auto& entries = pool.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::int64_t k = 0; k < counts[i]; ++k) {
      out.push_back(entries[i].seq);
    }
  }
  return out;
}

ReadPair sequence_pair(const Sequence& templ, const ErrorProfile& profile,
                       std::size_t read_len, const RngStream& rng) {
  if (read_len < 1) throw PrecondViolation("read_len must be >= 1");
  const IdsRates rates = profile.rates();

  RngStream fwd_rng = rng.substream("fwd");
  RngStream rev_rng = rng.substream("rev");

  ReadPair pair;
  InjectResult fwd = inject_ids(templ, rates, profile.sub_matrix, fwd_rng);
  pair.forward = std::move(fwd.seq);
  if (pair.forward.size() > read_len) pair.forward.resize(read_len);

  const Sequence rc = reverse_complement(templ);
  InjectResult rev = inject_ids(rc, rates, profile.sub_matrix, rev_rng);
  pair.reverse = std::move(rev.seq);
  if (pair.reverse.size() > read_len) pair.reverse.resize(read_len);

  return pair;
}

}  // namespace dnachannel
