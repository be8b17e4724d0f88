#include "dnachannel/stats.hpp"

#include <cmath>

#include "dnachannel/errors.hpp"

namespace dnachannel {

std::string stratum_name(Stratum s) {
  switch (s) {
    case Stratum::all:
      return "all";
    case Stratum::correct_length:
      return "correct_length";
    case Stratum::incorrect_length:
      return "incorrect_length";
  }
  return "unknown";
}

namespace {

bool in_stratum(const MatchResult& m, Stratum s) {
  switch (s) {
    case Stratum::all:
      return true;
    case Stratum::correct_length:
      return m.correct_length;
    case Stratum::incorrect_length:
      return !m.correct_length;
  }
  return false;
}

}  // namespace

ErrorRates error_rates(const std::vector<MatchResult>& matches,
                       std::size_t reference_length, Stratum stratum) {
  std::int64_t subs = 0;
  std::int64_t ins = 0;
  std::int64_t dels = 0;
  std::int64_t n = 0;
  for (const MatchResult& m : matches) {
    if (!in_stratum(m, stratum)) continue;
    subs += m.ops.substitutions;
    ins += m.ops.insertions;
    dels += m.ops.deletions;
    ++n;
  }
  if (n == 0) throw EmptyStratum(stratum_name(stratum));
  const double denom =
      static_cast<double>(n) * static_cast<double>(reference_length);
  ErrorRates r;
  r.p_sub = static_cast<double>(subs) / denom;
  r.p_ins = static_cast<double>(ins) / denom;
  r.p_del = static_cast<double>(dels) / denom;
  r.n_reads = n;
  r.stratum = stratum;
  return r;
}

ConditionalSubMatrix SubMatrixCounts::normalize() const {
  if (total() == 0) throw NoSubstitutions();
  double entries[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      entries[i][j] = static_cast<double>(counts[i][j]);
  return ConditionalSubMatrix::from_entries(entries);
}

ConditionalSubMatrix conditional_sub_matrix(
    const ReferenceSet& refs, const std::vector<MatchResult>& matches,
    const std::vector<Sequence>& reads) {
  SubMatrixCounts acc;
  for (const MatchResult& m : matches) {
    if (m.ambiguous) continue;
    const Sequence& ref =
        refs.sequences[static_cast<std::size_t>(m.reference_id)];
    const Sequence& read = reads[static_cast<std::size_t>(m.read_id)];
    edit_ops_with_pairs(ref, read, acc.counts);
  }
  return acc.normalize();
}

ReadingErrorEstimate reading_error_estimate(
    const std::vector<std::pair<Sequence, Sequence>>& oriented_pairs) {
  std::int64_t subs = 0;
  std::int64_t indels = 0;
  std::int64_t len_sum = 0;
  for (const auto& [a, b] : oriented_pairs) {
    const OpCounts ops = semiglobal_ops(a, b);
    subs += ops.substitutions;
    indels += ops.insertions + ops.deletions;
    len_sum += static_cast<std::int64_t>(a.size() + b.size());
  }
  ReadingErrorEstimate est;
  est.n_pairs = static_cast<std::int64_t>(oriented_pairs.size());
  if (len_sum > 0) {
    est.sub_rate = static_cast<double>(subs) / static_cast<double>(len_sum);
    est.indel_rate =
        static_cast<double>(indels) / static_cast<double>(len_sum);
  }
  return est;
}

CoverageHistogram coverage_histogram(
    const std::vector<std::int64_t>& per_ref) {
  CoverageHistogram h;
  h.M = static_cast<std::int64_t>(per_ref.size());
  for (const std::int64_t c : per_ref) ++h.counts[c];
  if (h.M > 0) {
    const auto it = h.counts.find(0);
    const std::int64_t zeros = (it == h.counts.end()) ? 0 : it->second;
    h.unseen_fraction =
        static_cast<double>(zeros) / static_cast<double>(h.M);
  }
  return h;
}

CoverageHistogram coverage_histogram(const std::vector<MatchResult>& matches,
                                     std::size_t M) {
  if (M < 1) throw PrecondViolation("coverage_histogram requires M >= 1");
  std::vector<std::int64_t> per_ref(M, 0);
  for (const MatchResult& m : matches) {
    if (m.reference_id >= 0 &&
        static_cast<std::size_t>(m.reference_id) < M) {
      ++per_ref[static_cast<std::size_t>(m.reference_id)];
    }
  }
  return coverage_histogram(per_ref);
}

NegBinFit fit_neg_binomial(const CoverageHistogram& hist) {
  if (hist.M < 2) {
    throw PrecondViolation("negative binomial fit requires M >= 2");
  }
  double sum = 0.0;
  double sumsq = 0.0;
  for (const auto& [count, refs] : hist.counts) {
    sum += static_cast<double>(count) * static_cast<double>(refs);
    sumsq += static_cast<double>(count) * static_cast<double>(count) *
             static_cast<double>(refs);
  }
  const double n = static_cast<double>(hist.M);
  const double mean = sum / n;
  const double variance = (sumsq - n * mean * mean) / (n - 1.0);
  if (variance <= mean) throw Underdispersed(mean, variance);
  NegBinFit fit;
  fit.p = mean / variance;
  fit.r = mean * mean / (variance - mean);
  fit.sample_mean = mean;
  fit.sample_variance = variance;
  return fit;
}

double expected_unseen_fraction(double r) {
  if (r < 0.0) throw PrecondViolation("redundancy must be >= 0");
  return std::exp(-r);
}

double proportion_ratio(double e1, double e2, int cycles) {
  if (!(e1 > 0.0) || !(e2 > 0.0)) {
    throw PrecondViolation("efficiencies must be > 0");
  }
  if (cycles < 0) throw PrecondViolation("cycles must be >= 0");
  return std::pow(e1 / e2, cycles);
}

}  // namespace dnachannel
