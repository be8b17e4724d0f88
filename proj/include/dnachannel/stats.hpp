#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dnachannel/align.hpp"
#include "dnachannel/sequencing.hpp"
#include "dnachannel/submatrix.hpp"

namespace dnachannel {

enum class Stratum { all, correct_length, incorrect_length };

std::string stratum_name(Stratum s);

// Per-nucleotide error rates over a stratum of matched reads. The
// denominator is the total reference-aligned nucleotide count (reference
// lengths summed over the stratum).
struct ErrorRates {
  double p_sub = 0.0;
  double p_ins = 0.0;
  double p_del = 0.0;
  std::int64_t n_reads = 0;
  Stratum stratum = Stratum::all;
};

ErrorRates error_rates(const std::vector<MatchResult>& matches,
                       std::size_t reference_length, Stratum stratum);

// Integer substitution-pair accumulator; order-free to combine, so parallel
// partial sums reduce deterministically.
struct SubMatrixCounts {
  std::int64_t counts[4][4] = {};

  void add(int from, int to, std::int64_t n = 1) { counts[from][to] += n; }
  void merge(const SubMatrixCounts& o) {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) counts[i][j] += o.counts[i][j];
  }
  std::int64_t total() const {
    std::int64_t t = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j) t += counts[i][j];
    return t;
  }
  // Normalizes the 12 off-diagonal counts to sum to 1; throws
  // NoSubstitutions when none were observed.
  ConditionalSubMatrix normalize() const;
};

// Re-aligns each unambiguous match and normalizes the observed substitution
// pairs. Ambiguous matches are excluded (their attribution is arbitrary and
// would bias the matrix).
ConditionalSubMatrix conditional_sub_matrix(
    const ReferenceSet& refs, const std::vector<MatchResult>& matches,
    const std::vector<Sequence>& reads);

// Reading-error estimate from read pairs alone (no reference): for each
// pre-oriented pair (reverse read already reverse-complemented), semiglobal
// ops between the two reads; substitution and indel op sums divided by the
// summed read lengths.
struct ReadingErrorEstimate {
  double sub_rate = 0.0;
  double indel_rate = 0.0;
  std::int64_t n_pairs = 0;
};

ReadingErrorEstimate reading_error_estimate(
    const std::vector<std::pair<Sequence, Sequence>>& oriented_pairs);

struct CoverageHistogram {
  std::map<std::int64_t, std::int64_t> counts;  // reads-per-ref -> #refs
  std::int64_t M = 0;
  double unseen_fraction = 0.0;
};

// Histogram over per-reference read counts (including the zero bin).
CoverageHistogram coverage_histogram(const std::vector<std::int64_t>& per_ref);
CoverageHistogram coverage_histogram(const std::vector<MatchResult>& matches,
                                     std::size_t M);

struct NegBinFit {
  double r = 0.0;  // dispersion
  double p = 0.0;  // success probability
  double sample_mean = 0.0;
  double sample_variance = 0.0;
};

// Method-of-moments negative binomial fit: p = mean/variance,
// r = mean^2/(variance - mean). Throws Underdispersed when variance <= mean.
NegBinFit fit_neg_binomial(const CoverageHistogram& hist);

// Closed forms.
double expected_unseen_fraction(double r);
double proportion_ratio(double e1, double e2, int cycles);

}  // namespace dnachannel
