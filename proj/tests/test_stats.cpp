#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "dnachannel/errors.hpp"
#include "dnachannel/io.hpp"
#include "dnachannel/rng.hpp"
#include "dnachannel/stats.hpp"
#include "dnachannel/submatrix.hpp"
#include "oracles.hpp"

using namespace dnachannel;

namespace {

MatchResult make_match(std::int64_t read_id, std::int32_t ref_id,
                       OpCounts ops, bool correct_length,
                       bool ambiguous = false) {
  MatchResult m;
  m.read_id = read_id;
  m.reference_id = ref_id;
  m.ops = ops;
  m.correct_length = correct_length;
  m.ambiguous = ambiguous;
  return m;
}

}  // namespace

TEST_CASE("error_rates sums op counts over the reference-length denominator") {
  std::vector<MatchResult> matches = {
      make_match(0, 0, OpCounts{3, 1, 2, 6}, true),
      make_match(1, 1, OpCounts{1, 0, 0, 1}, false),
  };

  ErrorRates all = error_rates(matches, 100, Stratum::all);
  CHECK(all.p_sub == doctest::Approx(4.0 / 200.0));
  CHECK(all.p_ins == doctest::Approx(1.0 / 200.0));
  CHECK(all.p_del == doctest::Approx(2.0 / 200.0));
  CHECK(all.n_reads == 2);
  CHECK(all.stratum == Stratum::all);

  ErrorRates correct = error_rates(matches, 100, Stratum::correct_length);
  CHECK(correct.p_sub == doctest::Approx(0.03));
  CHECK(correct.p_del == doctest::Approx(0.02));
  CHECK(correct.n_reads == 1);

  ErrorRates incorrect = error_rates(matches, 100, Stratum::incorrect_length);
  CHECK(incorrect.p_sub == doctest::Approx(0.01));
  CHECK(incorrect.p_ins == doctest::Approx(0.0));
  CHECK(incorrect.n_reads == 1);

  SUBCASE("order of matches does not matter") {
    std::reverse(matches.begin(), matches.end());
    ErrorRates again = error_rates(matches, 100, Stratum::all);
    CHECK(again.p_sub == doctest::Approx(all.p_sub));
    CHECK(again.p_ins == doctest::Approx(all.p_ins));
    CHECK(again.p_del == doctest::Approx(all.p_del));
  }
}

TEST_CASE("error_rates on perfect matches is zero") {
  std::vector<MatchResult> matches = {
      make_match(0, 0, OpCounts{0, 0, 0, 0}, true),
      make_match(1, 0, OpCounts{0, 0, 0, 0}, true),
  };
  ErrorRates r = error_rates(matches, 117, Stratum::all);
  CHECK(r.p_sub == 0.0);
  CHECK(r.p_ins == 0.0);
  CHECK(r.p_del == 0.0);
}

TEST_CASE("error_rates throws on an empty stratum") {
  std::vector<MatchResult> matches = {
      make_match(0, 0, OpCounts{0, 0, 0, 0}, true),
  };
  CHECK_THROWS_AS(error_rates(matches, 117, Stratum::incorrect_length),
                  EmptyStratum);
  CHECK_THROWS_AS(error_rates({}, 117, Stratum::all), EmptyStratum);
}

TEST_CASE("SubMatrixCounts accumulates, merges, and normalizes") {
  SubMatrixCounts a;
  a.add(1, 3);      // C->T
  a.add(1, 3, 2);   // three C->T total
  a.add(2, 0);      // one G->A
  a.add(0, 0, 99);  // diagonal: ignored by total()
  CHECK(a.total() == 4);

  SubMatrixCounts b;
  b.add(2, 0, 3);
  b.merge(a);
  CHECK(b.total() == 7);

  ConditionalSubMatrix m = b.normalize();
  CHECK(m.p(1, 3) == doctest::Approx(3.0 / 7.0));
  CHECK(m.p(2, 0) == doctest::Approx(4.0 / 7.0));
  CHECK(m.p('C', 'T') == doctest::Approx(3.0 / 7.0));
  CHECK(m.p(0, 1) == 0.0);

  SubMatrixCounts empty;
  CHECK_THROWS_AS(empty.normalize(), NoSubstitutions);
}

TEST_CASE("conditional_sub_matrix concentrates a lone C->T") {
  ReferenceSet refs;
  refs.sequences = {"ACGTC"};
  refs.target_length = 5;
  std::vector<Sequence> reads = {"ACGTT"};
  std::vector<MatchResult> matches = {
      make_match(0, 0, OpCounts{1, 0, 0, 1}, true)};

  ConditionalSubMatrix m = conditional_sub_matrix(refs, matches, reads);
  CHECK(m.p('C', 'T') == doctest::Approx(1.0));
  double off_diag = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) off_diag += m.p(i, j);
  CHECK(off_diag == doctest::Approx(1.0));
}

TEST_CASE("ambiguous matches are excluded from the substitution matrix") {
  ReferenceSet refs;
  refs.sequences = {"ACGTC", "AAGTA"};
  refs.target_length = 5;
  std::vector<Sequence> reads = {"ACGTT", "AAGTG"};  // C->T and A->G
  std::vector<MatchResult> matches = {
      make_match(0, 0, OpCounts{1, 0, 0, 1}, true),
      make_match(1, 1, OpCounts{1, 0, 0, 1}, true, /*ambiguous=*/true),
  };
  ConditionalSubMatrix m = conditional_sub_matrix(refs, matches, reads);
  CHECK(m.p('C', 'T') == doctest::Approx(1.0));
  CHECK(m.p('A', 'G') == 0.0);
}

TEST_CASE("uniform substitution injection round-trips the matrix") {
  RngStream rng(750, 0);
  RngStream refs_rng = rng.substream("refs");
  ReferenceSet refs = generate_references(50, 117, 3, refs_rng);

  const ConditionalSubMatrix uniform = ConditionalSubMatrix::uniform();
  IdsRates rates;
  rates.p_sub = 0.03;

  std::vector<Sequence> reads;
  std::vector<MatchResult> matches;
  for (std::size_t ref_id = 0; ref_id < refs.size(); ++ref_id) {
    for (int c = 0; c < 60; ++c) {
      RngStream item =
          rng.substream("read", ref_id * 1000 + static_cast<std::size_t>(c));
      InjectResult inj =
          inject_ids(refs.sequences[ref_id], rates, uniform, item);
      matches.push_back(make_match(
          static_cast<std::int64_t>(reads.size()),
          static_cast<std::int32_t>(ref_id), OpCounts{}, true));
      reads.push_back(inj.seq);
    }
  }

  ConditionalSubMatrix est = conditional_sub_matrix(refs, matches, reads);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      CHECK(est.p(i, j) == doctest::Approx(1.0 / 12.0).epsilon(0.12));
    }
  }
}

TEST_CASE("reading_error_estimate is zero for identical pairs") {
  std::mt19937 mt(31);
  std::vector<std::pair<Sequence, Sequence>> pairs;
  for (int i = 0; i < 50; ++i) {
    Sequence x = oracles::random_dna(mt, 60);
    pairs.emplace_back(x, x);
  }
  ReadingErrorEstimate est = reading_error_estimate(pairs);
  CHECK(est.sub_rate == 0.0);
  CHECK(est.indel_rate == 0.0);
  CHECK(est.n_pairs == 50);

  CHECK(reading_error_estimate({}).sub_rate == 0.0);
}

TEST_CASE("reading_error_estimate recovers a planted substitution rate") {
  RngStream rng(751, 0);
  const ConditionalSubMatrix uniform = ConditionalSubMatrix::uniform();
  IdsRates rates;
  rates.p_sub = 0.002;

  std::vector<std::pair<Sequence, Sequence>> pairs;
  std::mt19937 mt(32);
  for (int i = 0; i < 20000; ++i) {
    const Sequence x = oracles::random_dna(mt, 60);
    RngStream fa = rng.substream("a", static_cast<std::uint64_t>(i));
    RngStream fb = rng.substream("b", static_cast<std::uint64_t>(i));
    pairs.emplace_back(inject_ids(x, rates, uniform, fa).seq,
                       inject_ids(x, rates, uniform, fb).seq);
  }
  ReadingErrorEstimate est = reading_error_estimate(pairs);
  // Each read contributes ~p errors per base; end-of-overlap substitutions
  // are absorbed by the free gaps, costing ~2 of 60 positions.
  CHECK(est.sub_rate == doctest::Approx(0.002).epsilon(0.10));
  // A substitution inside a tandem repeat can align as del+ins with more
  // matches, so a handful of planted subs are misattributed (observed ~6e-6
  // here); the indel estimate must stay orders of magnitude below p_sub.
  CHECK(est.indel_rate < 2e-5);
  CHECK(est.n_pairs == 20000);
}

TEST_CASE("coverage_histogram bins per-reference counts, zero bin included") {
  CoverageHistogram h = coverage_histogram({0, 0, 1, 3, 3});
  CHECK(h.M == 5);
  CHECK(h.counts.at(0) == 2);
  CHECK(h.counts.at(1) == 1);
  CHECK(h.counts.at(3) == 2);
  CHECK(h.counts.size() == 3);
  CHECK(h.unseen_fraction == doctest::Approx(0.4));

  std::int64_t mass = 0;
  for (const auto& [cov, n] : h.counts) {
    (void)cov;
    mass += n;
  }
  CHECK(mass == h.M);
}

TEST_CASE("coverage_histogram over matches drops unmatched ids") {
  std::vector<MatchResult> matches = {
      make_match(0, 2, OpCounts{}, true),
      make_match(1, 2, OpCounts{}, true),
      make_match(2, 0, OpCounts{}, true),
      make_match(3, -1, OpCounts{}, false),  // unmatched
  };
  CoverageHistogram h = coverage_histogram(matches, 4);
  CHECK(h.M == 4);
  CHECK(h.counts.at(0) == 2);  // refs 1 and 3 unseen
  CHECK(h.counts.at(1) == 1);
  CHECK(h.counts.at(2) == 1);
  CHECK(h.unseen_fraction == doctest::Approx(0.5));

  CHECK_THROWS_AS(coverage_histogram(matches, 0), PrecondViolation);
}

TEST_CASE("fit_neg_binomial matches hand-computed moments") {
  CoverageHistogram h = coverage_histogram({0, 2, 4, 6, 8});
  NegBinFit fit = fit_neg_binomial(h);
  CHECK(fit.sample_mean == doctest::Approx(4.0));
  CHECK(fit.sample_variance == doctest::Approx(10.0));  // (n-1) denominator
  CHECK(fit.p == doctest::Approx(0.4));
  CHECK(fit.r == doctest::Approx(16.0 / 6.0));
}

TEST_CASE("fit_neg_binomial rejects degenerate inputs") {
  CHECK_THROWS_AS(fit_neg_binomial(coverage_histogram({5, 5, 5, 5})),
                  Underdispersed);
  // Sub-Poisson dispersion is also rejected.
  CHECK_THROWS_AS(fit_neg_binomial(coverage_histogram({2, 2, 2, 2, 3, 1})),
                  Underdispersed);
  CHECK_THROWS_AS(fit_neg_binomial(coverage_histogram({7})), PrecondViolation);

  try {
    fit_neg_binomial(coverage_histogram({5, 5, 5, 5}));
    FAIL("expected Underdispersed");
  } catch (const Underdispersed& e) {
    CHECK(std::string(e.what()).find("variance") != std::string::npos);
  }
}

TEST_CASE("gamma-Poisson counts recover the dispersion parameter") {
  RngStream rng(752, 0);
  RngStream s = rng.substream("negbin");
  const std::size_t M = 20000;
  std::vector<std::int64_t> per_ref(M);
  for (std::size_t i = 0; i < M; ++i) {
    const double lambda = s.gamma(8.0, 16.0);
    per_ref[i] = s.poisson(lambda);
  }
  NegBinFit fit = fit_neg_binomial(coverage_histogram(per_ref));
  CHECK(fit.sample_mean == doctest::Approx(128.0).epsilon(0.02));
  CHECK(fit.r == doctest::Approx(8.0).epsilon(0.10));
  CHECK(fit.p == doctest::Approx(fit.sample_mean / fit.sample_variance));
}

TEST_CASE("expected_unseen_fraction closed form") {
  CHECK(expected_unseen_fraction(0.0) == 1.0);
  CHECK(std::abs(expected_unseen_fraction(1.0) - 0.36788) < 5e-6);
  CHECK(expected_unseen_fraction(5.0) == doctest::Approx(0.00674).epsilon(0.001));
  CHECK_THROWS_AS(expected_unseen_fraction(-0.1), PrecondViolation);
}

TEST_CASE("uniform occupancy simulation agrees with the closed form") {
  RngStream rng(753, 0);
  const std::size_t M = 20000;
  for (double r : {0.5, 1.0, 2.0, 5.0}) {
    RngStream s = rng.substream("occupancy", static_cast<std::uint64_t>(r * 2));
    std::vector<std::int64_t> per_ref(M, 0);
    const std::size_t n = static_cast<std::size_t>(r * static_cast<double>(M));
    for (std::size_t i = 0; i < n; ++i) {
      ++per_ref[s.uniform_int(static_cast<std::uint64_t>(M))];
    }
    const double unseen = coverage_histogram(per_ref).unseen_fraction;
    CHECK(std::abs(unseen - expected_unseen_fraction(r)) < 0.01);
  }
}

TEST_CASE("proportion_ratio closed form") {
  CHECK(proportion_ratio(2.0, 2.0, 60) == doctest::Approx(1.0));
  CHECK(proportion_ratio(2.0, 1.0, 10) == doctest::Approx(1024.0));
  CHECK(proportion_ratio(1.9, 1.8, 0) == doctest::Approx(1.0));
  CHECK(std::abs(proportion_ratio(1.8, 1.9, 60) - 0.0393) < 1e-3);
  CHECK_THROWS_AS(proportion_ratio(0.0, 1.9, 60), PrecondViolation);
  CHECK_THROWS_AS(proportion_ratio(1.8, 1.9, -1), PrecondViolation);
}
