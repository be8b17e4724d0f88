#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dnachannel/errors.hpp"
#include "dnachannel/pool.hpp"
#include "dnachannel/process.hpp"
#include "dnachannel/rng.hpp"

using namespace dnachannel;

namespace {

// Distinct sequences by base-4 enumeration, so pool identities never collide.
Sequence nth_sequence(std::size_t n, std::size_t len = 9) {
  Sequence s(len, 'A');
  for (std::size_t i = 0; i < len; ++i) {
    s[i] = index_base(static_cast<int>(n & 3));
    n >>= 2;
  }
  return s;
}

Pool uniform_pool(std::size_t entries, double weight) {
  Pool pool;
  for (std::size_t i = 0; i < entries; ++i) {
    pool.add(nth_sequence(i), weight, static_cast<std::int32_t>(i));
  }
  pool.normalize();
  return pool;
}

}  // namespace

TEST_CASE("pcr with zero cycles is the identity") {
  Pool pool = uniform_pool(10, 3.0);
  pool.mutable_entries()[2].terminated = true;
  pool.normalize();
  EfficiencyModel eff;
  RngStream rng(201, 0);
  Pool out = pcr(pool, 0, eff, rng);
  REQUIRE(out.size() == pool.size());
  CHECK(out.total_weight() == pool.total_weight());
}

TEST_CASE("pcr removes terminated entries at the first call") {
  Pool pool = uniform_pool(10, 3.0);
  pool.mutable_entries()[2].terminated = true;
  pool.normalize();
  EfficiencyModel eff;
  eff.stddev = 0.0;
  eff.mean = 2.0;
  RngStream rng(202, 0);
  Pool out = pcr(pool, 1, eff, rng);
  CHECK(out.size() == 9);
  for (const PoolEntry& e : out) CHECK_FALSE(e.terminated);
}

TEST_CASE("pcr with stddev 0 doubles exactly: 2^10 = 1024") {
  Pool pool;
  pool.add("ACGTACGTA", 1.0, 0);
  pool.normalize();
  EfficiencyModel eff;
  eff.mean = 2.0;
  eff.stddev = 0.0;
  RngStream rng(203, 0);
  Pool out = pcr(pool, 10, eff, rng);
  REQUIRE(out.size() == 1);
  CHECK(out.entries()[0].weight == doctest::Approx(1024.0).epsilon(1e-12));
}

TEST_CASE("pcr with stddev 0 multiplies total weight by mean^cycles") {
  Pool pool = uniform_pool(50, 2.5);
  EfficiencyModel eff;
  eff.mean = 1.85;
  eff.stddev = 0.0;
  RngStream rng(204, 0);
  Pool out = pcr(pool, 22, eff, rng);
  const double factor = std::pow(1.85, 22);
  CHECK(out.total_weight() ==
        doctest::Approx(pool.total_weight() * factor).epsilon(1e-9));
}

TEST_CASE("fixed efficiencies 1.8 vs 1.9 diverge to ratio 0.039 at 60 cycles") {
  // Two molecules amplified side by side with sequence-fixed efficiencies.
  Pool a;
  a.add("ACGTACGTA", 1.0, 0);
  a.normalize();
  Pool b;
  b.add("TGCATGCAT", 1.0, 0);
  b.normalize();
  EfficiencyModel ea, eb;
  ea.mean = 1.8;
  ea.stddev = 0.0;
  eb.mean = 1.9;
  eb.stddev = 0.0;
  RngStream rng(205, 0);
  Pool oa = pcr(a, 60, ea, rng);
  Pool ob = pcr(b, 60, eb, rng);
  const double ratio = oa.total_weight() / ob.total_weight();
  CHECK(std::abs(ratio - 0.039) < 1e-3);  // (1.8/1.9)^60 = 0.0393
}

TEST_CASE("pcr preserves sequence identity of non-terminated entries") {
  Pool pool = uniform_pool(100, 1.0);
  EfficiencyModel eff;
  eff.mean = 1.85;
  eff.stddev = 0.07;
  RngStream rng(206, 0);
  Pool out = pcr(pool, 22, eff, rng);
  REQUIRE(out.size() == pool.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    CHECK(out.entries()[i].seq == pool.entries()[i].seq);
    CHECK(out.entries()[i].weight >= pool.entries()[i].weight);
  }
}

TEST_CASE("strand-specific efficiency draws are clamped to [1,2]") {
  Pool pool = uniform_pool(2000, 1.0);
  EfficiencyModel eff;
  eff.mean = 1.85;
  eff.stddev = 0.5;  // wide: would exceed [1,2] often without clamping
  RngStream rng(207, 0);
  const int cycles = 5;
  Pool out = pcr(pool, cycles, eff, rng);
  for (const PoolEntry& e : out) {
    const double per_cycle = std::pow(e.weight, 1.0 / cycles);
    CHECK(per_cycle >= 1.0 - 1e-9);
    CHECK(per_cycle <= 2.0 + 1e-9);
  }
}

TEST_CASE("relative-abundance distortion grows with cycle count") {
  auto cv_after = [](int cycles) {
    Pool pool = uniform_pool(2000, 1.0);
    EfficiencyModel eff;
    eff.mean = 1.85;
    eff.stddev = 0.07;
    RngStream rng(208, 0);
    Pool out = pcr(pool, cycles, eff, rng);
    double sum = 0.0, sq = 0.0;
    const double n = static_cast<double>(out.size());
    for (const PoolEntry& e : out) {
      const double w = e.weight / out.total_weight();
      sum += w;
      sq += w * w;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    return std::sqrt(var) / mean;
  };
  CHECK(cv_after(60) > cv_after(22));
}

TEST_CASE("per-cycle mode with stddev 0 equals strand-specific growth") {
  Pool pool = uniform_pool(5, 1.0);
  EfficiencyModel eff;
  eff.mode = EfficiencyModel::Mode::per_cycle;
  eff.mean = 1.85;
  eff.stddev = 0.0;
  RngStream rng(209, 0);
  Pool out = pcr(pool, 22, eff, rng);
  const double factor = std::pow(1.85, 22);
  for (const PoolEntry& e : out) {
    CHECK(e.weight == doctest::Approx(factor).epsilon(1e-9));
  }
}

TEST_CASE("pcr rejects invalid efficiency parameters") {
  Pool pool = uniform_pool(2, 1.0);
  EfficiencyModel eff;
  eff.mean = 2.5;
  RngStream rng(210, 0);
  CHECK_THROWS_AS(pcr(pool, 5, eff, rng), PrecondViolation);
}

TEST_CASE("decay with zero half-lives is the identity") {
  Pool pool = uniform_pool(20, 50.0);
  DecayParams params;
  params.half_lives = 0.0;
  RngStream rng(211, 0);
  Pool out = decay(pool, params, rng);
  CHECK(out.total_weight() == pool.total_weight());
  CHECK(out.size() == pool.size());
}

TEST_CASE("four half-lives retain 6.25% of a 2x10^5-unit pool") {
  Pool pool = uniform_pool(2000, 100.0);  // 2e5 strand units
  DecayParams params;
  params.half_lives = 4.0;
  params.deam_events_per_strand_per_halflife = 0.0;
  RngStream rng(212, 0);
  Pool out = decay(pool, params, rng);
  const double retained = out.total_weight() / pool.total_weight();
  CHECK(std::abs(retained - 0.0625) < 0.005);
}

TEST_CASE("deamination_hit_prob follows the CG-scaled exponential form") {
  DecayParams params;
  params.half_lives = 2.0;
  params.deam_events_per_strand_per_halflife = 0.05;
  const Sequence half_cg = "ACGTACGTAC";  // cg_fraction 0.5
  const double lambda = 0.05 * 2.0 * 2.0 * 0.5;
  CHECK(deamination_hit_prob(half_cg, params) ==
        doctest::Approx(1.0 - std::exp(-lambda)).epsilon(1e-12));
  const Sequence no_cg = "ATATATATAT";
  CHECK(deamination_hit_prob(no_cg, params) == 0.0);
}

TEST_CASE("forced non-proofreading deamination splits a weight-2 entry") {
  // One C (no G) and a saturating rate: both strand copies are hit; half are
  // read as the original, half with the C read as T.
  Pool pool;
  pool.add("AATACATTAA", 2.0, 0);
  pool.normalize();
  DecayParams params;
  params.half_lives = 1.0;
  params.enzyme = DecayParams::Enzyme::non_proofreading;
  params.deam_events_per_strand_per_halflife = 1e12;  // p_hit == 1
  RngStream rng(213, 0);
  Pool out = apply_deamination(pool, params, rng);

  REQUIRE(out.size() == 2);
  double original_weight = -1.0, variant_weight = -1.0;
  for (const PoolEntry& e : out) {
    if (e.seq == "AATACATTAA") original_weight = e.weight;
    if (e.seq == "AATATATTAA") variant_weight = e.weight;
  }
  CHECK(original_weight == doctest::Approx(1.0));
  CHECK(variant_weight == doctest::Approx(1.0));
  CHECK(out.total_weight() == doctest::Approx(2.0));
}

TEST_CASE("deaminated G sites read as A on the stored strand") {
  Pool pool;
  pool.add("AATAGATTAA", 4.0, 0);  // one G, no C
  pool.normalize();
  DecayParams params;
  params.half_lives = 1.0;
  params.enzyme = DecayParams::Enzyme::non_proofreading;
  params.deam_events_per_strand_per_halflife = 1e12;
  RngStream rng(214, 0);
  Pool out = apply_deamination(pool, params, rng);
  double variant_weight = 0.0;
  for (const PoolEntry& e : out) {
    if (e.seq == "AATAAATTAA") variant_weight += e.weight;
  }
  CHECK(variant_weight == doctest::Approx(2.0));
  CHECK(out.total_weight() == doctest::Approx(4.0));
}

TEST_CASE("proofreading enzymes drop molecules hit on both strands") {
  Pool pool;
  pool.add("ACGTACGTAC", 100.0, 0);
  pool.normalize();
  DecayParams params;
  params.half_lives = 1.0;
  params.enzyme = DecayParams::Enzyme::proofreading;
  params.deam_events_per_strand_per_halflife = 1e12;  // p_hit == 1 => all lost
  RngStream rng(215, 0);
  Pool out = apply_deamination(pool, params, rng);
  CHECK(out.empty());
}

TEST_CASE("dilute with keep=1 is the identity on integer weights") {
  Pool pool = uniform_pool(25, 40.0);
  RngStream rng(216, 0);
  Pool out = dilute(pool, 1.0, rng);
  CHECK(out.size() == pool.size());
  CHECK(out.total_weight() == doctest::Approx(pool.total_weight()));
}

TEST_CASE("keeping 1/r of r copies loses about exp(-1) of the sequences") {
  const std::size_t M = 20000;
  Pool pool = uniform_pool(M, 100.0);
  RngStream rng(217, 0);
  Pool out = dilute(pool, 0.01, rng);
  const double unseen =
      static_cast<double>(M - out.size()) / static_cast<double>(M);
  // (1 - 1/100)^100 = 0.366, within the paper's "about 36%" +/- 1% window.
  CHECK(std::abs(unseen - 0.368) < 0.01);
}

TEST_CASE("dilute thinning has binomial moments: keep 0.1 of weight 100") {
  const std::size_t M = 100000;
  Pool pool = uniform_pool(M, 100.0);
  RngStream rng(218, 0);
  Pool out = dilute(pool, 0.1, rng);

  // Kept weights over all M entries (dropped entries count as 0).
  double sum = 0.0, sq = 0.0;
  for (const PoolEntry& e : out) {
    sum += e.weight;
    sq += e.weight * e.weight;
  }
  const double mean = sum / static_cast<double>(M);
  const double var = sq / static_cast<double>(M) - mean * mean;
  CHECK(std::abs(mean - 10.0) < 0.1);   // Binomial(100, 0.1) mean 10
  CHECK(std::abs(var - 9.0) < 0.45);    // variance n*p*(1-p) = 9, +/-5%
}

TEST_CASE("dilute never increases a weight") {
  Pool pool = uniform_pool(500, 17.0);
  RngStream rng(219, 0);
  Pool out = dilute(pool, 0.35, rng);
  // uniform_pool emits entries in canonical order, so match by sequence.
  std::size_t j = 0;
  for (const PoolEntry& e : out) {
    while (j < pool.size() && pool.entries()[j].seq != e.seq) ++j;
    REQUIRE(j < pool.size());
    CHECK(e.weight <= pool.entries()[j].weight);
  }
}

TEST_CASE("thin_weight switches to expectation scaling above the threshold") {
  RngStream rng(220, 0);
  // Above threshold: deterministic scaling.
  for (int i = 0; i < 5; ++i) {
    CHECK(thin_weight(2e6, 0.25, rng) == doctest::Approx(5e5));
  }
  // Below threshold (raised): stochastic.
  bool varied = false;
  double first = -1.0;
  for (int i = 0; i < 50; ++i) {
    const double w = thin_weight(2e6, 0.25, rng, /*threshold=*/1e7);
    if (first < 0) {
      first = w;
    } else if (w != first) {
      varied = true;
    }
  }
  CHECK(varied);
  CHECK(thin_weight(100.0, 0.0, rng) == 0.0);
  CHECK(thin_weight(100.0, 1.0, rng) == 100.0);
}

TEST_CASE("interact with zero steps is the identity") {
  Pool pool = uniform_pool(100, 100.0);
  RngStream rng(221, 0);
  Pool out = interact(pool, 0, 0.1, 10.0, rng);
  CHECK(out.size() == pool.size());
  CHECK(out.total_weight() == doctest::Approx(pool.total_weight()));
}

TEST_CASE("interact preserves expected total weight") {
  Pool pool = uniform_pool(5000, 100.0);
  RngStream rng(222, 0);
  Pool out = interact(pool, 3, 0.1, 10.0, rng);
  CHECK(out.total_weight() ==
        doctest::Approx(pool.total_weight()).epsilon(0.02));
}

TEST_CASE("interact rejects keep*amp != 1") {
  Pool pool = uniform_pool(5, 10.0);
  RngStream rng(223, 0);
  CHECK_THROWS_AS(interact(pool, 2, 0.1, 5.0, rng), PrecondViolation);
}

TEST_CASE("process stages are independent of thread count") {
  Pool pool = uniform_pool(300, 64.0);
  EfficiencyModel eff;
  eff.mean = 1.85;
  eff.stddev = 0.07;
  RngStream rng(224, 0);
  Pool p1 = pcr(pool, 22, eff, rng, 1);
  Pool p4 = pcr(pool, 22, eff, rng, 4);
  REQUIRE(p1.size() == p4.size());
  for (std::size_t i = 0; i < p1.size(); ++i) {
    CHECK(p1.entries()[i].weight == p4.entries()[i].weight);
  }

  DecayParams dp;
  dp.half_lives = 2.0;
  dp.enzyme = DecayParams::Enzyme::non_proofreading;
  RngStream rng2(225, 0);
  Pool d1 = decay(pool, dp, rng2, 1);
  Pool d4 = decay(pool, dp, rng2, 4);
  REQUIRE(d1.size() == d4.size());
  CHECK(d1.total_weight() == d4.total_weight());
}
