#include <doctest.h>

#include <cmath>

#include "dnachannel/pool.hpp"

using namespace dnachannel;

TEST_CASE("normalize merges duplicates, drops nonpositive weights, sums total") {
  Pool pool;
  pool.add("ACGT", 2.0, 0);
  pool.add("ACGT", 3.0, 0);
  pool.add("TTTT", 1.5, 1);
  pool.add("GGGG", 0.0, 2);
  pool.add("CCCC", -1.0, 3);
  pool.normalize();

  REQUIRE(pool.size() == 2);
  CHECK(pool.total_weight() == doctest::Approx(6.5).epsilon(1e-12));
  double sum = 0.0;
  for (const PoolEntry& e : pool) {
    CHECK(e.weight > 0.0);
    sum += e.weight;
  }
  CHECK(std::abs(pool.total_weight() - sum) <=
        1e-9 * std::max(1.0, std::abs(sum)));
}

TEST_CASE("entries identical in sequence but different origin stay distinct") {
  Pool pool;
  pool.add("ACGT", 1.0, 0);
  pool.add("ACGT", 1.0, 1);
  pool.normalize();
  CHECK(pool.size() == 2);
}

TEST_CASE("terminated flag participates in entry identity") {
  Pool pool;
  pool.add("ACGT", 1.0, 0, false);
  pool.add("ACGT", 1.0, 0, true);
  pool.normalize();
  CHECK(pool.size() == 2);
}

TEST_CASE("normalized order is canonical regardless of insertion order") {
  Pool a;
  a.add("TTTT", 1.0, 1);
  a.add("ACGT", 1.0, 0);
  a.normalize();
  Pool b;
  b.add("ACGT", 1.0, 0);
  b.add("TTTT", 1.0, 1);
  b.normalize();
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.entries()[i].seq == b.entries()[i].seq);
    CHECK(a.entries()[i].origin == b.entries()[i].origin);
  }
}

TEST_CASE("physical redundancy is total weight over M") {
  Pool pool;
  pool.add("ACGT", 100.0, 0);
  pool.add("TTTT", 156.0, 1);
  pool.normalize();
  CHECK(pool.physical_redundancy(2) == doctest::Approx(128.0));
}
