#include <doctest.h>

#include <random>
#include <string>

#include "dnachannel/errors.hpp"
#include "dnachannel/sequence.hpp"
#include "oracles.hpp"

using namespace dnachannel;

TEST_CASE("validate_sequence accepts and normalizes ACGT text") {
  CHECK(validate_sequence("ACGT") == "ACGT");
  CHECK(validate_sequence("acgt") == "ACGT");
  CHECK(validate_sequence("AcGt") == "ACGT");
  CHECK(validate_sequence("") == "");
}

TEST_CASE("validate_sequence rejects the first invalid character") {
  try {
    validate_sequence("ACNT");
    FAIL("expected InvalidCharacter");
  } catch (const InvalidCharacter& e) {
    CHECK(e.position == 2);
    CHECK(e.character == 'N');
  }
  CHECK_THROWS_AS(validate_sequence("ACG-"), InvalidCharacter);
  CHECK_THROWS_AS(validate_sequence("acgu"), InvalidCharacter);
}

TEST_CASE("complement is an involution on all four nucleotides") {
  for (char c : {'A', 'C', 'G', 'T'}) {
    CHECK(complement_base(complement_base(c)) == c);
  }
  CHECK(complement_base('A') == 'T');
  CHECK(complement_base('C') == 'G');
}

TEST_CASE("reverse_complement known values") {
  CHECK(reverse_complement("ACGT") == "ACGT");
  CHECK(reverse_complement("AAA") == "TTT");
  CHECK(reverse_complement("") == "");
  CHECK(reverse_complement("AACG") == "CGTT");
}

TEST_CASE("reverse_complement is an involution on random sequences") {
  std::mt19937 rng(42);
  for (int i = 0; i < 200; ++i) {
    const Sequence x = oracles::random_dna(rng, i % 37);
    CHECK(reverse_complement(reverse_complement(x)) == x);
  }
}

TEST_CASE("base_index round trips through index_base") {
  for (int i = 0; i < 4; ++i) CHECK(base_index(index_base(i)) == i);
  CHECK(base_index('N') == -1);
  CHECK(base_index('a') == -1);
}

TEST_CASE("cg_fraction and max_homopolymer_run") {
  CHECK(cg_fraction("") == 0.0);
  CHECK(cg_fraction("AATT") == 0.0);
  CHECK(cg_fraction("CCGG") == 1.0);
  CHECK(cg_fraction("ACGT") == doctest::Approx(0.5));
  CHECK(max_homopolymer_run("") == 0);
  CHECK(max_homopolymer_run("ACGT") == 1);
  CHECK(max_homopolymer_run("AAACCA") == 3);
  CHECK(max_homopolymer_run("TTTT") == 4);
}
