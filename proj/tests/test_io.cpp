#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "dnachannel/errors.hpp"
#include "dnachannel/io.hpp"
#include "dnachannel/rng.hpp"
#include "dnachannel/sequence.hpp"

using namespace dnachannel;
namespace fs = std::filesystem;

namespace {

// Fresh scratch directory under the test's working directory.
struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name) : dir(fs::path("io_scratch") / name) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  std::string file(const std::string& name) const {
    return (dir / name).string();
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("parse_fasta reads two records with dense ids") {
  Scratch s("two_records");
  write_text(s.file("refs.fasta"), ">first\nACGTACGT\n>second\nTTTTACGG\n");
  ReferenceSet refs = parse_fasta(s.file("refs.fasta"));
  REQUIRE(refs.size() == 2);
  CHECK(refs.sequences[0] == "ACGTACGT");
  CHECK(refs.sequences[1] == "TTTTACGG");
  CHECK(refs.target_length == 8);
}

TEST_CASE("parse_fasta joins wrapped lines and upper-cases") {
  Scratch s("wrapped");
  write_text(s.file("refs.fasta"), ">r\nacgt\nACGT\nacgt\n");
  ReferenceSet refs = parse_fasta(s.file("refs.fasta"));
  REQUIRE(refs.size() == 1);
  CHECK(refs.sequences[0] == "ACGTACGTACGT");
}

TEST_CASE("parse_fasta reports the record containing an invalid character") {
  Scratch s("invalid_char");
  write_text(s.file("refs.fasta"), ">ok\nACGT\n>bad_rec\nACNT\n");
  try {
    parse_fasta(s.file("refs.fasta"));
    FAIL("expected InvalidCharacter");
  } catch (const InvalidCharacter& e) {
    CHECK(e.character == 'N');
    CHECK(std::string(e.what()).find("bad_rec") != std::string::npos);
  }
}

TEST_CASE("parse_fasta enforces uniform reference length") {
  Scratch s("length");
  write_text(s.file("refs.fasta"), ">a\nACGT\n>b\nACGTA\n");
  CHECK_THROWS_AS(parse_fasta(s.file("refs.fasta")), IoError);
}

TEST_CASE("parse_fasta on a missing file raises IoError") {
  CHECK_THROWS_AS(parse_fasta("definitely_not_here.fasta"), IoError);
}

TEST_CASE("write_fasta then parse_fasta round trips records") {
  Scratch s("roundtrip");
  ReferenceSet refs;
  refs.sequences = {"ACGTACGTAC", "TTGGCCAATT", "CACACACACA"};
  refs.target_length = 10;
  write_fasta(s.file("out.fasta"), refs);
  ReferenceSet back = parse_fasta(s.file("out.fasta"));
  CHECK(back.sequences == refs.sequences);
  CHECK(back.target_length == refs.target_length);
}

TEST_CASE("parse_fasta_sequences accepts variable lengths") {
  Scratch s("varlen");
  std::vector<Sequence> seqs = {"ACGT", "ACGTACGTACGT", "AA"};
  write_fasta(s.file("var.fasta"), seqs, "merged");
  CHECK(parse_fasta_sequences(s.file("var.fasta")) == seqs);
}

TEST_CASE("FASTQ pair round trip preserves sequences") {
  Scratch s("fastq_roundtrip");
  std::vector<Sequence> fwd = {"ACGTACGT", "TTTTAAAA", "GGGGCCCC"};
  std::vector<Sequence> rev = {"TGCATGCA", "AAAATTTT", "CCCCGGGG"};
  write_fastq(s.file("r1.fastq"), fwd, 1, 0);
  write_fastq(s.file("r2.fastq"), rev, 2, 0);

  FastqParseResult res = parse_fastq_pairs(s.file("r1.fastq"), s.file("r2.fastq"));
  REQUIRE(res.pairs.size() == 3);
  CHECK(res.skipped == 0);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(res.pairs[i].forward == fwd[i]);
    CHECK(res.pairs[i].reverse == rev[i]);
  }
}

TEST_CASE("FASTQ writer emits 4-line records with constant quality") {
  Scratch s("fastq_format");
  write_fastq(s.file("r1.fastq"), {"ACGT"}, 1, 5);
  std::ifstream in(s.file("r1.fastq"));
  std::string l1, l2, l3, l4, extra;
  REQUIRE(std::getline(in, l1));
  REQUIRE(std::getline(in, l2));
  REQUIRE(std::getline(in, l3));
  REQUIRE(std::getline(in, l4));
  CHECK_FALSE(std::getline(in, extra));
  CHECK(l1 == "@read_5/1");
  CHECK(l2 == "ACGT");
  CHECK(l3 == "+");
  CHECK(l4 == "IIII");
}

TEST_CASE("parse_fastq_pairs rejects mismatched record counts") {
  Scratch s("fastq_mismatch");
  write_fastq(s.file("r1.fastq"), {"ACGT", "ACGT", "ACGT"}, 1, 0);
  write_fastq(s.file("r2.fastq"), {"ACGT", "ACGT"}, 2, 0);
  try {
    parse_fastq_pairs(s.file("r1.fastq"), s.file("r2.fastq"));
    FAIL("expected RecordCountMismatch");
  } catch (const RecordCountMismatch& e) {
    CHECK(e.fwd_count == 3);
    CHECK(e.rev_count == 2);
  }
}

TEST_CASE("pairs containing non-ACGT characters are counted and skipped") {
  Scratch s("fastq_invalid");
  write_text(s.file("r1.fastq"),
             "@a/1\nACGT\n+\nIIII\n@b/1\nACNT\n+\nIIII\n@c/1\nACGT\n+\nIIII\n");
  write_text(s.file("r2.fastq"),
             "@a/2\nTTTT\n+\nIIII\n@b/2\nTTTT\n+\nIIII\n@c/2\nTTTT\n+\nIIII\n");
  FastqParseResult res = parse_fastq_pairs(s.file("r1.fastq"), s.file("r2.fastq"));
  CHECK(res.pairs.size() == 2);
  CHECK(res.skipped == 1);
}

TEST_CASE("malformed FASTQ structure raises IoError") {
  Scratch s("fastq_malformed");
  write_text(s.file("r1.fastq"), "@a/1\nACGT\nMISSING_PLUS\nIIII\n");
  write_fastq(s.file("r2.fastq"), {"ACGT"}, 2, 0);
  CHECK_THROWS_AS(parse_fastq_pairs(s.file("r1.fastq"), s.file("r2.fastq")),
                  IoError);

  write_text(s.file("r3.fastq"), "@a/1\nACGT\n+\nII\n");  // short quality
  CHECK_THROWS_AS(parse_fastq_pairs(s.file("r3.fastq"), s.file("r2.fastq")),
                  IoError);
}

TEST_CASE("generate_references honors the homopolymer limit of 1") {
  RngStream rng(3, 0);
  ReferenceSet refs = generate_references(50, 40, 1, rng);
  REQUIRE(refs.size() == 50);
  for (const Sequence& s : refs.sequences) {
    CHECK(max_homopolymer_run(s) <= 1);
  }
}

TEST_CASE("generate_references matches the Grass design constraints") {
  RngStream rng(4, 0);
  ReferenceSet refs = generate_references(4991, 117, 3, rng);
  REQUIRE(refs.size() == 4991);
  CHECK(refs.target_length == 117);
  std::unordered_set<Sequence> seen;
  for (const Sequence& s : refs.sequences) {
    CHECK(s.size() == 117);
    CHECK(max_homopolymer_run(s) <= 3);
    CHECK(is_valid_sequence(s));
    seen.insert(s);
  }
  CHECK(seen.size() == refs.size());  // all distinct
}

TEST_CASE("generate_references is deterministic in the stream identity") {
  RngStream a(77, 0);
  RngStream b(77, 0);
  ReferenceSet ra = generate_references(20, 30, 3, a);
  ReferenceSet rb = generate_references(20, 30, 3, b);
  CHECK(ra.sequences == rb.sequences);
}
