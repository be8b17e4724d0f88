#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dnachannel/pool.hpp"
#include "dnachannel/rng.hpp"
#include "dnachannel/sequencing.hpp"

namespace dnachannel {

// FASTA with '>' headers, wrapped or unwrapped sequence lines, normalized to
// upper case. Ids follow file order. All records must share one length
// (reference sets are fixed-length designs); violations raise IoError,
// invalid characters raise InvalidCharacter naming the record. Duplicate
// sequences emit a warning on stderr but are kept.
ReferenceSet parse_fasta(const std::string& path);

// Same format without the uniform-length requirement (read collections).
std::vector<Sequence> parse_fasta_sequences(const std::string& path);

void write_fasta(const std::string& path, const ReferenceSet& refs);

// Writes records named <name_prefix>_<index>.
void write_fasta(const std::string& path, const std::vector<Sequence>& seqs,
                 const std::string& name_prefix);

struct FastqParseResult {
  ReadSet pairs;
  std::int64_t skipped = 0;  // pairs dropped for non-ACGT characters
};

// Paired FASTQ: 4-line records, equal record counts (RecordCountMismatch
// otherwise). Quality lines are not interpreted. Pairs where either read
// contains a character outside ACGT (e.g. 'N') are counted and skipped.
FastqParseResult parse_fastq_pairs(const std::string& path_fwd,
                                   const std::string& path_rev);

// 4-line records with constant placeholder quality. `mate` is 1 or 2 and
// only affects read names.
void write_fastq(const std::string& path, const std::vector<Sequence>& reads,
                 int mate, std::int64_t first_id = 0);

// M distinct uniform-random sequences of target_length containing no
// homopolymer run longer than homopolymer_limit. Runs are avoided
// constructively (each draw excludes the base that would extend a maximal
// run), which stays fast even at limit 1 where rejection sampling would
// almost never accept.
ReferenceSet generate_references(std::size_t M, std::size_t target_length,
                                 std::size_t homopolymer_limit,
                                 RngStream& rng);

}  // namespace dnachannel
