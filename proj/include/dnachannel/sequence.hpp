#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace dnachannel {

// Sequences are plain std::string over the uppercase alphabet {A, C, G, T}.
using Sequence = std::string;

// Index mapping A=0, C=1, G=2, T=3; returns -1 for anything else.
inline int base_index(char c) {
  switch (c) {
    case 'A':
      return 0;
    case 'C':
      return 1;
    case 'G':
      return 2;
    case 'T':
      return 3;
    default:
      return -1;
  }
}

inline char index_base(int i) {
  static constexpr char kBases[4] = {'A', 'C', 'G', 'T'};
  return kBases[i & 3];
}

inline bool is_valid_base(char c) { return base_index(c) >= 0; }

// Returns the sequence normalized to upper case; throws InvalidCharacter on
// the first character outside {A,C,G,T} (case-insensitive), including 'N'.
Sequence validate_sequence(std::string_view seq, const std::string& context = "");

// True iff every character is one of ACGT.
bool is_valid_sequence(std::string_view seq) noexcept;

inline char complement_base(char c) {
  switch (c) {
    case 'A':
      return 'T';
    case 'C':
      return 'G';
    case 'G':
      return 'C';
    case 'T':
      return 'A';
    default:
      return c;
  }
}

Sequence reverse_complement(std::string_view seq);

// Fraction of C and G bases; 0 for the empty sequence.
double cg_fraction(std::string_view seq) noexcept;

// Length of the longest run of a single base; 0 for the empty sequence.
std::size_t max_homopolymer_run(std::string_view seq) noexcept;

}  // namespace dnachannel
