#include "dnachannel/sequence.hpp"

#include <algorithm>

#include "dnachannel/errors.hpp"

namespace dnachannel {

Sequence validate_sequence(std::string_view seq, const std::string& context) {
  Sequence out;
  out.resize(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const char c = seq[i];
    const char upper =
        (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c;
    if (!is_valid_base(upper)) {
      throw InvalidCharacter(i, c, context);
    }
    out[i] = upper;
  }
  return out;
}

bool is_valid_sequence(std::string_view seq) noexcept {
  return std::all_of(seq.begin(), seq.end(),
                     [](char c) { return is_valid_base(c); });
}

Sequence reverse_complement(std::string_view seq) {
  Sequence out;
  out.resize(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    out[i] = complement_base(seq[seq.size() - 1 - i]);
  }
  return out;
}

double cg_fraction(std::string_view seq) noexcept {
  if (seq.empty()) return 0.0;
  std::size_t cg = 0;
  for (char c : seq) {
    if (c == 'C' || c == 'G') ++cg;
  }
  return static_cast<double>(cg) / static_cast<double>(seq.size());
}

std::size_t max_homopolymer_run(std::string_view seq) noexcept {
  std::size_t best = 0;
  std::size_t run = 0;
  char prev = '\0';
  for (char c : seq) {
    run = (c == prev) ? run + 1 : 1;
    prev = c;
    best = std::max(best, run);
  }
  return best;
}

}  // namespace dnachannel
