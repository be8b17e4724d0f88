#pragma once

#include <array>
#include <string>

#include "dnachannel/rng.hpp"
#include "dnachannel/sequence.hpp"

namespace dnachannel {

// Probabilities of the 12 base-to-base substitutions conditional on a
// substitution occurring; off-diagonal entries sum to 1, diagonal is 0.
class ConditionalSubMatrix {
 public:
  // Uniform: every substitution 1/12.
  static ConditionalSubMatrix uniform();

  // Empirical matrix of the high-physical-redundancy dataset (dominated by
  // C->T / G->A transitions).
  static ConditionalSubMatrix high_pr();

  // Builds from 12 off-diagonal entries, normalizing them to sum to 1.
  // Throws PrecondViolation for negative entries or an all-zero matrix.
  static ConditionalSubMatrix from_entries(const double entries[4][4]);

  double p(int from, int to) const { return p_[from][to]; }
  double p(char from, char to) const {
    return p_[base_index(from)][base_index(to)];
  }

  // Sum of the row for source base `from` (total probability mass of
  // substitutions out of that base).
  double row_mass(int from) const {
    return p_[from][0] + p_[from][1] + p_[from][2] + p_[from][3];
  }

  // Draws a substitution target for source base `from`, with in-row
  // probabilities proportional to the matrix entries. `unit` must be a
  // uniform variate on [0, 1).
  char draw_target(int from, double unit) const;

  bool operator==(const ConditionalSubMatrix& o) const {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (p_[i][j] != o.p_[i][j]) return false;
    return true;
  }

 private:
  double p_[4][4] = {};
};

// Per-base IDS(+termination) rates driving the position scan in inject_ids.
// p_term is 0 for sequencing profiles; synthesis sets it to the termination
// reaction rate.
struct IdsRates {
  double p_sub = 0.0;
  double p_ins = 0.0;
  double p_del = 0.0;
  double p_term = 0.0;

  bool operator==(const IdsRates&) const = default;
};

struct InjectResult {
  Sequence seq;
  bool terminated = false;
};

// Applies the per-position error scan to `s`. At each source position the
// mutually exclusive events are, in fixed order: deletion (p_del),
// substitution, insertion of a uniform base before the position (p_ins), and
// termination (p_term, truncates and sets the flag). The substitution event
// fires with probability 4 * p_sub * row_mass(source) and picks its target
// within the row proportionally to the matrix entries; averaged over a
// uniform base composition this yields an overall substitution rate of p_sub
// while reproducing the conditional matrix exactly, so estimated matrices
// round-trip against injected ones. For the uniform matrix the firing
// probability reduces to p_sub for every source base.
//
// Throws PrecondViolation if any rate is outside [0,1] or the per-position
// event probabilities can sum above 1.
InjectResult inject_ids(const Sequence& s, const IdsRates& rates,
                        const ConditionalSubMatrix& matrix, RngStream& rng);

// Probability that at least one scan event fires on a sequence of the given
// length and base composition equal to `s` (used by conditioned variant
// generation in synthesis).
double per_position_event_prob(const IdsRates& rates,
                               const ConditionalSubMatrix& matrix, int base);

}  // namespace dnachannel
