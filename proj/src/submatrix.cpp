#include "dnachannel/submatrix.hpp"

#include <cmath>

#include "dnachannel/errors.hpp"

namespace dnachannel {

ConditionalSubMatrix ConditionalSubMatrix::uniform() {
  ConditionalSubMatrix m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m.p_[i][j] = (i == j) ? 0.0 : 1.0 / 12.0;
  return m;
}

ConditionalSubMatrix ConditionalSubMatrix::high_pr() {
  // Empirical conditional substitution probabilities measured on the
  // high-physical-redundancy dataset (A=0, C=1, G=2, T=3).
  double e[4][4] = {
      {0.0, 0.0606676, 0.118723, 0.0240929},
      {0.0473149, 0.0, 0.0223512, 0.268215},
      {0.205806, 0.030479, 0.0, 0.0507983},
      {0.0214804, 0.132656, 0.0174165, 0.0},
  };
  return from_entries(e);
}

ConditionalSubMatrix ConditionalSubMatrix::from_entries(
    const double entries[4][4]) {
  double total = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      if (entries[i][j] < 0.0) {
        throw PrecondViolation("substitution matrix entries must be >= 0");
      }
      total += entries[i][j];
    }
  }
  if (total <= 0.0) {
    throw PrecondViolation("substitution matrix must have positive mass");
  }
  ConditionalSubMatrix m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      m.p_[i][j] = (i == j) ? 0.0 : entries[i][j] / total;
  return m;
}

char ConditionalSubMatrix::draw_target(int from, double unit) const {
  const double mass = row_mass(from);
  double r = unit * mass;
  for (int j = 0; j < 4; ++j) {
    if (j == from) continue;
    if (r < p_[from][j]) return index_base(j);
    r -= p_[from][j];
  }
  // Floating-point slack: fall back to the last nonzero column.
  for (int j = 3; j >= 0; --j) {
    if (j != from && p_[from][j] > 0.0) return index_base(j);
  }
  return index_base((from + 1) & 3);
}

double per_position_event_prob(const IdsRates& rates,
                               const ConditionalSubMatrix& matrix, int base) {
  return rates.p_del + 4.0 * rates.p_sub * matrix.row_mass(base) +
         rates.p_ins + rates.p_term;
}

InjectResult inject_ids(const Sequence& s, const IdsRates& rates,
                        const ConditionalSubMatrix& matrix, RngStream& rng) {
  for (double r : {rates.p_sub, rates.p_ins, rates.p_del, rates.p_term}) {
    if (r < 0.0 || r > 1.0) {
      throw PrecondViolation("error rates must lie in [0,1]");
    }
  }
  for (int b = 0; b < 4; ++b) {
    if (per_position_event_prob(rates, matrix, b) > 1.0) {
      throw PrecondViolation(
          "per-position event probabilities must sum to <= 1");
    }
  }

  InjectResult out;
  out.seq.reserve(s.size() + 4);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    const int b = base_index(c);
    const double p_sub_eff = 4.0 * rates.p_sub * matrix.row_mass(b);
    const double u = rng.uniform();
    if (u < rates.p_del) {
      continue;  // deletion: source base not emitted
    }
    if (u < rates.p_del + p_sub_eff) {
      // Reuse the residual of u as the in-row target selector; it is
      // uniform on [0, p_sub_eff) given this branch.
      const double unit = (u - rates.p_del) / p_sub_eff;
      out.seq.push_back(matrix.draw_target(b, unit));
      continue;
    }
    if (u < rates.p_del + p_sub_eff + rates.p_ins) {
      out.seq.push_back(index_base(static_cast<int>(rng.uniform_int(4))));
      out.seq.push_back(c);
      continue;
    }
    if (u < rates.p_del + p_sub_eff + rates.p_ins + rates.p_term) {
      out.terminated = true;
      break;
    }
    out.seq.push_back(c);
  }
  return out;
}

}  // namespace dnachannel
