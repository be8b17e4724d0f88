#pragma once

// Independent reference implementations for the differential tests. These are
// deliberately written as plain memoized recursions with none of the banding,
// early-abandon, or prefilter machinery of the library versions, so agreement
// is meaningful.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace oracles {

// Unit-cost Levenshtein distance between a and b by memoized recursion over
// suffixes.
inline std::int64_t edit_distance(const std::string& a, const std::string& b) {
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  std::vector<std::int64_t> memo((m + 1) * (n + 1), -1);
  std::function<std::int64_t(std::size_t, std::size_t)> go =
      [&](std::size_t i, std::size_t j) -> std::int64_t {
    std::int64_t& slot = memo[i * (n + 1) + j];
    if (slot >= 0) return slot;
    std::int64_t best;
    if (i == m) {
      best = static_cast<std::int64_t>(n - j);
    } else if (j == n) {
      best = static_cast<std::int64_t>(m - i);
    } else {
      best = go(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
      best = std::min(best, go(i + 1, j) + 1);
      best = std::min(best, go(i, j + 1) + 1);
    }
    return slot = best;
  };
  return go(0, 0);
}

// Free-end-gap (overlap) alignment value: maximize score = matches - interior
// distance, ties broken toward the smaller interior distance. Leading gaps
// are free on either sequence (start anywhere on row 0 or column 0); trailing
// gaps are free once either sequence is exhausted.
struct OverlapBest {
  std::int64_t score = 0;
  std::int64_t distance = 0;

  bool better_than(const OverlapBest& o) const {
    if (score != o.score) return score > o.score;
    return distance < o.distance;
  }
};

inline OverlapBest semiglobal(const std::string& a, const std::string& b) {
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  std::vector<OverlapBest> memo((m + 1) * (n + 1));
  std::vector<bool> done((m + 1) * (n + 1), false);
  std::function<OverlapBest(std::size_t, std::size_t)> go =
      [&](std::size_t i, std::size_t j) -> OverlapBest {
    const std::size_t idx = i * (n + 1) + j;
    if (done[idx]) return memo[idx];
    OverlapBest best;
    if (i < m && j < n) {
      // Interior cell: must keep aligning (trailing gaps are free only once
      // one of the sequences is exhausted).
      best = go(i + 1, j + 1);
      if (a[i] == b[j]) {
        best.score += 1;
      } else {
        best.score -= 1;
        best.distance += 1;
      }
      OverlapBest del = go(i + 1, j);
      del.score -= 1;
      del.distance += 1;
      if (del.better_than(best)) best = del;
      OverlapBest ins = go(i, j + 1);
      ins.score -= 1;
      ins.distance += 1;
      if (ins.better_than(best)) best = ins;
    }
    // Boundary cells keep the default {0, 0}: the remainder of the other
    // sequence is a free trailing gap.
    done[idx] = true;
    return memo[idx] = best;
  };
  OverlapBest best = go(0, 0);
  for (std::size_t i = 1; i <= m; ++i) {
    OverlapBest c = go(i, 0);
    if (c.better_than(best)) best = c;
  }
  for (std::size_t j = 1; j <= n; ++j) {
    OverlapBest c = go(0, j);
    if (c.better_than(best)) best = c;
  }
  return best;
}

// Test-local random DNA (std::mt19937 on purpose: independent of the
// library's RNG).
inline std::string random_dna(std::mt19937& rng, std::size_t len) {
  static constexpr char kBases[4] = {'A', 'C', 'G', 'T'};
  std::string s(len, 'A');
  std::uniform_int_distribution<int> d(0, 3);
  for (auto& c : s) c = kBases[d(rng)];
  return s;
}

// Pearson chi-square statistic for observed counts vs expected proportions.
inline double chi_square(const std::vector<std::int64_t>& observed,
                         const std::vector<double>& expected) {
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double diff = static_cast<double>(observed[i]) - expected[i];
    stat += diff * diff / expected[i];
  }
  return stat;
}

// 0.999 quantiles of the chi-square distribution (test significance
// alpha = 0.001), precomputed for the degrees of freedom used below.
inline double chi_square_crit_999(int df) {
  switch (df) {
    case 3:
      return 16.26623619623813;
    case 9:
      return 27.877164871256568;
    case 19:
      return 43.82019596451753;
    case 99:
      return 148.23035916510173;
    default:
      return -1.0;  // unsupported df: force a failure
  }
}

}  // namespace oracles
