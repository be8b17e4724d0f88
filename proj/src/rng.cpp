#include "dnachannel/rng.hpp"

#include <cmath>

#include "dnachannel/errors.hpp"

namespace dnachannel {

namespace {

inline std::uint64_t splitmix64_next(std::uint64_t& x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t hash_label(std::string_view label) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a 64-bit offset basis
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t mix_u64(std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t x = a;
  (void)splitmix64_next(x);  // decorrelate before folding in b
  x ^= b + 0x9E3779B97F4A7C15ULL + (x << 6) + (x >> 2);
  return splitmix64_next(x);
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed), stream_id_(stream_id) {
  std::uint64_t x = mix_u64(master_seed, stream_id);
  s_[0] = splitmix64_next(x);
  s_[1] = splitmix64_next(x);
  s_[2] = splitmix64_next(x);
  s_[3] = splitmix64_next(x);
  // xoshiro requires a nonzero state; splitmix output of a fixed seed chain
  // is zero-everywhere with probability ~2^-256, but guard anyway.
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

RngStream RngStream::substream(std::uint64_t salt) const {
  return RngStream(master_seed_, mix_u64(stream_id_, salt));
}

RngStream RngStream::substream(std::string_view label) const {
  return substream(hash_label(label));
}

RngStream RngStream::substream(std::string_view label,
                               std::uint64_t salt) const {
  return substream(mix_u64(hash_label(label), salt));
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_int(std::uint64_t bound) {
  if (bound == 0) throw PrecondViolation("uniform_int bound must be >= 1");
  // Lemire-style rejection-free-in-expectation multiply-shift.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = next_u64();
    const unsigned __int128 m =
        static_cast<unsigned __int128>(x) * static_cast<unsigned __int128>(bound);
    if (static_cast<std::uint64_t>(m) >= threshold) {
      return static_cast<std::uint64_t>(m >> 64);
    }
  }
}

double RngStream::normal(double mean, double stddev) {
  if (stddev == 0.0) return mean;
  // Box-Muller, one variate per call for a fixed draw count of 2 u64s.
  double u1 = uniform();
  const double u2 = uniform();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  return mean + stddev * r * std::cos(6.283185307179586476925286766559 * u2);
}

double RngStream::gamma(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0)) {
    throw PrecondViolation("gamma requires shape > 0 and scale > 0");
  }
  if (shape < 1.0) {
    // Boost: Gamma(k) = Gamma(k+1) * U^{1/k}.
    const double u = uniform();
    return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  // Marsaglia & Tsang (2000).
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = normal(0.0, 1.0);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
      return d * v * scale;
    }
  }
}

std::int64_t RngStream::poisson(double mean) {
  if (mean < 0.0) throw PrecondViolation("poisson requires mean >= 0");
  if (mean == 0.0) return 0;
  if (mean < 30.0) {
    // Knuth product method.
    const double limit = std::exp(-mean);
    double prod = uniform();
    std::int64_t n = 0;
    while (prod > limit) {
      prod *= uniform();
      ++n;
    }
    return n;
  }
  // PTRS transformed rejection (Hormann 1993).
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = uniform() - 0.5;
    const double v = uniform();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        k * std::log(mean) - mean - std::lgamma(k + 1.0)) {
      return static_cast<std::int64_t>(k);
    }
  }
}

std::int64_t RngStream::binomial(std::int64_t n, double p) {
  if (n < 0) throw PrecondViolation("binomial requires n >= 0");
  if (p < 0.0 || p > 1.0) {
    throw PrecondViolation("binomial requires p in [0,1]");
  }
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  if (p > 0.5) return n - binomial(n, 1.0 - p);

  const double np = static_cast<double>(n) * p;
  if (np < 30.0) {
    // Inversion by sequential search over the CDF.
    const double q = 1.0 - p;
    const double s = p / q;
    const double base = static_cast<double>(n) * std::pow(q, n);
    double u = uniform();
    if (base <= 0.0) {
      // Underflow guard for large n with small np: fall back to Poisson
      // approximation bounded by n (error O(p) per draw, negligible here).
      const std::int64_t k = poisson(np);
      return k > n ? n : k;
    }
    double f = std::pow(q, n);
    std::int64_t k = 0;
    for (;;) {
      if (u < f) return k;
      u -= f;
      if (k >= n) return n;
      f *= s * static_cast<double>(n - k) / static_cast<double>(k + 1);
      ++k;
    }
  }

  // BTRS transformed rejection (Hormann 1993), valid for np >= 10.
  const double q = 1.0 - p;
  const double spq = std::sqrt(np * q);
  const double b = 1.15 + 2.53 * spq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = np + 0.5;
  const double v_r = 0.92 - 4.2 / b;
  const double alpha = (2.83 + 5.1 / b) * spq;
  const double lpq = std::log(p / q);
  const double m = std::floor((static_cast<double>(n) + 1.0) * p);
  const double h = std::lgamma(m + 1.0) +
                   std::lgamma(static_cast<double>(n) - m + 1.0);
  for (;;) {
    const double u = uniform() - 0.5;
    const double v = uniform();
    const double us = 0.5 - std::fabs(u);
    const double kd = std::floor((2.0 * a / us + b) * u + c);
    if (kd < 0.0 || kd > static_cast<double>(n)) continue;
    if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(kd);
    if (std::log(v * alpha / (a / (us * us) + b)) <=
        h - std::lgamma(kd + 1.0) -
            std::lgamma(static_cast<double>(n) - kd + 1.0) +
            (kd - m) * lpq) {
      return static_cast<std::int64_t>(kd);
    }
  }
}

}  // namespace dnachannel
