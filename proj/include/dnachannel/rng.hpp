#pragma once

#include <cstdint>
#include <string_view>

namespace dnachannel {

// Deterministic counter-seeded PRNG stream. A stream is fully identified by
// (master_seed, stream_id): the generator state is derived from that pair
// alone, so any worker can reconstruct the exact stream for an item without
// coordination. Core generator is xoshiro256++ with splitmix64 state
// expansion.
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  // Child stream derived from this stream's *identity* (not its current
  // state), so substream(k) is reproducible regardless of how many draws
  // the parent has made.
  RngStream substream(std::uint64_t salt) const;
  RngStream substream(std::string_view label) const;
  RngStream substream(std::string_view label, std::uint64_t salt) const;

  // Raw 64-bit output.
  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform();

  // Uniform integer on [0, bound) for bound >= 1 (unbiased, rejection).
  std::uint64_t uniform_int(std::uint64_t bound);

  // Gaussian via Box-Muller (no cached spare: keeps draw count predictable).
  // stddev == 0 returns mean exactly.
  double normal(double mean, double stddev);

  // Gamma(shape k > 0, scale theta > 0), Marsaglia-Tsang with boost for k<1.
  double gamma(double shape, double scale);

  // Poisson(mean >= 0); Knuth product method below 30, PTRS rejection above.
  std::int64_t poisson(double mean);

  // Binomial(n >= 0, p in [0,1]); inversion below n*min(p,1-p) < 30,
  // BTPE-style rejection otherwise (delegated through a normal approx guard).
  std::int64_t binomial(std::int64_t n, double p);

  // Support for std::uniform_random_bit_generator if ever needed.
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~static_cast<result_type>(0); }
  result_type operator()() { return next_u64(); }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t s_[4];
};

// Spec-level constructor name.
inline RngStream derive_stream(std::uint64_t master_seed,
                               std::uint64_t stream_id) {
  return RngStream(master_seed, stream_id);
}

// Stable 64-bit hash for deriving stream ids from labels (FNV-1a).
std::uint64_t hash_label(std::string_view label) noexcept;

// Stable mixing of two 64-bit values into one (splitmix64 finalizer chain).
std::uint64_t mix_u64(std::uint64_t a, std::uint64_t b) noexcept;

}  // namespace dnachannel
