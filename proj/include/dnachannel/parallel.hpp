#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace dnachannel {

// Runs fn(chunk_index, begin, end) over a static partition of [0, n) into
// `chunks` contiguous ranges, using up to `threads` worker threads. The
// partition depends only on n and chunks, never on thread count, so callers
// that combine per-chunk results in chunk order get identical output at any
// parallelism level. The first exception thrown by a worker is rethrown.
template <typename Fn>
void parallel_chunks(std::size_t n, std::size_t chunks, int threads, Fn&& fn) {
  if (n == 0 || chunks == 0) return;
  if (chunks > n) chunks = n;
  auto chunk_bounds = [n, chunks](std::size_t c) {
    // Even split with the remainder spread over the first chunks.
    const std::size_t base = n / chunks;
    const std::size_t rem = n % chunks;
    const std::size_t begin = c * base + (c < rem ? c : rem);
    const std::size_t len = base + (c < rem ? 1 : 0);
    return std::pair<std::size_t, std::size_t>(begin, begin + len);
  };

  if (threads <= 1 || chunks == 1) {
    for (std::size_t c = 0; c < chunks; ++c) {
      auto [b, e] = chunk_bounds(c);
      fn(c, b, e);
    }
    return;
  }

  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(
      static_cast<std::size_t>(threads), nullptr);
  const std::size_t nthreads =
      std::min<std::size_t>(static_cast<std::size_t>(threads), chunks);
  for (std::size_t t = 0; t < nthreads; ++t) {
    workers.emplace_back([&, t]() {
      try {
        for (std::size_t c = t; c < chunks; c += nthreads) {
          auto [b, e] = chunk_bounds(c);
          fn(c, b, e);
        }
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Convenience: one chunk per item group of roughly `grain` items.
template <typename Fn>
void parallel_for(std::size_t n, int threads, std::size_t grain, Fn&& fn) {
  const std::size_t chunks = grain == 0 ? 1 : (n + grain - 1) / grain;
  parallel_chunks(n, chunks, threads, std::forward<Fn>(fn));
}

}  // namespace dnachannel
