#include "dnachannel/pool.hpp"

#include <algorithm>
#include <tuple>

#include "dnachannel/errors.hpp"

namespace dnachannel {

void Pool::normalize() {
  std::sort(entries_.begin(), entries_.end(),
            [](const PoolEntry& a, const PoolEntry& b) {
              return std::tie(a.origin, a.terminated, a.seq) <
                     std::tie(b.origin, b.terminated, b.seq);
            });
  std::size_t out = 0;
  for (std::size_t i = 0; i < entries_.size();) {
    PoolEntry merged = std::move(entries_[i]);
    std::size_t j = i + 1;
    while (j < entries_.size() && entries_[j].origin == merged.origin &&
           entries_[j].terminated == merged.terminated &&
           entries_[j].seq == merged.seq) {
      merged.weight += entries_[j].weight;
      ++j;
    }
    i = j;
    if (merged.weight > 0.0) {
      entries_[out++] = std::move(merged);
    }
  }
  entries_.resize(out);
  total_weight_ = 0.0;
  for (const PoolEntry& e : entries_) total_weight_ += e.weight;
}

double Pool::physical_redundancy(std::size_t reference_count) const {
  if (reference_count == 0) {
    throw PrecondViolation("physical redundancy requires reference_count > 0");
  }
  return total_weight_ / static_cast<double>(reference_count);
}

}  // namespace dnachannel
