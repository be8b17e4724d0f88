#include "dnachannel/align.hpp"

#include <algorithm>
#include <cmath>

#include "dnachannel/errors.hpp"
#include "dnachannel/rng.hpp"

namespace dnachannel {

namespace {

// Suffix-distance table: D[i*(n+1)+j] = edit distance of a[i:] vs b[j:].
// The canonical op walk runs forward over this table, which avoids storing
// traceback pointers and fixes tie-breaking as a preference order at each
// step (match > substitution > deletion > insertion).
void fill_suffix_distances(const Sequence& a, const Sequence& b,
                           std::vector<std::int32_t>& D) {
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  D.assign((m + 1) * (n + 1), 0);
  const std::size_t stride = n + 1;
  for (std::size_t j = 0; j <= n; ++j) {
    D[m * stride + j] = static_cast<std::int32_t>(n - j);
  }
  for (std::size_t i = m; i-- > 0;) {
    D[i * stride + n] = static_cast<std::int32_t>(m - i);
    for (std::size_t j = n; j-- > 0;) {
      const std::int32_t diag =
          D[(i + 1) * stride + (j + 1)] + (a[i] != b[j] ? 1 : 0);
      const std::int32_t down = D[(i + 1) * stride + j] + 1;
      const std::int32_t right = D[i * stride + (j + 1)] + 1;
      D[i * stride + j] = std::min(diag, std::min(down, right));
    }
  }
}

OpCounts walk_ops(const Sequence& a, const Sequence& b,
                  const std::vector<std::int32_t>& D,
                  std::int64_t pair_counts[4][4]) {
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  const std::size_t stride = n + 1;
  OpCounts ops;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < m || j < n) {
    const std::int32_t here = D[i * stride + j];
    if (i < m && j < n && a[i] == b[j] &&
        D[(i + 1) * stride + (j + 1)] == here) {
      ++i;
      ++j;
      continue;
    }
    if (i < m && j < n && D[(i + 1) * stride + (j + 1)] + 1 == here) {
      if (pair_counts != nullptr) {
        ++pair_counts[base_index(a[i])][base_index(b[j])];
      }
      ++ops.substitutions;
      ++i;
      ++j;
      continue;
    }
    if (i < m && D[(i + 1) * stride + j] + 1 == here) {
      ++ops.deletions;
      ++i;
      continue;
    }
    ++ops.insertions;
    ++j;
  }
  ops.distance = ops.substitutions + ops.insertions + ops.deletions;
  return ops;
}

}  // namespace

std::int64_t edit_distance(const Sequence& a, const Sequence& b) {
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  std::vector<std::int32_t> prev(n + 1);
  std::vector<std::int32_t> cur(n + 1);
  for (std::size_t j = 0; j <= n; ++j) prev[j] = static_cast<std::int32_t>(j);
  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = static_cast<std::int32_t>(i);
    for (std::size_t j = 1; j <= n; ++j) {
      cur[j] = std::min({prev[j - 1] + (a[i - 1] != b[j - 1] ? 1 : 0),
                         prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

std::int64_t bounded_edit_distance(const Sequence& a, const Sequence& b,
                                   std::int64_t max_dist) {
  if (max_dist < 0) throw PrecondViolation("max_dist must be >= 0");
  const std::int64_t m = static_cast<std::int64_t>(a.size());
  const std::int64_t n = static_cast<std::int64_t>(b.size());
  const std::int64_t over = max_dist + 1;
  if (std::llabs(m - n) > max_dist) return over;
  if (m == 0) return n;  // n <= max_dist by the check above

  // Ukkonen band: any alignment within max_dist stays within |i-j| <= w.
  const std::int64_t w = max_dist;
  const std::int32_t inf =
      static_cast<std::int32_t>(std::min<std::int64_t>(over, 1 << 30));
  std::vector<std::int32_t> prev(static_cast<std::size_t>(n) + 1, inf);
  std::vector<std::int32_t> cur(static_cast<std::size_t>(n) + 1, inf);
  for (std::int64_t j = 0; j <= std::min(n, w); ++j) {
    prev[static_cast<std::size_t>(j)] = static_cast<std::int32_t>(j);
  }
  for (std::int64_t i = 1; i <= m; ++i) {
    const std::int64_t lo = std::max<std::int64_t>(0, i - w);
    const std::int64_t hi = std::min(n, i + w);
    std::int32_t row_min = inf;
    if (lo == 0) {
      cur[0] = static_cast<std::int32_t>(i);
      row_min = cur[0];
    }
    for (std::int64_t j = std::max<std::int64_t>(1, lo); j <= hi; ++j) {
      const std::size_t js = static_cast<std::size_t>(j);
      std::int32_t best = inf;
      if (prev[js - 1] < inf) {
        best = prev[js - 1] +
               (a[static_cast<std::size_t>(i - 1)] != b[js - 1] ? 1 : 0);
      }
      if (prev[js] < inf) best = std::min(best, prev[js] + 1);
      if (j > lo && cur[js - 1] < inf) best = std::min(best, cur[js - 1] + 1);
      cur[js] = best;
      row_min = std::min(row_min, best);
    }
    if (row_min > max_dist) return over;
    // Reset stale band edges for the next row.
    if (lo >= 1) cur[static_cast<std::size_t>(lo) - 1] = inf;
    if (hi < n) cur[static_cast<std::size_t>(hi) + 1] = inf;
    std::swap(prev, cur);
  }
  const std::int32_t d = prev[static_cast<std::size_t>(n)];
  return d > max_dist ? over : d;
}

OpCounts edit_ops(const Sequence& a, const Sequence& b) {
  std::vector<std::int32_t> D;
  fill_suffix_distances(a, b, D);
  return walk_ops(a, b, D, nullptr);
}

OpCounts edit_ops_with_pairs(const Sequence& a, const Sequence& b,
                             std::int64_t pair_counts[4][4]) {
  std::vector<std::int32_t> D;
  fill_suffix_distances(a, b, D);
  return walk_ops(a, b, D, pair_counts);
}

OpCounts semiglobal_ops(const Sequence& a, const Sequence& b) {
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  const std::size_t stride = n + 1;
  // Suffix tables of the best completion from (i,j) to any free edge:
  // S = score (matches - distance, maximized), T = interior distance of the
  // tie-broken (minimal-distance) optimum.
  std::vector<std::int32_t> S((m + 1) * (n + 1), 0);
  std::vector<std::int32_t> T((m + 1) * (n + 1), 0);
  for (std::size_t i = m; i-- > 0;) {
    for (std::size_t j = n; j-- > 0;) {
      std::int32_t best_s;
      std::int32_t best_t;
      if (a[i] == b[j]) {
        best_s = S[(i + 1) * stride + (j + 1)] + 1;
        best_t = T[(i + 1) * stride + (j + 1)];
      } else {
        best_s = S[(i + 1) * stride + (j + 1)] - 1;
        best_t = T[(i + 1) * stride + (j + 1)] + 1;
      }
      const std::int32_t del_s = S[(i + 1) * stride + j] - 1;
      const std::int32_t del_t = T[(i + 1) * stride + j] + 1;
      if (del_s > best_s || (del_s == best_s && del_t < best_t)) {
        best_s = del_s;
        best_t = del_t;
      }
      const std::int32_t ins_s = S[i * stride + (j + 1)] - 1;
      const std::int32_t ins_t = T[i * stride + (j + 1)] + 1;
      if (ins_s > best_s || (ins_s == best_s && ins_t < best_t)) {
        best_s = ins_s;
        best_t = ins_t;
      }
      S[i * stride + j] = best_s;
      T[i * stride + j] = best_t;
    }
  }

  // Canonical start: (0,0), then (0,1..n), then (1..m,0); first optimum.
  std::size_t si = 0;
  std::size_t sj = 0;
  std::int32_t best_s = S[0];
  std::int32_t best_t = T[0];
  auto consider = [&](std::size_t ci, std::size_t cj) {
    const std::int32_t cs = S[ci * stride + cj];
    const std::int32_t ct = T[ci * stride + cj];
    if (cs > best_s || (cs == best_s && ct < best_t)) {
      best_s = cs;
      best_t = ct;
      si = ci;
      sj = cj;
    }
  };
  for (std::size_t j = 1; j <= n; ++j) consider(0, j);
  for (std::size_t i = 1; i <= m; ++i) consider(i, 0);

  OpCounts ops;
  std::size_t i = si;
  std::size_t j = sj;
  while (i < m && j < n) {
    const std::int32_t hs = S[i * stride + j];
    const std::int32_t ht = T[i * stride + j];
    if (a[i] == b[j] && S[(i + 1) * stride + (j + 1)] + 1 == hs &&
        T[(i + 1) * stride + (j + 1)] == ht) {
      ++i;
      ++j;
      continue;
    }
    if (a[i] != b[j] && S[(i + 1) * stride + (j + 1)] - 1 == hs &&
        T[(i + 1) * stride + (j + 1)] + 1 == ht) {
      ++ops.substitutions;
      ++i;
      ++j;
      continue;
    }
    if (S[(i + 1) * stride + j] - 1 == hs &&
        T[(i + 1) * stride + j] + 1 == ht) {
      ++ops.deletions;
      ++i;
      continue;
    }
    ++ops.insertions;
    ++j;
  }
  ops.distance = ops.substitutions + ops.insertions + ops.deletions;
  return ops;
}

std::uint64_t pack_kmer(const Sequence& s, std::size_t pos, int k) {
  std::uint64_t v = 0;
  for (int t = 0; t < k; ++t) {
    v = (v << 2) |
        static_cast<std::uint64_t>(base_index(s[pos + static_cast<std::size_t>(t)]));
  }
  return v;
}

RefIndex::RefIndex(const ReferenceSet& refs, int k) : refs_(&refs), k_(k) {
  if (k < 1 || k > 32) throw PrecondViolation("index k must be in [1,32]");
  if (refs.target_length > 0 &&
      static_cast<std::size_t>(k) > refs.target_length) {
    throw PrecondViolation("index k must not exceed the target length");
  }
  std::vector<std::uint64_t> kmers;
  for (std::size_t id = 0; id < refs.sequences.size(); ++id) {
    const Sequence& s = refs.sequences[id];
    exact_[hash_label(s)].push_back(static_cast<std::int32_t>(id));
    if (s.size() < static_cast<std::size_t>(k)) continue;
    kmers.clear();
    for (std::size_t p = 0; p + static_cast<std::size_t>(k) <= s.size(); ++p) {
      kmers.push_back(pack_kmer(s, p, k));
    }
    std::sort(kmers.begin(), kmers.end());
    kmers.erase(std::unique(kmers.begin(), kmers.end()), kmers.end());
    for (std::uint64_t km : kmers) {
      postings_[km].push_back(static_cast<std::int32_t>(id));
    }
  }
}

std::vector<std::int32_t> RefIndex::candidates(const Sequence& read) const {
  std::vector<std::int32_t> out;
  if (read.size() < static_cast<std::size_t>(k_)) return out;
  for (std::size_t p = 0; p + static_cast<std::size_t>(k_) <= read.size();
       ++p) {
    const auto it = postings_.find(pack_kmer(read, p, k_));
    if (it != postings_.end()) {
      out.insert(out.end(), it->second.begin(), it->second.end());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::int32_t RefIndex::exact_match(const Sequence& read) const {
  const auto it = exact_.find(hash_label(read));
  if (it == exact_.end()) return -1;
  for (std::int32_t id : it->second) {
    if (refs_->sequences[static_cast<std::size_t>(id)] == read) return id;
  }
  return -1;
}

const std::vector<std::int32_t>* RefIndex::postings(
    std::uint64_t packed_kmer) const {
  const auto it = postings_.find(packed_kmer);
  return it == postings_.end() ? nullptr : &it->second;
}

std::int64_t RefIndex::guaranteed_distance(std::size_t read_len) const {
  // q-gram lemma: d edits destroy at most d*k of the read's
  // (read_len - k + 1) k-mers, so a shared k-mer survives whenever
  // d <= (read_len - k) / k.
  if (read_len < static_cast<std::size_t>(k_)) return -1;
  return static_cast<std::int64_t>((read_len - static_cast<std::size_t>(k_)) /
                                   static_cast<std::size_t>(k_));
}

RefIndex build_ref_index(const ReferenceSet& refs, int k) {
  return RefIndex(refs, k);
}

std::int64_t default_max_dist(std::size_t target_length) {
  return static_cast<std::int64_t>(0.15 * static_cast<double>(target_length));
}

namespace {

struct ScanState {
  std::int32_t best_id = -1;
  std::int64_t best_d = 0;
  bool ambiguous = false;
};

template <typename Ids>
ScanState scan_refs(const Sequence& read, const ReferenceSet& refs,
                    std::int64_t max_dist, const Ids& ids) {
  ScanState st;
  st.best_d = max_dist + 1;
  for (const std::int32_t id : ids) {
    const Sequence& ref = refs.sequences[static_cast<std::size_t>(id)];
    const std::int64_t bound = std::min(max_dist, st.best_d);
    const std::int64_t d = bounded_edit_distance(read, ref, bound);
    if (d < st.best_d) {
      st.best_d = d;
      st.best_id = id;
      st.ambiguous = false;
    } else if (d == st.best_d && st.best_d <= max_dist && id != st.best_id) {
      st.ambiguous = true;
    }
  }
  return st;
}

struct AllIds {
  std::int32_t count;
  struct iterator {
    std::int32_t v;
    std::int32_t operator*() const { return v; }
    iterator& operator++() {
      ++v;
      return *this;
    }
    bool operator!=(const iterator& o) const { return v != o.v; }
  };
  iterator begin() const { return {0}; }
  iterator end() const { return {count}; }
};

std::optional<MatchResult> finish_match(const Sequence& read,
                                        const ReferenceSet& refs,
                                        std::int64_t max_dist,
                                        const ScanState& st) {
  if (st.best_id < 0 || st.best_d > max_dist) return std::nullopt;
  MatchResult r;
  r.reference_id = st.best_id;
  r.ops = edit_ops(refs.sequences[static_cast<std::size_t>(st.best_id)], read);
  r.correct_length = read.size() == refs.target_length;
  r.ambiguous = st.ambiguous;
  return r;
}

}  // namespace

std::optional<MatchResult> match_reference(const Sequence& read,
                                           const RefIndex& index,
                                           std::int64_t max_dist) {
  if (max_dist < 0) throw PrecondViolation("max_dist must be >= 0");
  const ReferenceSet& refs = index.refs();

  // Error-free reads dominate; exact sequence equality is uniquely minimal
  // (references are distinct, so every other reference has distance >= 1).
  const std::int32_t ex = index.exact_match(read);
  if (ex >= 0) {
    ScanState st;
    st.best_id = ex;
    st.best_d = 0;
    return finish_match(read, refs, max_dist, st);
  }

  ScanState st = scan_refs(read, refs, max_dist, index.candidates(read));

  // The candidate set provably contains every reference within the q-gram
  // guarantee. If the best candidate sits above it (or there were no
  // candidates), a closer non-candidate may exist: rescan everything.
  if (st.best_d > index.guaranteed_distance(read.size())) {
    st = scan_refs(read, refs, max_dist,
                   AllIds{static_cast<std::int32_t>(refs.size())});
  }
  return finish_match(read, refs, max_dist, st);
}

std::optional<MatchResult> match_reference_naive(const Sequence& read,
                                                 const ReferenceSet& refs,
                                                 std::int64_t max_dist) {
  if (max_dist < 0) throw PrecondViolation("max_dist must be >= 0");
  const ScanState st = scan_refs(
      read, refs, max_dist, AllIds{static_cast<std::int32_t>(refs.size())});
  return finish_match(read, refs, max_dist, st);
}

}  // namespace dnachannel
