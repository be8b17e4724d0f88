#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "dnachannel/config.hpp"
#include "dnachannel/io.hpp"
#include "dnachannel/report.hpp"

namespace dnachannel {

struct RunOptions {
  std::optional<std::uint64_t> seed_override;
  int threads = 1;
  std::string out_dir;  // empty: compute the report but write no files
  bool emit_fastq = false;
  bool exact_length_filter = false;
};

// Executes a configured channel end to end. The counts pipeline stops after
// template sampling (coverage statistics only); the full pipeline streams
// simulated pairs through merge, reference matching, and the error
// estimators in fixed-size batches, so memory stays bounded at any scale.
// Reports are byte-identical (minus the meta object) for a given config and
// seed at any thread count.
Report run(const ChannelConfig& config, const RunOptions& opts);

// Merge/match/estimate externally produced read pairs against a reference
// set (the `analyze` verb). `seed` drives merge conflict coins only.
Report analyze_reads(const ReferenceSet& refs, const ReadSet& pairs,
                     std::int64_t invalid_pairs, MergeParams merge_params,
                     const AnalysisConfig& analysis, std::uint64_t seed,
                     int threads);

// Pool construction through the configured stage list (exposed for tests:
// everything up to, but excluding, template sampling).
Pool build_final_pool(const ReferenceSet& refs, const ChannelConfig& config,
                      const RngStream& rng, int threads = 1);

}  // namespace dnachannel
