#pragma once

#include <cstdint>
#include <string>

#include "dnachannel/stats.hpp"

namespace dnachannel {

// Aggregated results of one channel run (or of analyzing external reads).
// Sections that a pipeline does not produce stay absent (present flags),
// and the serializers mark them "skipped" instead of inventing zeros.
struct Report {
  std::string config_echo;  // canonical config text (empty for `analyze`)

  // Channel summary.
  std::int64_t n_references = 0;
  double physical_redundancy = 0.0;      // pool weight / M after synthesis
  double final_redundancy = 0.0;         // pool weight / M entering sequencing
  std::int64_t pool_entries = 0;         // distinct entries entering sequencing
  std::int64_t n_template_draws = 0;     // paired observations drawn
  std::int64_t n_pairs = 0;              // pairs analyzed
  std::int64_t filtered_pairs = 0;       // dropped by exact-length filter
  std::int64_t invalid_pairs = 0;        // dropped for non-ACGT characters

  // Merge.
  bool has_merge = false;
  std::int64_t merged = 0;
  std::int64_t no_overlap = 0;
  std::int64_t too_many_mismatches = 0;

  // Reference matching.
  bool has_match = false;
  std::int64_t matched = 0;
  std::int64_t unmatched = 0;
  std::int64_t ambiguous = 0;

  // Per-stratum error rates.
  struct RatesSection {
    bool present = false;
    ErrorRates rates;
  };
  RatesSection rates_all;
  RatesSection rates_correct;
  RatesSection rates_incorrect;

  // Conditional substitution matrix estimate.
  bool has_sub_matrix = false;
  double sub_matrix[4][4] = {};
  std::int64_t sub_matrix_events = 0;

  // Reading-error estimate from two-sided reads.
  bool has_reading = false;
  ReadingErrorEstimate reading;

  // Coverage distribution.
  bool has_histogram = false;
  CoverageHistogram histogram;
  bool has_negbin = false;
  NegBinFit negbin;
  std::string negbin_skip_reason;

  // Volatile metadata, excluded from determinism comparisons.
  std::string timestamp;
  double runtime_seconds = 0.0;
  int threads = 1;
};

// Full JSON document including the volatile "meta" object.
std::string report_json(const Report& report);

// JSON with "meta" stripped: byte-identical across runs of the same seeded
// config regardless of thread count or wall clock.
std::string report_canonical_json(const Report& report);

// Writes report.json plus one CSV per section and plain-text histograms
// into `dir` (created if missing).
void write_report(const Report& report, const std::string& dir);

// One-paragraph human summary for the CLI.
std::string report_summary(const Report& report);

}  // namespace dnachannel
