#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dnachannel/merge.hpp"
#include "dnachannel/process.hpp"
#include "dnachannel/sequencing.hpp"
#include "dnachannel/synthesis.hpp"

namespace dnachannel {

// One step of the physical process chain, applied in listed order between
// synthesis and sequencing. `neutral` is an explicit no-op so a config can
// state "nothing happens to the pool" instead of omitting the section.
struct StageConfig {
  enum class Kind { neutral, pcr, decay, dilute, interact };

  Kind kind = Kind::neutral;

  // pcr
  int cycles = 0;
  EfficiencyModel efficiency;

  // decay
  DecayParams decay;

  // dilute / interact
  double keep = 1.0;
  int steps = 0;
  double amp = 1.0;
  // Integerization threshold for dilute's stochastic thinning; raise it when
  // diluting very heavy entries down to a few copies so the sampling loss is
  // simulated instead of averaged away.
  double threshold = 1e6;

  bool operator==(const StageConfig&) const = default;
};

struct ReferenceConfig {
  enum class Source { generate, fasta };

  Source source = Source::generate;
  std::string fasta_path;
  std::size_t count = 0;             // M, when generating
  std::size_t target_length = 0;     // L, when generating
  std::size_t homopolymer_limit = 3;

  bool operator==(const ReferenceConfig&) const = default;
};

struct SequencingConfig {
  double coverage = 0.0;    // expected single reads per reference
  std::size_t read_len = 0; // instrument read length cap
  ErrorProfile profile;

  bool operator==(const SequencingConfig&) const = default;
};

struct AnalysisConfig {
  // `full` runs merge/match/error statistics on simulated reads; `counts`
  // stops after template sampling and reports coverage statistics only
  // (identical occupancy numbers at a fraction of the cost, used by the
  // physical-redundancy sweeps where per-base errors are disabled anyway).
  enum class Pipeline { full, counts };

  Pipeline pipeline = Pipeline::full;
  std::int64_t max_dist = 0;          // 0 = default (15% of target length)
  int index_k = 12;
  std::int64_t max_reading_pairs = 100000;

  bool operator==(const AnalysisConfig&) const = default;
};

struct ChannelConfig {
  ReferenceConfig reference;
  SynthesisParams synthesis;
  std::string synthesis_matrix = "uniform";  // uniform | high_pr
  std::vector<StageConfig> stages;
  SequencingConfig sequencing;
  std::string sequencing_matrix = "uniform";
  MergeParams merge;
  AnalysisConfig analysis;
  std::uint64_t master_seed = 1;

  bool operator==(const ChannelConfig&) const = default;
};

// Parses the line-based `key = value` format (see serialize_config for the
// canonical layout). Unknown keys, duplicate keys, malformed values, and
// out-of-range parameters all raise ConfigError; `stage` is the only
// repeatable key and at least one stage line is required.
ChannelConfig parse_config(const std::string& text);
ChannelConfig load_config(const std::string& path);

// Canonical serialization; parse_config(serialize_config(c)) reproduces c
// and serializing again yields byte-identical text.
std::string serialize_config(const ChannelConfig& config);

// Built-in presets. Names: fig7a..fig7g, table1-goldman, table1-erlich,
// table1-highpr, table1-highpr-4t, table1-lowpr, table1-lowpr-4t,
// erlich-d1..erlich-d7. Unknown names raise ConfigError.
ChannelConfig preset_config(const std::string& name);
// The commented config text a preset is parsed from.
std::string preset_source(const std::string& name);
const std::vector<std::string>& preset_names();

}  // namespace dnachannel
