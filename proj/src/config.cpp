#include "dnachannel/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dnachannel/errors.hpp"

namespace dnachannel {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double parse_real(const std::string& v, const std::string& key, int line) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    fail(line, "expected a number for '" + key + "', got '" + v + "'");
  }
  return out;
}

std::int64_t parse_int(const std::string& v, const std::string& key,
                       int line) {
  std::int64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    fail(line, "expected an integer for '" + key + "', got '" + v + "'");
  }
  return out;
}

std::uint64_t parse_u64(const std::string& v, const std::string& key,
                        int line) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    fail(line, "expected an unsigned integer for '" + key + "', got '" + v +
                   "'");
  }
  return out;
}

std::size_t parse_size(const std::string& v, const std::string& key,
                       int line) {
  return static_cast<std::size_t>(parse_u64(v, key, line));
}

std::string fmt_real(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

ConditionalSubMatrix matrix_by_name(const std::string& name, int line) {
  if (name == "uniform") return ConditionalSubMatrix::uniform();
  if (name == "high_pr") return ConditionalSubMatrix::high_pr();
  fail(line, "unknown substitution matrix '" + name +
                 "' (expected uniform or high_pr)");
}

// Parses the k=v tokens after a stage kind. Each key is consumed at most
// once; unknown or repeated keys are errors.
class StageArgs {
 public:
  StageArgs(std::istringstream& in, int line) : line_(line) {
    std::string tok;
    while (in >> tok) {
      std::size_t eq = tok.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 >= tok.size()) {
        fail(line, "malformed stage parameter '" + tok +
                       "' (expected key=value)");
      }
      std::string key = tok.substr(0, eq);
      if (!args_.emplace(key, tok.substr(eq + 1)).second) {
        fail(line, "duplicate stage parameter '" + key + "'");
      }
    }
  }

  bool has(const std::string& key) const { return args_.count(key) != 0; }

  std::string take(const std::string& key) {
    auto it = args_.find(key);
    if (it == args_.end()) fail(line_, "missing stage parameter '" + key + "'");
    std::string v = it->second;
    args_.erase(it);
    return v;
  }

  std::string take_or(const std::string& key, const std::string& def) {
    auto it = args_.find(key);
    if (it == args_.end()) return def;
    std::string v = it->second;
    args_.erase(it);
    return v;
  }

  void finish(const std::string& kind) const {
    if (!args_.empty()) {
      fail(line_, "unknown parameter '" + args_.begin()->first +
                      "' for stage '" + kind + "'");
    }
  }

 private:
  int line_;
  std::map<std::string, std::string> args_;
};

StageConfig parse_stage(const std::string& value, int line) {
  std::istringstream in(value);
  std::string kind;
  if (!(in >> kind)) fail(line, "empty stage line");
  StageConfig s;
  StageArgs args(in, line);
  if (kind == "neutral") {
    s.kind = StageConfig::Kind::neutral;
  } else if (kind == "pcr") {
    s.kind = StageConfig::Kind::pcr;
    s.cycles =
        static_cast<int>(parse_int(args.take("cycles"), "cycles", line));
    std::string mode = args.take_or("mode", "strand_specific");
    if (mode == "strand_specific") {
      s.efficiency.mode = EfficiencyModel::Mode::strand_specific;
    } else if (mode == "per_cycle") {
      s.efficiency.mode = EfficiencyModel::Mode::per_cycle;
    } else {
      fail(line, "unknown pcr mode '" + mode + "'");
    }
    s.efficiency.mean = parse_real(args.take_or("mean", "1.85"), "mean", line);
    s.efficiency.stddev =
        parse_real(args.take_or("stddev", "0"), "stddev", line);
  } else if (kind == "decay") {
    s.kind = StageConfig::Kind::decay;
    s.decay.half_lives =
        parse_real(args.take("half_lives"), "half_lives", line);
    std::string enzyme = args.take_or("enzyme", "proofreading");
    if (enzyme == "proofreading") {
      s.decay.enzyme = DecayParams::Enzyme::proofreading;
    } else if (enzyme == "non_proofreading") {
      s.decay.enzyme = DecayParams::Enzyme::non_proofreading;
    } else {
      fail(line, "unknown decay enzyme '" + enzyme + "'");
    }
    s.decay.deam_events_per_strand_per_halflife =
        parse_real(args.take_or("deam_rate", "0.05"), "deam_rate", line);
    s.decay.integerization_threshold =
        parse_real(args.take_or("threshold", "1e+06"), "threshold", line);
    s.decay.max_variants_per_entry =
        parse_int(args.take_or("max_variants", "64"), "max_variants", line);
  } else if (kind == "dilute") {
    s.kind = StageConfig::Kind::dilute;
    s.keep = parse_real(args.take("keep"), "keep", line);
    s.threshold =
        parse_real(args.take_or("threshold", "1e+06"), "threshold", line);
  } else if (kind == "interact") {
    s.kind = StageConfig::Kind::interact;
    s.steps = static_cast<int>(parse_int(args.take("steps"), "steps", line));
    s.keep = parse_real(args.take("keep"), "keep", line);
    s.amp = parse_real(args.take("amp"), "amp", line);
  } else {
    fail(line, "unknown stage kind '" + kind + "'");
  }
  args.finish(kind);
  return s;
}

void check_profile_rates(const std::string& section, const IdsRates& rates,
                         const ConditionalSubMatrix& matrix) {
  auto in01 = [&](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ConfigError(section + "." + name + " must be in [0,1]");
    }
  };
  in01(rates.p_sub, "p_sub");
  in01(rates.p_ins, "p_ins");
  in01(rates.p_del, "p_del");
  in01(rates.p_term, "p_term");
  for (int b = 0; b < 4; ++b) {
    double total = rates.p_del + 4.0 * rates.p_sub * matrix.row_mass(b) +
                   rates.p_ins + rates.p_term;
    if (total > 1.0) {
      throw ConfigError(section +
                        ": per-position event probabilities sum above 1");
    }
  }
}

void validate(const ChannelConfig& c) {
  if (c.reference.source == ReferenceConfig::Source::generate) {
    if (c.reference.count < 1) {
      throw ConfigError("reference.count must be >= 1");
    }
    if (c.reference.target_length < 1) {
      throw ConfigError("reference.target_length must be >= 1");
    }
    if (c.reference.homopolymer_limit < 1) {
      throw ConfigError("reference.homopolymer_limit must be >= 1");
    }
  } else if (c.reference.fasta_path.empty()) {
    throw ConfigError("reference.fasta is required when source = fasta");
  }

  if (c.synthesis.copy_fixed < 0) {
    throw ConfigError("synthesis.copy_fixed must be >= 0");
  }
  if (c.synthesis.copy_fixed == 0 &&
      (c.synthesis.copy_shape <= 0.0 || c.synthesis.copy_scale <= 0.0)) {
    throw ConfigError("synthesis.copy_shape and copy_scale must be > 0");
  }
  if (c.synthesis.max_variants_per_ref < 1) {
    throw ConfigError("synthesis.max_variants_per_ref must be >= 1");
  }
  check_profile_rates("synthesis", c.synthesis.rates, c.synthesis.sub_matrix);

  if (c.stages.empty()) {
    throw ConfigError(
        "at least one stage line is required (use 'stage = neutral' for a "
        "bare channel)");
  }
  for (const StageConfig& s : c.stages) {
    switch (s.kind) {
      case StageConfig::Kind::neutral:
        break;
      case StageConfig::Kind::pcr:
        if (s.cycles < 0) throw ConfigError("pcr cycles must be >= 0");
        if (!(s.efficiency.mean > 1.0 && s.efficiency.mean <= 2.0)) {
          throw ConfigError("pcr mean efficiency must be in (1,2]");
        }
        if (s.efficiency.stddev < 0.0) {
          throw ConfigError("pcr stddev must be >= 0");
        }
        break;
      case StageConfig::Kind::decay:
        if (s.decay.half_lives < 0.0) {
          throw ConfigError("decay half_lives must be >= 0");
        }
        if (s.decay.deam_events_per_strand_per_halflife < 0.0) {
          throw ConfigError("decay deam_rate must be >= 0");
        }
        if (s.decay.integerization_threshold <= 0.0) {
          throw ConfigError("decay threshold must be > 0");
        }
        if (s.decay.max_variants_per_entry < 1) {
          throw ConfigError("decay max_variants must be >= 1");
        }
        break;
      case StageConfig::Kind::dilute:
        if (!(s.keep > 0.0 && s.keep <= 1.0)) {
          throw ConfigError("dilute keep must be in (0,1]");
        }
        if (s.threshold <= 0.0) {
          throw ConfigError("dilute threshold must be > 0");
        }
        break;
      case StageConfig::Kind::interact:
        if (s.steps < 1) throw ConfigError("interact steps must be >= 1");
        if (!(s.keep > 0.0 && s.keep < 1.0)) {
          throw ConfigError("interact keep must be in (0,1)");
        }
        if (std::fabs(s.keep * s.amp - 1.0) > 1e-9) {
          throw ConfigError("interact requires keep * amp == 1");
        }
        break;
    }
  }

  if (c.sequencing.coverage < 0.0) {
    throw ConfigError("sequencing.coverage must be >= 0");
  }
  if (c.sequencing.read_len < 1) {
    throw ConfigError("sequencing.read_len must be >= 1");
  }
  check_profile_rates("sequencing", c.sequencing.profile.rates(),
                      c.sequencing.profile.sub_matrix);

  if (!(c.merge.max_mismatch_ratio >= 0.0 && c.merge.max_mismatch_ratio <= 1.0)) {
    throw ConfigError("merge.max_mismatch_ratio must be in [0,1]");
  }
  if ((c.merge.min_overlap == 0) != (c.merge.max_overlap == 0)) {
    throw ConfigError(
        "merge.min_overlap and merge.max_overlap must be set together (0/0 "
        "derives them from the target length)");
  }
  if (c.merge.min_overlap != 0 && c.merge.min_overlap > c.merge.max_overlap) {
    throw ConfigError("merge.min_overlap must be <= merge.max_overlap");
  }

  if (c.analysis.max_dist < 0) {
    throw ConfigError("analysis.max_dist must be >= 0");
  }
  if (c.analysis.index_k < 1 || c.analysis.index_k > 32) {
    throw ConfigError("analysis.index_k must be in [1,32]");
  }
  if (c.analysis.max_reading_pairs < 0) {
    throw ConfigError("analysis.max_reading_pairs must be >= 0");
  }
}

}  // namespace

ChannelConfig parse_config(const std::string& text) {
  ChannelConfig c;
  std::set<std::string> seen;
  bool saw_schema = false;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;

    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      fail(lineno, "expected 'key = value', got '" + line + "'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(lineno, "missing key before '='");

    if (key == "stage") {
      c.stages.push_back(parse_stage(value, lineno));
      continue;
    }
    if (!seen.insert(key).second) fail(lineno, "duplicate key '" + key + "'");

    if (key == "schema") {
      if (parse_int(value, key, lineno) != 1) {
        fail(lineno, "unsupported schema version '" + value + "'");
      }
      saw_schema = true;
    } else if (key == "reference.source") {
      if (value == "generate") {
        c.reference.source = ReferenceConfig::Source::generate;
      } else if (value == "fasta") {
        c.reference.source = ReferenceConfig::Source::fasta;
      } else {
        fail(lineno, "reference.source must be 'generate' or 'fasta'");
      }
    } else if (key == "reference.fasta") {
      c.reference.fasta_path = value;
    } else if (key == "reference.count") {
      c.reference.count = parse_size(value, key, lineno);
    } else if (key == "reference.target_length") {
      c.reference.target_length = parse_size(value, key, lineno);
    } else if (key == "reference.homopolymer_limit") {
      c.reference.homopolymer_limit = parse_size(value, key, lineno);
    } else if (key == "synthesis.copy_shape") {
      c.synthesis.copy_shape = parse_real(value, key, lineno);
    } else if (key == "synthesis.copy_scale") {
      c.synthesis.copy_scale = parse_real(value, key, lineno);
    } else if (key == "synthesis.copy_fixed") {
      c.synthesis.copy_fixed = parse_int(value, key, lineno);
    } else if (key == "synthesis.p_sub") {
      c.synthesis.rates.p_sub = parse_real(value, key, lineno);
    } else if (key == "synthesis.p_ins") {
      c.synthesis.rates.p_ins = parse_real(value, key, lineno);
    } else if (key == "synthesis.p_del") {
      c.synthesis.rates.p_del = parse_real(value, key, lineno);
    } else if (key == "synthesis.p_term") {
      c.synthesis.rates.p_term = parse_real(value, key, lineno);
    } else if (key == "synthesis.sub_matrix") {
      c.synthesis_matrix = value;
      c.synthesis.sub_matrix = matrix_by_name(value, lineno);
    } else if (key == "synthesis.max_variants_per_ref") {
      c.synthesis.max_variants_per_ref = parse_int(value, key, lineno);
    } else if (key == "sequencing.coverage") {
      c.sequencing.coverage = parse_real(value, key, lineno);
    } else if (key == "sequencing.read_len") {
      c.sequencing.read_len = parse_size(value, key, lineno);
    } else if (key == "sequencing.p_sub") {
      c.sequencing.profile.p_sub = parse_real(value, key, lineno);
    } else if (key == "sequencing.p_ins") {
      c.sequencing.profile.p_ins = parse_real(value, key, lineno);
    } else if (key == "sequencing.p_del") {
      c.sequencing.profile.p_del = parse_real(value, key, lineno);
    } else if (key == "sequencing.sub_matrix") {
      c.sequencing_matrix = value;
      c.sequencing.profile.sub_matrix = matrix_by_name(value, lineno);
    } else if (key == "merge.min_overlap") {
      c.merge.min_overlap = parse_size(value, key, lineno);
    } else if (key == "merge.max_overlap") {
      c.merge.max_overlap = parse_size(value, key, lineno);
    } else if (key == "merge.max_mismatch_ratio") {
      c.merge.max_mismatch_ratio = parse_real(value, key, lineno);
    } else if (key == "merge.conflict_policy") {
      if (value == "random") {
        c.merge.conflict_policy = MergeParams::ConflictPolicy::random;
      } else if (value == "fail") {
        c.merge.conflict_policy = MergeParams::ConflictPolicy::fail;
      } else {
        fail(lineno, "merge.conflict_policy must be 'random' or 'fail'");
      }
    } else if (key == "analysis.pipeline") {
      if (value == "full") {
        c.analysis.pipeline = AnalysisConfig::Pipeline::full;
      } else if (value == "counts") {
        c.analysis.pipeline = AnalysisConfig::Pipeline::counts;
      } else {
        fail(lineno, "analysis.pipeline must be 'full' or 'counts'");
      }
    } else if (key == "analysis.max_dist") {
      c.analysis.max_dist = parse_int(value, key, lineno);
    } else if (key == "analysis.index_k") {
      c.analysis.index_k =
          static_cast<int>(parse_int(value, key, lineno));
    } else if (key == "analysis.max_reading_pairs") {
      c.analysis.max_reading_pairs = parse_int(value, key, lineno);
    } else if (key == "master_seed") {
      c.master_seed = parse_u64(value, key, lineno);
    } else {
      fail(lineno, "unknown key '" + key + "'");
    }
  }

  if (!saw_schema) throw ConfigError("missing 'schema = 1' line");
  if (c.reference.source == ReferenceConfig::Source::generate &&
      seen.count("reference.fasta")) {
    throw ConfigError("reference.fasta requires reference.source = fasta");
  }
  if (c.reference.source == ReferenceConfig::Source::fasta &&
      (seen.count("reference.count") || seen.count("reference.target_length") ||
       seen.count("reference.homopolymer_limit"))) {
    throw ConfigError(
        "generator keys (reference.count/target_length/homopolymer_limit) "
        "conflict with reference.source = fasta");
  }
  validate(c);
  return c;
}

ChannelConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ChannelConfig& c) {
  std::ostringstream out;
  out << "schema = 1\n\n";

  if (c.reference.source == ReferenceConfig::Source::generate) {
    out << "reference.source = generate\n"
        << "reference.count = " << c.reference.count << '\n'
        << "reference.target_length = " << c.reference.target_length << '\n'
        << "reference.homopolymer_limit = " << c.reference.homopolymer_limit
        << '\n';
  } else {
    out << "reference.source = fasta\n"
        << "reference.fasta = " << c.reference.fasta_path << '\n';
  }
  out << '\n';

  out << "synthesis.copy_shape = " << fmt_real(c.synthesis.copy_shape) << '\n'
      << "synthesis.copy_scale = " << fmt_real(c.synthesis.copy_scale) << '\n'
      << "synthesis.copy_fixed = " << c.synthesis.copy_fixed << '\n'
      << "synthesis.p_sub = " << fmt_real(c.synthesis.rates.p_sub) << '\n'
      << "synthesis.p_ins = " << fmt_real(c.synthesis.rates.p_ins) << '\n'
      << "synthesis.p_del = " << fmt_real(c.synthesis.rates.p_del) << '\n'
      << "synthesis.p_term = " << fmt_real(c.synthesis.rates.p_term) << '\n'
      << "synthesis.sub_matrix = " << c.synthesis_matrix << '\n'
      << "synthesis.max_variants_per_ref = "
      << c.synthesis.max_variants_per_ref << '\n'
      << '\n';

  for (const StageConfig& s : c.stages) {
    switch (s.kind) {
      case StageConfig::Kind::neutral:
        out << "stage = neutral\n";
        break;
      case StageConfig::Kind::pcr:
        out << "stage = pcr cycles=" << s.cycles << " mode="
            << (s.efficiency.mode == EfficiencyModel::Mode::strand_specific
                    ? "strand_specific"
                    : "per_cycle")
            << " mean=" << fmt_real(s.efficiency.mean)
            << " stddev=" << fmt_real(s.efficiency.stddev) << '\n';
        break;
      case StageConfig::Kind::decay:
        out << "stage = decay half_lives=" << fmt_real(s.decay.half_lives)
            << " enzyme="
            << (s.decay.enzyme == DecayParams::Enzyme::proofreading
                    ? "proofreading"
                    : "non_proofreading")
            << " deam_rate="
            << fmt_real(s.decay.deam_events_per_strand_per_halflife)
            << " threshold=" << fmt_real(s.decay.integerization_threshold)
            << " max_variants=" << s.decay.max_variants_per_entry << '\n';
        break;
      case StageConfig::Kind::dilute:
        out << "stage = dilute keep=" << fmt_real(s.keep)
            << " threshold=" << fmt_real(s.threshold) << '\n';
        break;
      case StageConfig::Kind::interact:
        out << "stage = interact steps=" << s.steps
            << " keep=" << fmt_real(s.keep) << " amp=" << fmt_real(s.amp)
            << '\n';
        break;
    }
  }
  out << '\n';

  out << "sequencing.coverage = " << fmt_real(c.sequencing.coverage) << '\n'
      << "sequencing.read_len = " << c.sequencing.read_len << '\n'
      << "sequencing.p_sub = " << fmt_real(c.sequencing.profile.p_sub) << '\n'
      << "sequencing.p_ins = " << fmt_real(c.sequencing.profile.p_ins) << '\n'
      << "sequencing.p_del = " << fmt_real(c.sequencing.profile.p_del) << '\n'
      << "sequencing.sub_matrix = " << c.sequencing_matrix << '\n'
      << '\n';

  out << "merge.min_overlap = " << c.merge.min_overlap << '\n'
      << "merge.max_overlap = " << c.merge.max_overlap << '\n'
      << "merge.max_mismatch_ratio = " << fmt_real(c.merge.max_mismatch_ratio)
      << '\n'
      << "merge.conflict_policy = "
      << (c.merge.conflict_policy == MergeParams::ConflictPolicy::random
              ? "random"
              : "fail")
      << '\n'
      << '\n';

  out << "analysis.pipeline = "
      << (c.analysis.pipeline == AnalysisConfig::Pipeline::full ? "full"
                                                                : "counts")
      << '\n'
      << "analysis.max_dist = " << c.analysis.max_dist << '\n'
      << "analysis.index_k = " << c.analysis.index_k << '\n'
      << "analysis.max_reading_pairs = " << c.analysis.max_reading_pairs
      << '\n'
      << '\n';

  out << "master_seed = " << c.master_seed << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Presets.
//
// The fig7* and erlich-d* presets reproduce the computational occupancy
// experiments, and the table1-* presets encode the per-dataset parameters
// published in Table 1 of Heckel, Mikutis & Grass, "A Characterization of
// the DNA Data Storage Channel" (Scientific Reports, 2019): strands
// synthesized, target length, decay retained, physical redundancy, PCR
// cycles, and read coverage. Gamma copy scale = physical redundancy / 8
// (shape fixed at 8). Error rates marked "estimated" are back-derived from
// the study's Fig. 3: synthesis rate = overall rate minus the reading share
// (negative differences clamp to 0), with reading indels attributed to
// insertions vs deletions in proportion to the overall split; sequencing
// rates are the reading estimates themselves, indels split evenly.
// ---------------------------------------------------------------------------

namespace {

const char* kFig7Common = R"(schema = 1

reference.source = generate
reference.count = 20000
reference.target_length = 117
reference.homopolymer_limit = 3

synthesis.copy_fixed = 0
synthesis.copy_shape = 8
synthesis.copy_scale = 16
synthesis.p_sub = 0
synthesis.p_ins = 0
synthesis.p_del = 0
synthesis.p_term = 0
synthesis.sub_matrix = uniform

sequencing.coverage = 300
sequencing.read_len = 117
sequencing.p_sub = 0
sequencing.p_ins = 0
sequencing.p_del = 0
sequencing.sub_matrix = uniform

analysis.pipeline = counts

master_seed = 1
)";

std::string fig7_preset(const std::string& comment,
                        const std::string& stage_lines,
                        bool fixed_copies = false) {
  std::string text = comment + kFig7Common + stage_lines;
  if (fixed_copies) {
    // PR-100 uniform pool for the interaction experiments.
    std::size_t pos = text.find("synthesis.copy_fixed = 0");
    text.replace(pos, 24, "synthesis.copy_fixed = 100");
  }
  return text;
}

// keep factors, PCR cycles, and nominal physical redundancy of the seven
// dilution steps. Panels a-f descend by decades from PR 1.28e7; the last
// published step jumps to PR 1.28. Cycle counts are estimated as 40 plus
// ~3.3 cycles of extra PCR saturation per tenfold dilution.
const char* kErlichDKeep[7] = {"1",    "1e-01", "1e-02", "1e-03",
                               "1e-04", "1e-05", "1e-07"};
const int kErlichDCycles[7] = {40, 43, 47, 50, 53, 57, 63};
const char* kErlichDPr[7] = {"1.28e7", "1.28e6", "1.28e5", "1.28e4",
                             "1.28e3", "1.28e2", "1.28"};

std::string erlich_d_preset(int i) {
  std::ostringstream out;
  out << "# Dilution series step " << (i + 1) << ": nominal physical"
      << " redundancy " << kErlichDPr[i] << ".\n"
      << "# Occupancy-focused (counts pipeline, per-base errors disabled)."
      << " Coverage is fixed\n"
      << "# at 300; the source quotes the range 281-503 across the series."
      << " PCR cycles are\n"
      << "# estimated: 40 plus ~3.3 per tenfold dilution. The dilute"
      << " threshold is raised\n"
      << "# so thinning stays stochastic at these entry weights.\n"
      << "schema = 1\n\n"
      << "reference.source = generate\n"
      << "reference.count = 72000\n"
      << "reference.target_length = 152\n"
      << "reference.homopolymer_limit = 3\n\n"
      << "synthesis.copy_shape = 8\n"
      << "synthesis.copy_scale = 1.6e6\n"
      << "synthesis.p_sub = 0\n"
      << "synthesis.p_ins = 0\n"
      << "synthesis.p_del = 0\n"
      << "synthesis.p_term = 0\n"
      << "synthesis.sub_matrix = uniform\n\n"
      << "stage = dilute keep=" << kErlichDKeep[i] << " threshold=1e9\n"
      << "stage = pcr cycles=" << kErlichDCycles[i]
      << " mode=strand_specific mean=1.85 stddev=0.07\n\n"
      << "sequencing.coverage = 300\n"
      << "sequencing.read_len = 150\n"
      << "sequencing.p_sub = 0\n"
      << "sequencing.p_ins = 0\n"
      << "sequencing.p_del = 0\n"
      << "sequencing.sub_matrix = uniform\n\n"
      << "analysis.pipeline = counts\n\n"
      << "master_seed = 1\n";
  return out.str();
}

std::string preset_text(const std::string& name) {
  if (name == "fig7a") {
    return fig7_preset(
        "# Bare channel: Gamma(8,16) synthesis copies, no processing, "
        "coverage 300.\n",
        "stage = neutral\n");
  }
  if (name == "fig7b") {
    return fig7_preset(
        "# Strand-specific PCR bias, 22 cycles: each sequence keeps one "
        "efficiency\n# drawn from N(1.85, 0.07), clamped to [1,2].\n",
        "stage = pcr cycles=22 mode=strand_specific mean=1.85 stddev=0.07\n");
  }
  if (name == "fig7c") {
    return fig7_preset(
        "# Strand-specific PCR bias, 60 cycles.\n",
        "stage = pcr cycles=60 mode=strand_specific mean=1.85 stddev=0.07\n");
  }
  if (name == "fig7d") {
    return fig7_preset(
        "# Per-cycle PCR noise, 22 cycles: a fresh N(1.85, 0.25) efficiency "
        "every cycle.\n",
        "stage = pcr cycles=22 mode=per_cycle mean=1.85 stddev=0.25\n");
  }
  if (name == "fig7e") {
    return fig7_preset(
        "# Per-cycle PCR noise, 60 cycles.\n",
        "stage = pcr cycles=60 mode=per_cycle mean=1.85 stddev=0.25\n");
  }
  if (name == "fig7f") {
    return fig7_preset(
        "# Interaction experiment at physical redundancy 100: 5 rounds of "
        "1/10\n# dilution followed by bias-free x10 amplification.\n",
        "stage = interact steps=5 keep=0.1 amp=10\n", /*fixed_copies=*/true);
  }
  if (name == "fig7g") {
    return fig7_preset(
        "# Interaction experiment at physical redundancy 100, 10 rounds.\n",
        "stage = interact steps=10 keep=0.1 amp=10\n", /*fixed_copies=*/true);
  }
  if (name == "table1-goldman") {
    return R"(# Goldman dataset: 153335 strands of length 117, physical redundancy 22172
# (Gamma scale 22172/8), 22 strand-specific PCR cycles, coverage 519,
# single-read length 104.
# Error rates estimated from the published Fig. 3 characterization
# (overall minus reading share; sequencing = reading estimates).
schema = 1

reference.source = generate
reference.count = 153335
reference.target_length = 117
reference.homopolymer_limit = 3

synthesis.copy_shape = 8
synthesis.copy_scale = 2771.5
synthesis.p_sub = 0           # estimated
synthesis.p_ins = 0.00026379  # estimated
synthesis.p_del = 0.00511516  # estimated
synthesis.p_term = 0.0005     # estimated
synthesis.sub_matrix = uniform

stage = pcr cycles=22 mode=strand_specific mean=1.85 stddev=0.07

sequencing.coverage = 519
sequencing.read_len = 104
sequencing.p_sub = 0.00105509  # estimated
sequencing.p_ins = 0.00018152  # estimated
sequencing.p_del = 0.00018152  # estimated
sequencing.sub_matrix = uniform

analysis.pipeline = full

master_seed = 1
)";
  }
  if (name == "table1-erlich") {
    return R"(# Erlich dataset: 72000 strands of length 152, physical redundancy 1.28e7
# (Gamma scale 1.28e7/8), 10 strand-specific PCR cycles, coverage 281,
# single-read length 150.
# Error rates estimated from the published Fig. 3 characterization.
schema = 1

reference.source = generate
reference.count = 72000
reference.target_length = 152
reference.homopolymer_limit = 3

synthesis.copy_shape = 8
synthesis.copy_scale = 1.6e6
synthesis.p_sub = 0           # estimated
synthesis.p_ins = 0.00062276  # estimated
synthesis.p_del = 0.00056362  # estimated
synthesis.p_term = 0.0005     # estimated
synthesis.sub_matrix = uniform

stage = pcr cycles=10 mode=strand_specific mean=1.85 stddev=0.07

sequencing.coverage = 281
sequencing.read_len = 150
sequencing.p_sub = 0.00410491  # estimated
sequencing.p_ins = 0.00111194  # estimated
sequencing.p_del = 0.00111194  # estimated
sequencing.sub_matrix = uniform

analysis.pipeline = full

master_seed = 1
)";
  }
  if (name == "table1-highpr") {
    return R"(# High-physical-redundancy dataset: 4991 strands of length 117, PR 3.9e3
# (Gamma scale 3.9e3/8), 65 strand-specific PCR cycles, coverage 372,
# 2x150 reads. Substitutions follow the high-PR conditional matrix
# (C->T / G->A dominated).
# Error rates estimated from the published Fig. 3 characterization.
schema = 1

reference.source = generate
reference.count = 4991
reference.target_length = 117
reference.homopolymer_limit = 3

synthesis.copy_shape = 8
synthesis.copy_scale = 487.5
synthesis.p_sub = 0.00417082  # estimated
synthesis.p_ins = 0.0008129   # estimated
synthesis.p_del = 0.00924675  # estimated
synthesis.p_term = 0.0005     # estimated
synthesis.sub_matrix = high_pr

stage = pcr cycles=65 mode=strand_specific mean=1.85 stddev=0.07

sequencing.coverage = 372
sequencing.read_len = 150
sequencing.p_sub = 0.00138994  # estimated
sequencing.p_ins = 0.00033834  # estimated
sequencing.p_del = 0.00033834  # estimated
sequencing.sub_matrix = high_pr

analysis.pipeline = full

master_seed = 1
)";
  }
  if (name == "table1-highpr-4t") {
    return R"(# High-PR dataset aged 4 half-lives: synthesized at PR 3.9e4 (Gamma scale
# 3.9e4/8), decays to 6.25% retained, then 65 strand-specific PCR cycles,
# coverage 456. Read back without proofreading, so deamination shows up as
# C->T / G->A instead of strand loss.
# Error rates estimated from the published Fig. 3 characterization.
schema = 1

reference.source = generate
reference.count = 4991
reference.target_length = 117
reference.homopolymer_limit = 3

synthesis.copy_shape = 8
synthesis.copy_scale = 4875
synthesis.p_sub = 0.00417082  # estimated
synthesis.p_ins = 0.0008129   # estimated
synthesis.p_del = 0.00924675  # estimated
synthesis.p_term = 0.0005     # estimated
synthesis.sub_matrix = high_pr

stage = decay half_lives=4 enzyme=non_proofreading deam_rate=0.05
stage = pcr cycles=65 mode=strand_specific mean=1.85 stddev=0.07

sequencing.coverage = 456
sequencing.read_len = 150
sequencing.p_sub = 0.00138994  # estimated
sequencing.p_ins = 0.00033834  # estimated
sequencing.p_del = 0.00033834  # estimated
sequencing.sub_matrix = high_pr

analysis.pipeline = full

master_seed = 1
)";
  }
  if (name == "table1-lowpr") {
    return R"(# Low-physical-redundancy dataset: 4991 strands of length 117 at PR 1.0
# (Gamma scale 1/8), 68 strand-specific PCR cycles, coverage 461, 2x150
# reads.
# Error rates estimated from the published Fig. 3 characterization.
schema = 1

reference.source = generate
reference.count = 4991
reference.target_length = 117
reference.homopolymer_limit = 3

synthesis.copy_shape = 8
synthesis.copy_scale = 0.125
synthesis.p_sub = 0           # estimated
synthesis.p_ins = 0.00067978  # estimated
synthesis.p_del = 0.00704383  # estimated
synthesis.p_term = 0.0005     # estimated
synthesis.sub_matrix = high_pr

stage = pcr cycles=68 mode=strand_specific mean=1.85 stddev=0.07

sequencing.coverage = 461
sequencing.read_len = 150
sequencing.p_sub = 0.00469153  # estimated
sequencing.p_ins = 0.00150358  # estimated
sequencing.p_del = 0.00150358  # estimated
sequencing.sub_matrix = high_pr

analysis.pipeline = full

master_seed = 1
)";
  }
  if (name == "table1-lowpr-4t") {
    return R"(# Low-PR dataset aged 4 half-lives: synthesized at PR 17.9 (Gamma scale
# 17.9/8), decays to 5.75% retained (log2(100/5.75) ~ 4.1203 half-lives),
# then 68 strand-specific PCR cycles, coverage 396. Non-proofreading
# readout (deamination becomes C->T / G->A).
# Error rates estimated from the published Fig. 3 characterization.
schema = 1

reference.source = generate
reference.count = 4991
reference.target_length = 117
reference.homopolymer_limit = 3

synthesis.copy_shape = 8
synthesis.copy_scale = 2.2375
synthesis.p_sub = 0           # estimated
synthesis.p_ins = 0.00067978  # estimated
synthesis.p_del = 0.00704383  # estimated
synthesis.p_term = 0.0005     # estimated
synthesis.sub_matrix = high_pr

stage = decay half_lives=4.1203 enzyme=non_proofreading deam_rate=0.05
stage = pcr cycles=68 mode=strand_specific mean=1.85 stddev=0.07

sequencing.coverage = 396
sequencing.read_len = 150
sequencing.p_sub = 0.00469153  # estimated
sequencing.p_ins = 0.00150358  # estimated
sequencing.p_del = 0.00150358  # estimated
sequencing.sub_matrix = high_pr

analysis.pipeline = full

master_seed = 1
)";
  }
  if (name.size() == 9 && name.rfind("erlich-d", 0) == 0 &&
      name[8] >= '1' && name[8] <= '7') {
    return erlich_d_preset(name[8] - '1');
  }
  throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace

ChannelConfig preset_config(const std::string& name) {
  return parse_config(preset_text(name));
}

std::string preset_source(const std::string& name) { return preset_text(name); }

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "fig7a",          "fig7b",
      "fig7c",          "fig7d",
      "fig7e",          "fig7f",
      "fig7g",          "table1-goldman",
      "table1-erlich",  "table1-highpr",
      "table1-highpr-4t", "table1-lowpr",
      "table1-lowpr-4t", "erlich-d1",
      "erlich-d2",      "erlich-d3",
      "erlich-d4",      "erlich-d5",
      "erlich-d6",      "erlich-d7"};
  return names;
}

}  // namespace dnachannel
