#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dnachannel/align.hpp"
#include "dnachannel/config.hpp"
#include "dnachannel/errors.hpp"
#include "dnachannel/io.hpp"
#include "dnachannel/merge.hpp"
#include "dnachannel/report.hpp"
#include "dnachannel/runner.hpp"
#include "dnachannel/stats.hpp"

namespace dc = dnachannel;

namespace {

// Exit codes: 0 success, 2 config error, 3 IO error, 4 runtime error.
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitRuntime = 4;

struct Options {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string out_dir;
  bool emit_fastq = false;
  bool exact_length_filter = false;

  std::string refs_path;
  std::string fwd_path;
  std::string rev_path;
  std::string reads_path;
  std::string in_path;
  std::size_t target_length = 0;
  std::int64_t max_dist = 0;
  std::string preset_name;  // `presets --name`
};

dc::ChannelConfig resolve_config(const Options& opt) {
  if (opt.config_path.empty() == opt.preset.empty()) {
    throw dc::ConfigError("exactly one of --config or --preset is required");
  }
  return opt.preset.empty() ? dc::load_config(opt.config_path)
                            : dc::preset_config(opt.preset);
}

int cmd_simulate(const Options& opt) {
  dc::ChannelConfig config = resolve_config(opt);
  dc::RunOptions run_opts;
  run_opts.seed_override = opt.seed;
  run_opts.threads = opt.threads;
  run_opts.out_dir = opt.out_dir;
  run_opts.emit_fastq = opt.emit_fastq;
  run_opts.exact_length_filter = opt.exact_length_filter;
  dc::Report report = dc::run(config, run_opts);
  std::cout << dc::report_summary(report);
  if (!opt.out_dir.empty()) {
    std::cout << "report written to " << opt.out_dir << "\n";
  }
  return 0;
}

int cmd_analyze(const Options& opt) {
  dc::ReferenceSet refs = dc::parse_fasta(opt.refs_path);
  dc::FastqParseResult input = dc::parse_fastq_pairs(opt.fwd_path, opt.rev_path);
  dc::AnalysisConfig analysis;
  analysis.max_dist = opt.max_dist;
  dc::Report report =
      dc::analyze_reads(refs, input.pairs, input.skipped, dc::MergeParams{},
                        analysis, opt.seed.value_or(1), opt.threads);
  std::cout << dc::report_summary(report);
  if (!opt.out_dir.empty()) {
    dc::write_report(report, opt.out_dir);
    std::cout << "report written to " << opt.out_dir << "\n";
  }
  return 0;
}

int cmd_merge(const Options& opt) {
  dc::FastqParseResult input = dc::parse_fastq_pairs(opt.fwd_path, opt.rev_path);
  dc::MergeParams params = dc::MergeParams::defaults(opt.target_length);
  dc::RngStream rng(opt.seed.value_or(1), 0);

  std::vector<dc::Sequence> merged;
  std::int64_t no_overlap = 0;
  std::int64_t too_many_mismatches = 0;
  for (std::size_t g = 0; g < input.pairs.size(); ++g) {
    dc::RngStream pair_rng = rng.substream("merge", g);
    dc::MergeResult r = dc::merge_pair(input.pairs[g].forward,
                                       input.pairs[g].reverse, params,
                                       pair_rng);
    switch (r.outcome) {
      case dc::MergeResult::Outcome::Merged:
        merged.push_back(std::move(r.merged));
        break;
      case dc::MergeResult::Outcome::NoOverlap:
        ++no_overlap;
        break;
      case dc::MergeResult::Outcome::TooManyMismatches:
        ++too_many_mismatches;
        break;
    }
  }
  std::cout << input.pairs.size() << " pairs: " << merged.size()
            << " merged, " << no_overlap << " no-overlap, "
            << too_many_mismatches << " mismatch-rejected, " << input.skipped
            << " invalid\n";
  if (!opt.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(opt.out_dir, ec);
    if (ec) throw dc::IoError("cannot create output directory: " + opt.out_dir);
    std::string path =
        (std::filesystem::path(opt.out_dir) / "merged.fasta").string();
    dc::write_fasta(path, merged, "merged");
    std::cout << "merged reads written to " << path << "\n";
  }
  return 0;
}

int cmd_match(const Options& opt) {
  dc::ReferenceSet refs = dc::parse_fasta(opt.refs_path);
  std::vector<dc::Sequence> reads = dc::parse_fasta_sequences(opt.reads_path);
  dc::RefIndex index = dc::build_ref_index(refs);
  const std::int64_t max_dist = opt.max_dist > 0
                                    ? opt.max_dist
                                    : dc::default_max_dist(refs.target_length);

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!opt.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(opt.out_dir, ec);
    if (ec) throw dc::IoError("cannot create output directory: " + opt.out_dir);
    file.open(std::filesystem::path(opt.out_dir) / "matches.csv");
    if (!file) throw dc::IoError("cannot open matches.csv in " + opt.out_dir);
    out = &file;
  }
  *out << "read_id,reference_id,distance,substitutions,insertions,deletions,"
          "correct_length,ambiguous\n";
  for (std::size_t i = 0; i < reads.size(); ++i) {
    auto m = dc::match_reference(reads[i], index, max_dist);
    if (m) {
      *out << i << ',' << m->reference_id << ',' << m->ops.distance << ','
           << m->ops.substitutions << ',' << m->ops.insertions << ','
           << m->ops.deletions << ',' << (m->correct_length ? 1 : 0) << ','
           << (m->ambiguous ? 1 : 0) << '\n';
    } else {
      *out << i << ",-1,,,,,,\n";
    }
  }
  if (!opt.out_dir.empty()) {
    std::cout << "matches written to " << opt.out_dir << "/matches.csv\n";
  }
  return 0;
}

// Re-emits the CSV/plain-text artifacts from an existing report.json.
int cmd_report(const Options& opt) {
  std::ifstream in(opt.in_path);
  if (!in) throw dc::IoError("cannot open report: " + opt.in_path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw dc::IoError("malformed report JSON: " + std::string(e.what()));
  }

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(opt.out_dir, ec);
  if (ec) throw dc::IoError("cannot create output directory: " + opt.out_dir);

  auto open_out = [&](const char* name) {
    std::ofstream out(fs::path(opt.out_dir) / name);
    if (!out) {
      throw dc::IoError(std::string("cannot open ") + name + " in " +
                        opt.out_dir);
    }
    return out;
  };

  if (doc.contains("error_rates")) {
    auto out = open_out("error_rates.csv");
    out << "stratum,p_sub,p_ins,p_del,n_reads\n";
    for (const char* stratum : {"all", "correct_length", "incorrect_length"}) {
      const auto& s = doc["error_rates"][stratum];
      if (s.contains("skipped")) continue;
      out << stratum << ',' << s["p_sub"].get<double>() << ','
          << s["p_ins"].get<double>() << ',' << s["p_del"].get<double>() << ','
          << s["n_reads"].get<std::int64_t>() << '\n';
    }
  }
  if (doc.contains("sub_matrix") && !doc["sub_matrix"].contains("skipped")) {
    auto out = open_out("sub_matrix.csv");
    out << "from,to,probability\n";
    for (const auto& [key, value] : doc["sub_matrix"]["entries"].items()) {
      // keys look like "A->C"
      out << key.front() << ',' << key.back() << ',' << value.get<double>()
          << '\n';
    }
  }
  if (doc.contains("merge") && !doc["merge"].contains("skipped")) {
    auto out = open_out("merge_stats.csv");
    out << "outcome,count\n"
        << "merged," << doc["merge"]["merged"].get<std::int64_t>() << '\n'
        << "no_overlap," << doc["merge"]["no_overlap"].get<std::int64_t>()
        << '\n'
        << "too_many_mismatches,"
        << doc["merge"]["too_many_mismatches"].get<std::int64_t>() << '\n';
  }
  if (doc.contains("coverage") && doc["coverage"].contains("histogram")) {
    std::map<std::int64_t, std::int64_t> hist;
    for (const auto& [key, value] : doc["coverage"]["histogram"].items()) {
      hist[std::stoll(key)] = value.get<std::int64_t>();
    }
    auto csv = open_out("coverage_hist.csv");
    csv << "reads,n_references\n";
    auto txt = open_out("coverage_hist.txt");
    for (const auto& [reads, n] : hist) {
      csv << reads << ',' << n << '\n';
      txt << reads << ' ' << n << '\n';
    }
  }
  std::cout << "artifacts written to " << opt.out_dir << "\n";
  return 0;
}

int cmd_presets(const Options& opt) {
  if (opt.preset_name.empty()) {
    for (const std::string& name : dc::preset_names()) {
      std::cout << name << "\n";
    }
    return 0;
  }
  std::cout << dc::preset_source(opt.preset_name);
  return 0;
}

void expect(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error("selftest failed: " + what);
}

int cmd_selftest(const Options& opt) {
  // Presets parse, validate, and round-trip.
  for (const std::string& name : dc::preset_names()) {
    dc::ChannelConfig c = dc::preset_config(name);
    std::string text = dc::serialize_config(c);
    expect(dc::parse_config(text) == c, "preset round trip: " + name);
    expect(dc::serialize_config(dc::parse_config(text)) == text,
           "preset serialization stability: " + name);
  }

  // Closed forms.
  expect(std::abs(dc::expected_unseen_fraction(1.0) - 0.36788) < 5e-6,
         "expected_unseen_fraction(1)");
  expect(std::abs(dc::proportion_ratio(1.8, 1.9, 60) - 0.0393) < 1e-3,
         "proportion_ratio(1.8, 1.9, 60)");

  // Small end-to-end channel, run at one and at several threads.
  const char* mini = R"(schema = 1
reference.source = generate
reference.count = 60
reference.target_length = 60
reference.homopolymer_limit = 3
synthesis.copy_fixed = 40
synthesis.p_del = 0.002
stage = pcr cycles=8 mode=strand_specific mean=1.85 stddev=0.07
sequencing.coverage = 40
sequencing.read_len = 54
sequencing.p_sub = 0.002
analysis.pipeline = full
master_seed = 7
)";
  dc::ChannelConfig config = dc::parse_config(mini);
  dc::RunOptions a;
  a.threads = 1;
  dc::RunOptions b;
  b.threads = opt.threads > 1 ? opt.threads : 4;
  dc::Report ra = dc::run(config, a);
  dc::Report rb = dc::run(config, b);
  expect(ra.merged > 0, "mini channel produced merged pairs");
  expect(ra.matched > 0, "mini channel produced matches");
  expect(dc::report_canonical_json(ra) == dc::report_canonical_json(rb),
         "thread-count determinism");

  std::cout << "selftest ok\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "dnachannel: DNA data-storage channel simulator and read-analysis "
      "toolkit"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* simulate =
      app.add_subcommand("simulate", "Run a configured channel end to end");
  simulate->add_option("--config", opt.config_path, "Config file path");
  simulate->add_option("--preset", opt.preset, "Built-in preset name");
  simulate->add_option("--seed", opt.seed, "Override the master seed");
  simulate->add_option("--threads", opt.threads, "Worker threads");
  simulate->add_option("--out", opt.out_dir, "Output directory for artifacts");
  simulate->add_flag("--emit-fastq", opt.emit_fastq,
                     "Write simulated reads as paired FASTQ");
  simulate->add_flag("--exact-length-filter", opt.exact_length_filter,
                     "Drop pairs whose reads are not exactly read_len long");

  CLI::App* analyze = app.add_subcommand(
      "analyze", "Merge, match, and characterize paired FASTQ reads");
  analyze->add_option("--refs", opt.refs_path, "Reference FASTA")->required();
  analyze->add_option("--fwd", opt.fwd_path, "Forward FASTQ")->required();
  analyze->add_option("--rev", opt.rev_path, "Reverse FASTQ")->required();
  analyze->add_option("--seed", opt.seed, "Seed for merge conflict coins");
  analyze->add_option("--threads", opt.threads, "Worker threads");
  analyze->add_option("--out", opt.out_dir, "Output directory for artifacts");
  analyze->add_option("--max-dist", opt.max_dist,
                      "Matching cutoff (default: 15% of target length)");

  CLI::App* merge =
      app.add_subcommand("merge", "Merge paired FASTQ reads into molecules");
  merge->add_option("--fwd", opt.fwd_path, "Forward FASTQ")->required();
  merge->add_option("--rev", opt.rev_path, "Reverse FASTQ")->required();
  merge->add_option("--target-length", opt.target_length,
                    "Designed molecule length")
      ->required();
  merge->add_option("--seed", opt.seed, "Seed for merge conflict coins");
  merge->add_option("--out", opt.out_dir, "Output directory for merged.fasta");

  CLI::App* match = app.add_subcommand(
      "match", "Match reads (FASTA) to their closest reference");
  match->add_option("--refs", opt.refs_path, "Reference FASTA")->required();
  match->add_option("--reads", opt.reads_path, "Reads FASTA")->required();
  match->add_option("--max-dist", opt.max_dist,
                    "Matching cutoff (default: 15% of target length)");
  match->add_option("--out", opt.out_dir, "Output directory for matches.csv");

  CLI::App* report = app.add_subcommand(
      "report", "Re-emit CSV/plain-text artifacts from a report.json");
  report->add_option("--in", opt.in_path, "report.json path")->required();
  report->add_option("--out", opt.out_dir, "Output directory")->required();

  CLI::App* presets =
      app.add_subcommand("presets", "List presets or print one");
  presets->add_option("--name", opt.preset_name,
                      "Print this preset's config text");

  CLI::App* selftest =
      app.add_subcommand("selftest", "Run quick internal consistency checks");
  selftest->add_option("--threads", opt.threads, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(opt);
    if (analyze->parsed()) return cmd_analyze(opt);
    if (merge->parsed()) return cmd_merge(opt);
    if (match->parsed()) return cmd_match(opt);
    if (report->parsed()) return cmd_report(opt);
    if (presets->parsed()) return cmd_presets(opt);
    if (selftest->parsed()) return cmd_selftest(opt);
  } catch (const dc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const dc::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
