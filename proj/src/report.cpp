#include "dnachannel/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dnachannel/errors.hpp"
#include "dnachannel/sequence.hpp"

namespace dnachannel {

namespace {

using json = nlohmann::json;

json rates_section(const Report::RatesSection& section) {
  if (!section.present) return json{{"skipped", "empty stratum"}};
  return json{{"p_sub", section.rates.p_sub},
              {"p_ins", section.rates.p_ins},
              {"p_del", section.rates.p_del},
              {"n_reads", section.rates.n_reads}};
}

json build_json(const Report& r) {
  json doc;

  doc["config"] = r.config_echo;

  json channel;
  channel["n_references"] = r.n_references;
  channel["physical_redundancy"] = r.physical_redundancy;
  channel["final_redundancy"] = r.final_redundancy;
  channel["pool_entries"] = r.pool_entries;
  channel["template_draws"] = r.n_template_draws;
  channel["pairs_analyzed"] = r.n_pairs;
  channel["pairs_filtered_length"] = r.filtered_pairs;
  channel["pairs_invalid"] = r.invalid_pairs;
  doc["channel"] = channel;

  if (r.has_merge) {
    doc["merge"] = json{{"merged", r.merged},
                        {"no_overlap", r.no_overlap},
                        {"too_many_mismatches", r.too_many_mismatches}};
  } else {
    doc["merge"] = json{{"skipped", "counts pipeline"}};
  }

  if (r.has_match) {
    doc["match"] = json{{"matched", r.matched},
                        {"unmatched", r.unmatched},
                        {"ambiguous", r.ambiguous}};
  } else {
    doc["match"] = json{{"skipped", "counts pipeline"}};
  }

  doc["error_rates"] = json{{"all", rates_section(r.rates_all)},
                            {"correct_length", rates_section(r.rates_correct)},
                            {"incorrect_length",
                             rates_section(r.rates_incorrect)}};

  if (r.has_sub_matrix) {
    json m;
    for (int from = 0; from < 4; ++from) {
      for (int to = 0; to < 4; ++to) {
        if (from == to) continue;
        std::string key{index_base(from)};
        key += "->";
        key += index_base(to);
        m[key] = r.sub_matrix[from][to];
      }
    }
    doc["sub_matrix"] =
        json{{"entries", m}, {"n_substitutions", r.sub_matrix_events}};
  } else {
    doc["sub_matrix"] = json{{"skipped", "no substitutions observed"}};
  }

  if (r.has_reading) {
    doc["reading"] = json{{"sub_rate", r.reading.sub_rate},
                          {"indel_rate", r.reading.indel_rate},
                          {"n_pairs", r.reading.n_pairs}};
  } else {
    doc["reading"] = json{{"skipped", "no two-sided pairs"}};
  }

  json coverage;
  if (r.has_histogram) {
    json hist;
    for (const auto& [reads, n] : r.histogram.counts) {
      hist[std::to_string(reads)] = n;
    }
    coverage["histogram"] = hist;
    coverage["n_references"] = r.histogram.M;
    coverage["unseen_fraction"] = r.histogram.unseen_fraction;
    if (r.has_negbin) {
      coverage["neg_bin"] = json{{"r", r.negbin.r},
                                 {"p", r.negbin.p},
                                 {"sample_mean", r.negbin.sample_mean},
                                 {"sample_variance", r.negbin.sample_variance}};
    } else {
      coverage["neg_bin"] = json{{"skipped", r.negbin_skip_reason}};
    }
  } else {
    coverage["skipped"] = "no coverage data";
  }
  doc["coverage"] = coverage;

  doc["meta"] = json{{"timestamp", r.timestamp},
                     {"runtime_seconds", r.runtime_seconds},
                     {"threads", r.threads}};
  return doc;
}

}  // namespace

std::string report_json(const Report& report) {
  return build_json(report).dump(2) + "\n";
}

std::string report_canonical_json(const Report& report) {
  json doc = build_json(report);
  doc.erase("meta");
  return doc.dump(2) + "\n";
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open file for writing: " + path.string());
  return out;
}

}  // namespace

void write_report(const Report& r, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory: " + dir);

  open_out(fs::path(dir) / "report.json") << report_json(r);

  {
    auto out = open_out(fs::path(dir) / "error_rates.csv");
    out << "stratum,p_sub,p_ins,p_del,n_reads\n";
    auto row = [&](const char* name, const Report::RatesSection& s) {
      if (!s.present) return;
      out << name << ',' << s.rates.p_sub << ',' << s.rates.p_ins << ','
          << s.rates.p_del << ',' << s.rates.n_reads << '\n';
    };
    row("all", r.rates_all);
    row("correct_length", r.rates_correct);
    row("incorrect_length", r.rates_incorrect);
  }

  if (r.has_sub_matrix) {
    auto out = open_out(fs::path(dir) / "sub_matrix.csv");
    out << "from,to,probability\n";
    for (int from = 0; from < 4; ++from) {
      for (int to = 0; to < 4; ++to) {
        if (from == to) continue;
        out << index_base(from) << ',' << index_base(to) << ','
            << r.sub_matrix[from][to] << '\n';
      }
    }
  }

  if (r.has_merge) {
    auto out = open_out(fs::path(dir) / "merge_stats.csv");
    out << "outcome,count\n"
        << "merged," << r.merged << '\n'
        << "no_overlap," << r.no_overlap << '\n'
        << "too_many_mismatches," << r.too_many_mismatches << '\n';
  }

  if (r.has_histogram) {
    {
      auto out = open_out(fs::path(dir) / "coverage_hist.csv");
      out << "reads,n_references\n";
      for (const auto& [reads, n] : r.histogram.counts) {
        out << reads << ',' << n << '\n';
      }
    }
    {
      auto out = open_out(fs::path(dir) / "coverage_hist.txt");
      for (const auto& [reads, n] : r.histogram.counts) {
        out << reads << ' ' << n << '\n';
      }
    }
  }
}

std::string report_summary(const Report& r) {
  std::ostringstream out;
  out << r.n_references << " references";
  if (r.physical_redundancy > 0.0) {
    out << ", physical redundancy " << r.physical_redundancy << " -> "
        << r.final_redundancy << " at sequencing";
  }
  out << "\n" << r.n_template_draws << " template draws";
  if (r.has_merge) {
    out << "; " << r.n_pairs << " pairs (" << r.merged << " merged, "
        << r.no_overlap << " no-overlap, " << r.too_many_mismatches
        << " mismatch-rejected)";
  }
  out << "\n";
  if (r.has_match) {
    out << "matched " << r.matched << " (" << r.ambiguous << " ambiguous), "
        << r.unmatched << " unmatched\n";
  }
  if (r.rates_all.present) {
    out << "error rates (all): sub " << r.rates_all.rates.p_sub << ", ins "
        << r.rates_all.rates.p_ins << ", del " << r.rates_all.rates.p_del
        << "\n";
  }
  if (r.has_histogram) {
    out << "unseen fraction: " << r.histogram.unseen_fraction;
    if (r.has_negbin) {
      out << " (neg-bin r=" << r.negbin.r << ", p=" << r.negbin.p << ")";
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace dnachannel
