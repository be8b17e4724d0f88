#include "dnachannel/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "dnachannel/align.hpp"
#include "dnachannel/errors.hpp"
#include "dnachannel/merge.hpp"
#include "dnachannel/parallel.hpp"
#include "dnachannel/process.hpp"
#include "dnachannel/synthesis.hpp"

namespace dnachannel {

namespace {

constexpr std::int64_t kBatch = 65536;

std::string iso_timestamp() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Integer accumulator for one worker chunk. Every field is an exact count,
// so merging across chunks in any order yields identical totals and the
// report cannot depend on the parallel schedule.
struct Accum {
  std::int64_t filtered = 0;
  std::int64_t merged = 0;
  std::int64_t no_overlap = 0;
  std::int64_t too_many_mismatches = 0;
  std::int64_t matched = 0;
  std::int64_t unmatched = 0;
  std::int64_t ambiguous = 0;
  // Strata: 0 = all, 1 = correct length, 2 = incorrect length.
  std::int64_t n[3] = {};
  std::int64_t subs[3] = {};
  std::int64_t ins[3] = {};
  std::int64_t dels[3] = {};
  SubMatrixCounts pair_counts;
  std::int64_t reading_sub = 0;
  std::int64_t reading_indel = 0;
  std::int64_t reading_len = 0;
  std::int64_t reading_pairs = 0;
  std::vector<std::int64_t> ref_hits;

  explicit Accum(std::size_t M) : ref_hits(M, 0) {}

  void merge_from(const Accum& o) {
    filtered += o.filtered;
    merged += o.merged;
    no_overlap += o.no_overlap;
    too_many_mismatches += o.too_many_mismatches;
    matched += o.matched;
    unmatched += o.unmatched;
    ambiguous += o.ambiguous;
    for (int s = 0; s < 3; ++s) {
      n[s] += o.n[s];
      subs[s] += o.subs[s];
      ins[s] += o.ins[s];
      dels[s] += o.dels[s];
    }
    pair_counts.merge(o.pair_counts);
    reading_sub += o.reading_sub;
    reading_indel += o.reading_indel;
    reading_len += o.reading_len;
    reading_pairs += o.reading_pairs;
    for (std::size_t i = 0; i < ref_hits.size(); ++i) {
      ref_hits[i] += o.ref_hits[i];
    }
  }
};

struct AnalysisCtx {
  const ReferenceSet* refs = nullptr;
  const RefIndex* index = nullptr;
  MergeParams merge_params;
  std::int64_t max_dist = 0;
  std::int64_t max_reading_pairs = 0;
  RngStream rng;  // identity root for per-pair substreams
  bool exact_length_filter = false;
  std::size_t read_len = 0;
};

void process_pair(const ReadPair& pair, std::int64_t g, const AnalysisCtx& ctx,
                  Accum& acc) {
  if (ctx.exact_length_filter && (pair.forward.size() != ctx.read_len ||
                                  pair.reverse.size() != ctx.read_len)) {
    ++acc.filtered;
    return;
  }

  RngStream merge_rng =
      ctx.rng.substream("merge", static_cast<std::uint64_t>(g));
  MergeResult mr =
      merge_pair(pair.forward, pair.reverse, ctx.merge_params, merge_rng);
  switch (mr.outcome) {
    case MergeResult::Outcome::NoOverlap:
      ++acc.no_overlap;
      return;
    case MergeResult::Outcome::TooManyMismatches:
      ++acc.too_many_mismatches;
      return;
    case MergeResult::Outcome::Merged:
      ++acc.merged;
      break;
  }

  // Two-sided reading estimate over the first max_reading_pairs successfully
  // merged pairs (gated on the global index so the subset is independent of
  // the parallel partition).
  if (g < ctx.max_reading_pairs) {
    OpCounts rops =
        semiglobal_ops(pair.forward, reverse_complement(pair.reverse));
    acc.reading_sub += rops.substitutions;
    acc.reading_indel += rops.insertions + rops.deletions;
    acc.reading_len += static_cast<std::int64_t>(pair.forward.size()) +
                       static_cast<std::int64_t>(pair.reverse.size());
    ++acc.reading_pairs;
  }

  std::optional<MatchResult> m =
      match_reference(mr.merged, *ctx.index, ctx.max_dist);
  if (!m) {
    ++acc.unmatched;
    return;
  }
  ++acc.matched;
  if (m->ambiguous) ++acc.ambiguous;
  const int stratum = m->correct_length ? 1 : 2;
  for (int s : {0, stratum}) {
    ++acc.n[s];
    acc.subs[s] += m->ops.substitutions;
    acc.ins[s] += m->ops.insertions;
    acc.dels[s] += m->ops.deletions;
  }
  ++acc.ref_hits[static_cast<std::size_t>(m->reference_id)];
  if (!m->ambiguous && m->ops.substitutions > 0) {
    // Re-walk with pair capture; the canonical path is the same one that
    // produced m->ops.
    edit_ops_with_pairs(
        ctx.refs->sequences[static_cast<std::size_t>(m->reference_id)],
        mr.merged, acc.pair_counts.counts);
  }
}

void fill_from_accums(Report& rep, std::vector<Accum>& accums,
                      std::size_t reference_length) {
  Accum total(accums.empty() ? 0 : accums[0].ref_hits.size());
  for (const Accum& a : accums) total.merge_from(a);

  rep.filtered_pairs = total.filtered;
  rep.has_merge = true;
  rep.merged = total.merged;
  rep.no_overlap = total.no_overlap;
  rep.too_many_mismatches = total.too_many_mismatches;
  rep.has_match = true;
  rep.matched = total.matched;
  rep.unmatched = total.unmatched;
  rep.ambiguous = total.ambiguous;

  const Stratum strata[3] = {Stratum::all, Stratum::correct_length,
                             Stratum::incorrect_length};
  Report::RatesSection* sections[3] = {&rep.rates_all, &rep.rates_correct,
                                       &rep.rates_incorrect};
  for (int s = 0; s < 3; ++s) {
    if (total.n[s] == 0) continue;
    const double denom =
        static_cast<double>(total.n[s]) *
        static_cast<double>(reference_length);
    sections[s]->present = true;
    sections[s]->rates.p_sub = static_cast<double>(total.subs[s]) / denom;
    sections[s]->rates.p_ins = static_cast<double>(total.ins[s]) / denom;
    sections[s]->rates.p_del = static_cast<double>(total.dels[s]) / denom;
    sections[s]->rates.n_reads = total.n[s];
    sections[s]->rates.stratum = strata[s];
  }

  if (total.pair_counts.total() > 0) {
    ConditionalSubMatrix m = total.pair_counts.normalize();
    rep.has_sub_matrix = true;
    rep.sub_matrix_events = total.pair_counts.total();
    for (int from = 0; from < 4; ++from) {
      for (int to = 0; to < 4; ++to) rep.sub_matrix[from][to] = m.p(from, to);
    }
  }

  if (total.reading_pairs > 0) {
    rep.has_reading = true;
    rep.reading.sub_rate = static_cast<double>(total.reading_sub) /
                           static_cast<double>(total.reading_len);
    rep.reading.indel_rate = static_cast<double>(total.reading_indel) /
                             static_cast<double>(total.reading_len);
    rep.reading.n_pairs = total.reading_pairs;
  }

  rep.has_histogram = true;
  rep.histogram = coverage_histogram(total.ref_hits);
  try {
    rep.negbin = fit_neg_binomial(rep.histogram);
    rep.has_negbin = true;
  } catch (const Underdispersed& e) {
    rep.negbin_skip_reason = e.what();
  } catch (const PrecondViolation& e) {
    rep.negbin_skip_reason = e.what();
  }
}

void fill_counts_histogram(Report& rep, const std::vector<std::int64_t>& truth) {
  rep.has_histogram = true;
  rep.histogram = coverage_histogram(truth);
  try {
    rep.negbin = fit_neg_binomial(rep.histogram);
    rep.has_negbin = true;
  } catch (const Underdispersed& e) {
    rep.negbin_skip_reason = e.what();
  } catch (const PrecondViolation& e) {
    rep.negbin_skip_reason = e.what();
  }
}

void append_fastq_record(std::string& buf, std::int64_t id, int mate,
                         const Sequence& seq) {
  buf += "@read_";
  buf += std::to_string(id);
  buf += '/';
  buf += static_cast<char>('0' + mate);
  buf += '\n';
  buf += seq;
  buf += "\n+\n";
  buf.append(seq.size(), 'I');
  buf += '\n';
}

}  // namespace

Pool build_final_pool(const ReferenceSet& refs, const ChannelConfig& config,
                      const RngStream& rng, int threads) {
  Pool pool = synthesize_pool(refs, config.synthesis,
                              rng.substream("synthesis"), threads);
  for (std::size_t i = 0; i < config.stages.size(); ++i) {
    const StageConfig& s = config.stages[i];
    RngStream stage_rng = rng.substream("stage", i);
    switch (s.kind) {
      case StageConfig::Kind::neutral:
        break;
      case StageConfig::Kind::pcr:
        pool = pcr(pool, s.cycles, s.efficiency, stage_rng, threads);
        break;
      case StageConfig::Kind::decay:
        pool = decay(pool, s.decay, stage_rng, threads);
        break;
      case StageConfig::Kind::dilute:
        pool = dilute(pool, s.keep, stage_rng, s.threshold, threads);
        break;
      case StageConfig::Kind::interact:
        pool = interact(pool, s.steps, s.keep, s.amp, stage_rng, threads);
        break;
    }
  }
  return pool;
}

ReadSet run_channel(const ReferenceSet& refs, const ChannelConfig& config,
                    const RngStream& rng, int threads) {
  Pool pool = build_final_pool(refs, config, rng, threads);
  const std::int64_t n_templates = std::llround(
      config.sequencing.coverage * static_cast<double>(refs.size()) / 2.0);
  if (n_templates <= 0) return {};

  RngStream template_rng = rng.substream("templates");
  std::vector<std::int64_t> counts =
      draw_template_counts(pool, n_templates, template_rng);

  // Expand to per-draw template views in pool order: global draw index g is
  // the read-stream id shared with the streaming pipeline.
  std::vector<const PoolEntry*> draws;
  draws.reserve(static_cast<std::size_t>(n_templates));
  for (std::size_t i = 0; i < counts.size(); ++i) {
    for (std::int64_t c = 0; c < counts[i]; ++c) {
      draws.push_back(&pool.entries()[i]);
    }
  }

  ReadSet reads(draws.size());
  parallel_chunks(
      draws.size(), static_cast<std::size_t>(std::max(1, threads)), threads,
      [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t g = begin; g < end; ++g) {
          RngStream pair_rng = rng.substream("read", g);
          reads[g] = sequence_pair(draws[g]->seq, config.sequencing.profile,
                                   config.sequencing.read_len, pair_rng);
          reads[g].template_origin = draws[g]->origin;
        }
      });
  return reads;
}

namespace {

void run_full_pipeline(Report& rep, const ReferenceSet& refs, const Pool& pool,
                       const std::vector<std::int64_t>& counts,
                       const ChannelConfig& config, const RunOptions& opts,
                       const RngStream& rng, int threads) {
  MergeParams merge_params = config.merge;
  merge_params.target_length = refs.target_length;

  RefIndex index = build_ref_index(refs, config.analysis.index_k);

  AnalysisCtx ctx;
  ctx.refs = &refs;
  ctx.index = &index;
  ctx.merge_params = merge_params;
  ctx.max_dist = config.analysis.max_dist > 0
                     ? config.analysis.max_dist
                     : default_max_dist(refs.target_length);
  ctx.max_reading_pairs = config.analysis.max_reading_pairs;
  ctx.rng = rng;
  ctx.exact_length_filter = opts.exact_length_filter;
  ctx.read_len = config.sequencing.read_len;

  const bool emit =
      opts.emit_fastq && !opts.out_dir.empty();
  std::ofstream fq1, fq2;
  if (emit) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(opts.out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + opts.out_dir);
    fq1.open(fs::path(opts.out_dir) / "reads_1.fastq");
    fq2.open(fs::path(opts.out_dir) / "reads_2.fastq");
    if (!fq1 || !fq2) {
      throw IoError("cannot open FASTQ outputs in " + opts.out_dir);
    }
  }

  const std::size_t chunks = static_cast<std::size_t>(std::max(1, threads));
  std::vector<Accum> accums(chunks, Accum(refs.size()));

  // Walk the multinomial counts in pool order, kBatch draws at a time.
  std::size_t entry = 0;
  std::int64_t left_in_entry = counts.empty() ? 0 : counts[0];
  std::int64_t g0 = 0;
  const std::int64_t total_draws = rep.n_template_draws;
  std::vector<const Sequence*> templ;
  std::vector<std::string> buf1(chunks), buf2(chunks);

  while (g0 < total_draws) {
    const std::int64_t bn = std::min<std::int64_t>(kBatch, total_draws - g0);
    templ.clear();
    templ.reserve(static_cast<std::size_t>(bn));
    while (templ.size() < static_cast<std::size_t>(bn)) {
      while (left_in_entry == 0) {
        ++entry;
        left_in_entry = counts[entry];
      }
      templ.push_back(&pool.entries()[entry].seq);
      --left_in_entry;
    }

    for (std::string& b : buf1) b.clear();
    for (std::string& b : buf2) b.clear();

    parallel_chunks(
        static_cast<std::size_t>(bn), chunks, threads,
        [&](std::size_t c, std::size_t begin, std::size_t end) {
          for (std::size_t j = begin; j < end; ++j) {
            const std::int64_t g = g0 + static_cast<std::int64_t>(j);
            RngStream pair_rng =
                rng.substream("read", static_cast<std::uint64_t>(g));
            ReadPair pair = sequence_pair(*templ[j], config.sequencing.profile,
                                          config.sequencing.read_len,
                                          pair_rng);
            if (emit) {
              append_fastq_record(buf1[c], g, 1, pair.forward);
              append_fastq_record(buf2[c], g, 2, pair.reverse);
            }
            process_pair(pair, g, ctx, accums[c]);
          }
        });

    if (emit) {
      // Chunks are contiguous index ranges, so chunk order is read order.
      for (std::size_t c = 0; c < chunks; ++c) {
        fq1 << buf1[c];
        fq2 << buf2[c];
      }
    }
    g0 += bn;
  }

  if (emit && (!fq1 || !fq2)) {
    throw IoError("FASTQ write failed in " + opts.out_dir);
  }

  fill_from_accums(rep, accums, refs.target_length);
  rep.n_pairs = total_draws - rep.filtered_pairs;
}

}  // namespace

Report run(const ChannelConfig& base_config, const RunOptions& opts) {
  const auto t_start = std::chrono::steady_clock::now();

  ChannelConfig config = base_config;
  if (opts.seed_override) config.master_seed = *opts.seed_override;
  const int threads = std::max(1, opts.threads);

  RngStream rng(config.master_seed, 0);

  ReferenceSet refs;
  if (config.reference.source == ReferenceConfig::Source::fasta) {
    refs = parse_fasta(config.reference.fasta_path);
  } else {
    RngStream ref_rng = rng.substream("refs");
    refs = generate_references(config.reference.count,
                               config.reference.target_length,
                               config.reference.homopolymer_limit, ref_rng);
  }

  if (opts.emit_fastq && !opts.out_dir.empty()) {
    // Persist the references next to the reads so the analyze verb can close
    // the loop even when the references were generated on the fly.
    std::error_code ec;
    std::filesystem::create_directories(opts.out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + opts.out_dir);
    write_fasta(
        (std::filesystem::path(opts.out_dir) / "references.fasta").string(),
        refs);
  }

  Report rep;
  rep.config_echo = serialize_config(config);
  rep.n_references = static_cast<std::int64_t>(refs.size());
  rep.threads = threads;

  Pool pool = synthesize_pool(refs, config.synthesis,
                              rng.substream("synthesis"), threads);
  rep.physical_redundancy = pool.physical_redundancy(refs.size());
  for (std::size_t i = 0; i < config.stages.size(); ++i) {
    const StageConfig& s = config.stages[i];
    RngStream stage_rng = rng.substream("stage", i);
    switch (s.kind) {
      case StageConfig::Kind::neutral:
        break;
      case StageConfig::Kind::pcr:
        pool = pcr(pool, s.cycles, s.efficiency, stage_rng, threads);
        break;
      case StageConfig::Kind::decay:
        pool = decay(pool, s.decay, stage_rng, threads);
        break;
      case StageConfig::Kind::dilute:
        pool = dilute(pool, s.keep, stage_rng, s.threshold, threads);
        break;
      case StageConfig::Kind::interact:
        pool = interact(pool, s.steps, s.keep, s.amp, stage_rng, threads);
        break;
    }
  }
  rep.final_redundancy = pool.physical_redundancy(refs.size());
  rep.pool_entries = static_cast<std::int64_t>(pool.size());

  const std::int64_t n_templates = std::llround(
      config.sequencing.coverage * static_cast<double>(refs.size()) / 2.0);
  rep.n_template_draws = n_templates;

  std::vector<std::int64_t> counts(pool.size(), 0);
  if (n_templates > 0) {
    RngStream template_rng = rng.substream("templates");
    counts = draw_template_counts(pool, n_templates, template_rng);
  }

  if (config.analysis.pipeline == AnalysisConfig::Pipeline::counts) {
    // Occupancy only: template draws per reference are exactly the
    // per-reference paired observations (per-base errors never change which
    // template was drawn), so reads need not be materialized.
    std::vector<std::int64_t> truth(refs.size(), 0);
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const std::int32_t origin = pool.entries()[i].origin;
      if (origin >= 0) truth[static_cast<std::size_t>(origin)] += counts[i];
    }
    fill_counts_histogram(rep, truth);
    rep.n_pairs = 0;
  } else {
    run_full_pipeline(rep, refs, pool, counts, config, opts, rng, threads);
  }

  rep.timestamp = iso_timestamp();
  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();

  if (!opts.out_dir.empty()) write_report(rep, opts.out_dir);
  return rep;
}

Report analyze_reads(const ReferenceSet& refs, const ReadSet& pairs,
                     std::int64_t invalid_pairs, MergeParams merge_params,
                     const AnalysisConfig& analysis, std::uint64_t seed,
                     int threads) {
  const auto t_start = std::chrono::steady_clock::now();
  threads = std::max(1, threads);

  merge_params.target_length = refs.target_length;
  RefIndex index = build_ref_index(refs, analysis.index_k);

  AnalysisCtx ctx;
  ctx.refs = &refs;
  ctx.index = &index;
  ctx.merge_params = merge_params;
  ctx.max_dist = analysis.max_dist > 0 ? analysis.max_dist
                                       : default_max_dist(refs.target_length);
  ctx.max_reading_pairs = analysis.max_reading_pairs;
  ctx.rng = RngStream(seed, 0);
  ctx.exact_length_filter = false;

  Report rep;
  rep.n_references = static_cast<std::int64_t>(refs.size());
  rep.threads = threads;
  rep.n_pairs = static_cast<std::int64_t>(pairs.size());
  rep.invalid_pairs = invalid_pairs;

  const std::size_t chunks = static_cast<std::size_t>(threads);
  std::vector<Accum> accums(chunks, Accum(refs.size()));
  parallel_chunks(pairs.size(), chunks, threads,
                  [&](std::size_t c, std::size_t begin, std::size_t end) {
                    for (std::size_t g = begin; g < end; ++g) {
                      process_pair(pairs[g], static_cast<std::int64_t>(g), ctx,
                                   accums[c]);
                    }
                  });

  fill_from_accums(rep, accums, refs.target_length);
  rep.timestamp = iso_timestamp();
  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return rep;
}

}  // namespace dnachannel
