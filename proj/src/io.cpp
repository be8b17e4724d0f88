#include "dnachannel/io.hpp"

#include <cctype>
#include <fstream>
#include <iostream>
#include <unordered_set>

#include "dnachannel/errors.hpp"
#include "dnachannel/sequence.hpp"

namespace dnachannel {

namespace {

std::string upper_copy(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return out;
}

// Strips a single trailing '\r' so CRLF files parse like LF files.
bool get_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace

namespace {

std::vector<Sequence> parse_fasta_impl(const std::string& path,
                                       bool warn_duplicates) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open FASTA file: " + path);

  std::vector<Sequence> records;
  std::string line;
  std::string current;
  std::string current_name;
  bool have_record = false;
  std::unordered_set<std::string> seen;

  auto flush = [&]() {
    if (!have_record) return;
    if (current.empty()) {
      throw IoError("empty FASTA record '" + current_name + "' in " + path);
    }
    Sequence seq =
        validate_sequence(current, "FASTA record '" + current_name + "'");
    if (warn_duplicates && !seen.insert(seq).second) {
      std::cerr << "warning: duplicate sequence in FASTA record '"
                << current_name << "' (" << path << ")\n";
    }
    records.push_back(std::move(seq));
    current.clear();
  };

  while (get_line(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '>') {
      flush();
      have_record = true;
      current_name = line.substr(1);
    } else {
      if (!have_record) {
        throw IoError("sequence data before first '>' header in " + path);
      }
      current += line;
    }
  }
  flush();

  if (records.empty()) {
    throw IoError("no FASTA records in " + path);
  }
  return records;
}

}  // namespace

ReferenceSet parse_fasta(const std::string& path) {
  ReferenceSet refs;
  refs.sequences = parse_fasta_impl(path, /*warn_duplicates=*/true);
  refs.target_length = refs.sequences.front().size();
  for (std::size_t i = 0; i < refs.sequences.size(); ++i) {
    if (refs.sequences[i].size() != refs.target_length) {
      throw IoError("FASTA record " + std::to_string(i) + " has length " +
                    std::to_string(refs.sequences[i].size()) +
                    " but earlier records have " +
                    std::to_string(refs.target_length) + " (" + path + ")");
    }
  }
  return refs;
}

std::vector<Sequence> parse_fasta_sequences(const std::string& path) {
  return parse_fasta_impl(path, /*warn_duplicates=*/false);
}

void write_fasta(const std::string& path, const ReferenceSet& refs) {
  write_fasta(path, refs.sequences, "ref");
}

void write_fasta(const std::string& path, const std::vector<Sequence>& seqs,
                 const std::string& name_prefix) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open file for writing: " + path);
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    out << '>' << name_prefix << '_' << i << '\n' << seqs[i] << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

namespace {

struct FastqRecord {
  std::string name;
  std::string seq;
  bool eof = false;
};

FastqRecord read_fastq_record(std::istream& in, const std::string& path,
                              std::int64_t index) {
  FastqRecord rec;
  std::string line;
  if (!get_line(in, line)) {
    rec.eof = true;
    return rec;
  }
  if (line.empty() || line[0] != '@') {
    throw IoError("malformed FASTQ record " + std::to_string(index) + " in " +
                  path + ": expected '@' header");
  }
  rec.name = line.substr(1);
  if (!get_line(in, rec.seq)) {
    throw IoError("truncated FASTQ record " + std::to_string(index) + " in " +
                  path);
  }
  if (!get_line(in, line) || line.empty() || line[0] != '+') {
    throw IoError("malformed FASTQ record " + std::to_string(index) + " in " +
                  path + ": expected '+' separator");
  }
  if (!get_line(in, line)) {  // quality line, carried but not interpreted
    throw IoError("truncated FASTQ record " + std::to_string(index) + " in " +
                  path);
  }
  if (line.size() != rec.seq.size()) {
    throw IoError("FASTQ record " + std::to_string(index) + " in " + path +
                  ": quality length differs from sequence length");
  }
  return rec;
}

}  // namespace

FastqParseResult parse_fastq_pairs(const std::string& path_fwd,
                                   const std::string& path_rev) {
  std::ifstream in_f(path_fwd);
  if (!in_f) throw IoError("cannot open FASTQ file: " + path_fwd);
  std::ifstream in_r(path_rev);
  if (!in_r) throw IoError("cannot open FASTQ file: " + path_rev);

  FastqParseResult result;
  std::int64_t n_fwd = 0;
  std::int64_t n_rev = 0;
  for (std::int64_t index = 0;; ++index) {
    FastqRecord f = read_fastq_record(in_f, path_fwd, index);
    FastqRecord r = read_fastq_record(in_r, path_rev, index);
    if (!f.eof) ++n_fwd;
    if (!r.eof) ++n_rev;
    if (f.eof && r.eof) break;
    if (f.eof != r.eof) {
      // Drain the longer file so the mismatch error reports true counts.
      std::istream& in = f.eof ? in_r : in_f;
      const std::string& path = f.eof ? path_rev : path_fwd;
      std::int64_t& n = f.eof ? n_rev : n_fwd;
      for (std::int64_t i = index + 1;; ++i) {
        FastqRecord rec = read_fastq_record(in, path, i);
        if (rec.eof) break;
        ++n;
      }
      throw RecordCountMismatch(n_fwd, n_rev);
    }
    Sequence fwd = upper_copy(f.seq);
    Sequence rev = upper_copy(r.seq);
    if (!is_valid_sequence(fwd) || !is_valid_sequence(rev)) {
      ++result.skipped;
      continue;
    }
    ReadPair pair;
    pair.forward = std::move(fwd);
    pair.reverse = std::move(rev);
    result.pairs.push_back(std::move(pair));
  }
  return result;
}

void write_fastq(const std::string& path, const std::vector<Sequence>& reads,
                 int mate, std::int64_t first_id) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open file for writing: " + path);
  for (std::size_t i = 0; i < reads.size(); ++i) {
    const Sequence& seq = reads[i];
    out << "@read_" << (first_id + static_cast<std::int64_t>(i)) << '/' << mate
        << '\n'
        << seq << '\n'
        << "+\n"
        << std::string(seq.size(), 'I') << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

ReferenceSet generate_references(std::size_t M, std::size_t target_length,
                                 std::size_t homopolymer_limit,
                                 RngStream& rng) {
  if (target_length == 0) throw PrecondViolation("target_length must be > 0");
  if (homopolymer_limit == 0) {
    throw PrecondViolation("homopolymer_limit must be >= 1");
  }
  ReferenceSet refs;
  refs.target_length = target_length;
  refs.sequences.reserve(M);
  std::unordered_set<std::string> seen;
  seen.reserve(M * 2);
  Sequence seq(target_length, 'A');
  while (refs.sequences.size() < M) {
    std::size_t run = 0;
    char run_base = 0;
    for (std::size_t i = 0; i < target_length; ++i) {
      char base;
      if (run == homopolymer_limit) {
        // Drawing from the three other bases keeps every run <= limit.
        int idx = static_cast<int>(rng.uniform_int(3));
        int banned = base_index(run_base);
        if (idx >= banned) ++idx;
        base = index_base(idx);
      } else {
        base = index_base(static_cast<int>(rng.uniform_int(4)));
      }
      if (base == run_base) {
        ++run;
      } else {
        run_base = base;
        run = 1;
      }
      seq[i] = base;
    }
    if (seen.insert(seq).second) {
      refs.sequences.push_back(seq);
    }
  }
  return refs;
}

}  // namespace dnachannel
