#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dnachannel {

// Exit-code classes used by the CLI: config errors -> 2, I/O errors -> 3,
// runtime/statistical errors -> 4.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct RecordCountMismatch : IoError {
  RecordCountMismatch(std::size_t fwd, std::size_t rev)
      : IoError("record count mismatch: " + std::to_string(fwd) +
                " forward vs " + std::to_string(rev) + " reverse"),
        fwd_count(fwd),
        rev_count(rev) {}
  std::size_t fwd_count;
  std::size_t rev_count;
};

struct InvalidCharacter : std::runtime_error {
  InvalidCharacter(std::size_t pos, char c, const std::string& context = "")
      : std::runtime_error("invalid character '" + std::string(1, c) +
                           "' at position " + std::to_string(pos) +
                           (context.empty() ? "" : " in " + context)),
        position(pos),
        character(c) {}
  std::size_t position;
  char character;
};

struct EmptyPool : std::runtime_error {
  EmptyPool() : std::runtime_error("operation requires a non-empty pool") {}
};

struct PrecondViolation : std::runtime_error {
  explicit PrecondViolation(const std::string& msg) : std::runtime_error(msg) {}
};

struct EmptyStratum : std::runtime_error {
  explicit EmptyStratum(const std::string& stratum)
      : std::runtime_error("no matches in stratum '" + stratum + "'") {}
};

struct NoSubstitutions : std::runtime_error {
  NoSubstitutions()
      : std::runtime_error(
            "conditional substitution matrix requires at least one observed "
            "substitution") {}
};

struct Underdispersed : std::runtime_error {
  Underdispersed(double mean, double variance)
      : std::runtime_error(
            "negative binomial fit requires variance > mean (mean=" +
            std::to_string(mean) + ", variance=" + std::to_string(variance) +
            ")") {}
};

}  // namespace dnachannel
