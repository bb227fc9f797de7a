#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace warplda {

/// Malformed input file. Carries the 1-based line number when one applies
/// (0 means the problem is not tied to a single line).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::uint64_t line, const std::string& what)
      : std::runtime_error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        line_(line) {}

  std::uint64_t line() const noexcept { return line_; }

 private:
  std::uint64_t line_;
};

/// A user function passed to a matrix sweep threw. `index` is the row (or
/// column) being visited when it failed.
class VisitError : public std::runtime_error {
 public:
  VisitError(bool by_row, std::uint32_t index, const std::string& what)
      : std::runtime_error(std::string(by_row ? "row " : "column ") + std::to_string(index) + ": " + what),
        by_row_(by_row),
        index_(index) {}

  bool by_row() const noexcept { return by_row_; }
  std::uint32_t index() const noexcept { return index_; }

 private:
  bool by_row_;
  std::uint32_t index_;
};

/// Count bookkeeping went out of sync with the assignments it describes.
class InconsistentCounts : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace warplda
