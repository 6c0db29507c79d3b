#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pcc {

/// Malformed input file. `row` is the 1-based physical line (header = 1).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, std::size_t row, const std::string& message)
      : std::runtime_error(source + ":" + std::to_string(row) + ": " + message),
        source_(std::move(source)),
        row_(row) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t row() const noexcept { return row_; }

 private:
  std::string source_;
  std::size_t row_;
};

/// Well-formed input that cannot satisfy a request (dangling references,
/// starving classes, failed audits).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad configuration or command-line usage.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pcc
