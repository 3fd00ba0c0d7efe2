#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace wigi {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad or missing user input (files, config values, CLI arguments).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A dump line that is not a valid JSON entity (strict mode only).
class ParseError : public Error {
 public:
  ParseError(std::uint64_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::uint64_t line() const noexcept { return line_; }

 private:
  std::uint64_t line_;
};

/// Input stream is not valid UTF-8.
class Utf8Error : public Error {
 public:
  explicit Utf8Error(std::uint64_t offset)
      : Error("invalid UTF-8 at byte offset " + std::to_string(offset)),
        offset_(offset) {}
  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

/// A row in a tabular input file that cannot be accepted.
class RowError : public InputError {
 public:
  RowError(std::string file, std::size_t row, const std::string& what)
      : InputError(file + ": row " + std::to_string(row) + ": " + what),
        row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// A statistic is undefined for the given input (zero variance, empty
/// denominator, too few points, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace wigi
