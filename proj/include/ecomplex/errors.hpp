#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ecomplex {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data. Carries the 1-based line number when
// the problem was found while reading a file (0 when not applicable).
class DataError : public Error {
 public:
  explicit DataError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Invalid configuration (bad paths, contradictory settings, unknown keys).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A computation whose preconditions do not hold (empty matrix, rank
// deficiency, missing coverage).
class ComputeError : public Error {
 public:
  using Error::Error;
};

}  // namespace ecomplex
