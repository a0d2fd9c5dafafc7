#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mssr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed network file. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Structurally invalid network (duplicate names, self-loops, negative parameters, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A reaction violates one of the decomposition / growth / limit conditions.
class ConditionError : public Error {
 public:
  using Error::Error;
};

/// Finite state projection failed (state cap exceeded, leaked mass above tolerance).
class TruncationError : public Error {
 public:
  using Error::Error;
};

}  // namespace mssr
