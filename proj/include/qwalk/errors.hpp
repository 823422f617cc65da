#ifndef QWALK_ERRORS_HPP
#define QWALK_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace qwalk {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input state is not normalized within tolerance.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

// Cycle length incompatible with the walk (odd N, 4 not dividing N, ...).
class TopologyError : public Error {
 public:
  using Error::Error;
};

// Dimension or alignment mismatch.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain where a formula is valid.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Requested accuracy cannot be guaranteed (e.g. too few quadrature points).
class AccuracyError : public Error {
 public:
  using Error::Error;
};

// Construction of a tessellation or operator failed its invariants.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

// The simulated horizon does not settle a mixing-time estimate.
class InconclusiveError : public Error {
 public:
  InconclusiveError(const std::string& what, double last_tvd)
      : Error(what), last_tvd_(last_tvd) {}
  double last_tvd() const noexcept { return last_tvd_; }

 private:
  double last_tvd_;
};

// Text input error with 1-based position.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Invalid run configuration; names the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace qwalk

#endif  // QWALK_ERRORS_HPP
