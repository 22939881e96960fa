#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace altsum {

/// Base of every error raised by the library. The CLI maps all of these to
/// exit code 2 (input error).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// DSL syntax error, unknown function, or arity mismatch.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Invalid node construction (Power with r <= 0, Scale with alpha == 0, ...).
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// Evaluation outside [0, inf) or a non-finite result.
class EvalError : public Error {
 public:
  EvalError(const std::string& what, double point)
      : Error(what + " (x = " + format_point(point) + ")"), point_(point) {}
  double point() const noexcept { return point_; }

 private:
  static std::string format_point(double x);
  double point_;
};

/// Inadmissible sequence. `index` is zero-based.
class SequenceError : public Error {
 public:
  enum class Kind { Empty, OrderViolation, NegativeEntry, NonFinite };

  SequenceError(Kind kind, std::size_t index);
  Kind kind() const noexcept { return kind_; }
  std::size_t index() const noexcept { return index_; }

 private:
  Kind kind_;
  std::size_t index_;
};

const char* to_string(SequenceError::Kind kind);

/// Precondition of a specialised check not met (InvalidExponent, EvenLength)
/// or a malformed configuration.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

}  // namespace altsum
