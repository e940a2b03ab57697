#pragma once

#include <stdexcept>
#include <string>

namespace scdt {

/// Input violates a documented precondition (bad grid, NaN, malformed tuple).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Scalar argument outside its admissible interval.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File contents could not be parsed.
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace scdt
