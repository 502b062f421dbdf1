#pragma once

#include <stdexcept>
#include <string>

namespace superlin {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user input or a violated operation precondition (bad summary
// statistics, out-of-range parameters, unknown identifiers, ...).
// CLI exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A correlation vector that yields a negative contrast variance, i.e. one
// outside any legitimate covariance structure.
class InfeasibleCorrelationError : public Error {
 public:
  using Error::Error;
};

// Malformed input text (JSON/CSV); messages carry position context.
// CLI exit code 3.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace superlin
