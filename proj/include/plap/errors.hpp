#pragma once

#include <stdexcept>
#include <string>

namespace plap {

/// Vector length does not match the graph it is applied to.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed graph input (duplicate edge, self-loop, non-positive weight, parse failure).
class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The solver needs a connected graph.
class DisconnectedGraphError : public GraphError {
 public:
  using GraphError::GraphError;
};

/// An unregularized Form-1 quantity was requested at a point where |Bx|_k or x_i vanishes.
class ConstraintViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Softabs-regularized matrices left the representable floating-point range.
class RegimeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// The iterate or operator output is zero where a normalization needs it nonzero.
class DegenerateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

inline void require_length(long actual, long expected, const char* what) {
  if (actual != expected) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(expected) +
                         ", got " + std::to_string(actual));
  }
}

}  // namespace detail
}  // namespace plap
