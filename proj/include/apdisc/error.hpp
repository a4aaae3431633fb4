#pragma once

#include <stdexcept>
#include <string>

namespace apdisc {

// Malformed input: shapes, files, parameters outside a precondition.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A hypothesis of a bound is not met (e.g. s outside the valid window).
class HypothesisError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Search or solver gave up within its budget.
class SolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace apdisc
