#pragma once

#include <stdexcept>
#include <string>

namespace jgl {

// Malformed or inconsistent caller input: bad dimensions, out-of-range
// indices, unreadable files.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid generator or solver configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failure: non-PD matrix, eigensolver breakdown.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A checker was asked to certify a result that violates its precondition.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace jgl
