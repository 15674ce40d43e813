#pragma once

#include <stdexcept>
#include <string>

namespace ehcr {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Iterative evaluation failed to converge; message carries the diagnostics.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameter set or policy is structurally unusable (e.g. the sensing branch
// cannot be reached with the given battery capacity).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Stationary distribution is not unique.
class AmbiguityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ehcr
