#pragma once

#include <stdexcept>

namespace m2m {

/// Malformed or out-of-range configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a model function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Caller broke a precondition of an API (wrong slot role, unassigned RB, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Problem instance too large for an exhaustive routine.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace m2m
