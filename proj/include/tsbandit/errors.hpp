#pragma once

#include <stdexcept>
#include <string>

namespace tsb {

// Input that the operation refuses outright (non-finite reward, non-binary
// reward for a Bernoulli posterior, ...).
class InvalidInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Inconsistent or malformed experiment / prior / policy configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every weight (or posterior mass) is zero.
class DegenerateWeightsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operation was called before its preconditions were established.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double achieved_bound)
      : std::runtime_error(what), achieved_bound_(achieved_bound) {}
  double achieved_bound() const noexcept { return achieved_bound_; }

 private:
  double achieved_bound_;
};

class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tsb
