#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hyperwalk {

/// Input outside the domain of a geometric operation (boundary point where an
/// interior one is required, |x| >= 1, point outside the closed disk, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A point coincides with one of the poles ±α.
class PoleSingularity : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The orbit circle through ±α and z degenerates to the diameter l_α.
class DegenerateCircle : public DomainError {
 public:
  using DomainError::DomainError;
};

/// |τ| too large for a Cartesian conversion in the working precision.
class OverflowGuard : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

class PoleMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed configuration: bad step-law table, invalid ensemble parameters,
/// unknown config keys.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A statistical routine was called on a law that violates its assumptions,
/// e.g. a mean-zero test on a drifting law.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Statistic does not apply in this regime (escape rates when E(γ) = 0,
/// oscillation checks when E(γ) != 0).
class NotApplicable : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An ensemble run or a writer stopped early; carries how much was completed.
class PartialResult : public std::runtime_error {
 public:
  PartialResult(const std::string& what, std::size_t completed)
      : std::runtime_error(what), completed_(completed) {}
  std::size_t completed() const noexcept { return completed_; }

 private:
  std::size_t completed_;
};

}  // namespace hyperwalk
