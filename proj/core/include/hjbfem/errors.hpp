#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hjbfem {

/// Raised when an argument violates a documented precondition.
class InvalidInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by the banded solver on a zero (or numerically zero) pivot.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when the policy iteration hits its iteration cap without meeting
/// either stopping criterion. Carries the last iterate so callers can inspect
/// or report partial output.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, std::vector<double> last_iterate, int time_step)
      : std::runtime_error(what), last_iterate_(std::move(last_iterate)), time_step_(time_step) {}

  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }
  int time_step() const noexcept { return time_step_; }

 private:
  std::vector<double> last_iterate_;
  int time_step_;
};

}  // namespace hjbfem
