#pragma once

#include <stdexcept>
#include <string>

namespace maxprob {

inline constexpr const char* kToolVersion = "0.1.0";

/// Model is infeasible: the mean band cannot be met. Carries the phase-one
/// residual (total constraint violation at the least-infeasible point).
class InfeasibleModelError : public std::runtime_error {
 public:
  InfeasibleModelError(double residual, const std::string& message)
      : std::runtime_error(message), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class IterationLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class HyperplaneRecoveryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Floating-point formatting used for every user-facing number: 9 significant
/// digits, locale-independent.
std::string format_g9(double value);

}  // namespace maxprob
