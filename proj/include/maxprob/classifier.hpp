#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

#include "maxprob/data.hpp"
#include "maxprob/features.hpp"
#include "maxprob/lp.hpp"

namespace maxprob {

enum class Mode { kLinear, kSecondOrder, kKernel };

const char* to_string(Mode mode);

struct LandmarkPolicy {
  bool use_all = true;
  int count = 0;        // when use_all is false
  uint64_t seed = 0;
};

struct ModeConfig {
  Mode mode = Mode::kLinear;
  KernelSpec kernel{};
  LandmarkPolicy landmarks{};

  // Per-row slack: epsilon_k = kappa * spread_k / sqrt(l) by default, or a
  // fixed value for every row; either way floored at 1e-9*(1+|alpha_k|).
  // Row bounds are +/- epsilon_k * N.
  double kappa = 1.0;
  std::optional<double> fixed_epsilon;

  double threshold = 0.5;   // hard-label cutoff, in (0,1)
  bool pin_labeled = true;  // force h = 1 on the labeled sample
  bool standardize = false;

  // Linear mode only: assert this mean instead of the labeled-sample mean.
  std::optional<Eigen::VectorXd> alpha_override;

  void validate() const;
};

struct FuzzyLabeling {
  Eigen::VectorXd values;           // in [0,1], one per dataset point
  std::vector<int> labeled_indices;
  double objective = 0.0;           // sum of values: N times the set probability
};

/// Separating direction recovered from the mean-constraint duals; unit normal,
/// class side positive.
struct Hyperplane {
  Eigen::VectorXd normal;
  double offset = 0.0;

  double signed_distance(const Eigen::VectorXd& x) const { return normal.dot(x) + offset; }
};

/// Assembles the maximal-probability LP for the configured mode: objective
/// all ones, one row per constrained feature with coefficients f_k(x_i) minus
/// the labeled-sample mean of f_k, bounds +/- epsilon_k * N.
LpProblem build_problem(const Dataset& dataset, const std::vector<int>& labeled_indices,
                        const ModeConfig& config);

struct TransduceResult {
  FuzzyLabeling labeling;
  LpProblem problem;
  LpSolution solution;
};

/// build + solve + wrap. Throws InfeasibleModelError (carrying the phase-one
/// residual) when the mean band cannot be met, IterationLimitError on a blown
/// pivot budget.
TransduceResult transduce_detailed(const Dataset& dataset,
                                   const std::vector<int>& labeled_indices,
                                   const ModeConfig& config, const SolveLimits& limits = {});

FuzzyLabeling transduce(const Dataset& dataset, const std::vector<int>& labeled_indices,
                        const ModeConfig& config, const SolveLimits& limits = {});

/// Membership iff value >= threshold.
std::vector<uint8_t> harden(const FuzzyLabeling& labeling, double threshold = 0.5);

/// Linear mode only. Normal from the row duals; offset through the fractional
/// support (least squares), or midway between the h=0 and h=1 extremes when no
/// point is fractional. Throws HyperplaneRecoveryError when the duals carry no
/// direction.
Hyperplane recover_hyperplane(const LpProblem& problem, const LpSolution& solution,
                              const Dataset& dataset);

}  // namespace maxprob
