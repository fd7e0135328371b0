#include "maxprob/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

#include "maxprob/common.hpp"
#include "maxprob/rng.hpp"

namespace maxprob {

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::kLinear: return "linear";
    case Mode::kSecondOrder: return "second-order";
    case Mode::kKernel: return "kernel";
  }
  return "unknown";
}

void ModeConfig::validate() const {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::invalid_argument("config: threshold must lie in (0,1)");
  if (kappa < 0.0) throw std::invalid_argument("config: kappa must be >= 0");
  if (fixed_epsilon && *fixed_epsilon < 0.0)
    throw std::invalid_argument("config: epsilon must be >= 0");
  if (mode == Mode::kKernel) kernel.validate();
  if (alpha_override && mode != Mode::kLinear)
    throw std::invalid_argument("config: mean override is supported in linear mode only");
}

namespace {

std::vector<int> pick_landmarks(const LandmarkPolicy& policy, int n_points) {
  if (policy.use_all || policy.count >= n_points) {
    std::vector<int> all(n_points);
    for (int i = 0; i < n_points; ++i) all[i] = i;
    return all;
  }
  if (policy.count < 1) throw std::invalid_argument("config: landmark count must be >= 1");
  std::vector<int> idx(n_points);
  for (int i = 0; i < n_points; ++i) idx[i] = i;
  Rng rng(child_seed(policy.seed, 0x1a2d));
  rng.shuffle(idx);
  idx.resize(policy.count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

// Feature rows F (m x N) for the configured mode, such that constraint k is
// sum_i (F(k,i) - alpha_k) h_i within the epsilon band.
Eigen::MatrixXd feature_rows(const Eigen::MatrixXd& points, const ModeConfig& config) {
  const int n_points = static_cast<int>(points.rows());
  const int dim = static_cast<int>(points.cols());
  switch (config.mode) {
    case Mode::kLinear:
      return points.transpose();
    case Mode::kSecondOrder: {
      Eigen::MatrixXd f(enriched_dimension(dim), n_points);
      for (int i = 0; i < n_points; ++i) f.col(i) = enrich_second_order(points.row(i));
      return f;
    }
    case Mode::kKernel:
      return kernel_feature_rows(config.kernel, points,
                                 pick_landmarks(config.landmarks, n_points));
  }
  throw std::logic_error("unknown mode");
}

void check_labeled(const Dataset& dataset, const std::vector<int>& labeled) {
  if (labeled.empty()) throw std::invalid_argument("empty labeled sample");
  if (dataset.size() < 2) throw std::invalid_argument("dataset needs at least 2 points");
  std::set<int> seen;
  for (int i : labeled) {
    if (i < 0 || i >= dataset.size())
      throw std::invalid_argument("labeled index " + std::to_string(i) + " out of range");
    if (!seen.insert(i).second)
      throw std::invalid_argument("labeled index " + std::to_string(i) + " repeated");
  }
}

}  // namespace

LpProblem build_problem(const Dataset& dataset, const std::vector<int>& labeled,
                        const ModeConfig& config) {
  config.validate();
  check_labeled(dataset, labeled);

  Eigen::MatrixXd points = dataset.points;
  if (config.standardize) points = Standardizer::fit(points).apply(points);

  const Eigen::MatrixXd f = feature_rows(points, config);
  const int n_points = static_cast<int>(f.cols());
  const int m = static_cast<int>(f.rows());
  const int l = static_cast<int>(labeled.size());

  Eigen::MatrixXd labeled_features(l, m);
  for (int j = 0; j < l; ++j) labeled_features.row(j) = f.col(labeled[j]);
  MeanEstimate est = sample_mean(labeled_features);
  if (config.alpha_override) {
    if (config.alpha_override->size() != m)
      throw std::invalid_argument("config: mean override has dimension " +
                                  std::to_string(config.alpha_override->size()) +
                                  ", expected " + std::to_string(m));
    est.alpha = *config.alpha_override;
  }

  LpProblem p;
  p.objective = Eigen::VectorXd::Ones(n_points);
  p.rows = f.colwise() - est.alpha;
  p.row_lower.resize(m);
  p.row_upper.resize(m);
  for (int k = 0; k < m; ++k) {
    double eps = config.fixed_epsilon ? *config.fixed_epsilon
                                      : config.kappa * est.spread[k] / std::sqrt(double(l));
    eps = std::max(eps, 1e-9 * (1.0 + std::abs(est.alpha[k])));
    p.row_lower[k] = -eps * n_points;
    p.row_upper[k] = eps * n_points;
  }
  p.var_lower = Eigen::VectorXd::Zero(n_points);
  p.var_upper = Eigen::VectorXd::Ones(n_points);
  if (config.pin_labeled)
    for (int i : labeled) p.var_lower[i] = 1.0;
  return p;
}

TransduceResult transduce_detailed(const Dataset& dataset, const std::vector<int>& labeled,
                                   const ModeConfig& config, const SolveLimits& limits) {
  TransduceResult result;
  result.problem = build_problem(dataset, labeled, config);
  result.solution = solve(result.problem, limits);
  switch (result.solution.status) {
    case SolveStatus::kOptimal:
      break;
    case SolveStatus::kInfeasible:
      throw InfeasibleModelError(
          result.solution.infeasibility,
          "mean band infeasible (phase-one residual " +
              format_g9(result.solution.infeasibility) + "); increase epsilon");
    case SolveStatus::kIterationLimit:
      throw IterationLimitError("pivot budget exhausted after " +
                                std::to_string(result.solution.iterations) + " iterations");
    case SolveStatus::kUnbounded:
      throw std::logic_error("box-bounded program reported unbounded");
  }
  result.labeling.values = result.solution.values;
  result.labeling.labeled_indices = labeled;
  result.labeling.objective = result.solution.objective_value;
  return result;
}

FuzzyLabeling transduce(const Dataset& dataset, const std::vector<int>& labeled,
                        const ModeConfig& config, const SolveLimits& limits) {
  return transduce_detailed(dataset, labeled, config, limits).labeling;
}

std::vector<uint8_t> harden(const FuzzyLabeling& labeling, double threshold) {
  std::vector<uint8_t> out(labeling.values.size());
  for (int i = 0; i < labeling.values.size(); ++i)
    out[i] = labeling.values[i] >= threshold ? 1 : 0;
  return out;
}

Hyperplane recover_hyperplane(const LpProblem& problem, const LpSolution& solution,
                              const Dataset& dataset) {
  if (solution.status != SolveStatus::kOptimal)
    throw std::invalid_argument("hyperplane: solution is not OPTIMAL");
  const int dim = dataset.dim();
  if (problem.num_rows() != dim)
    throw std::invalid_argument("hyperplane: expected one mean row per coordinate (linear mode)");

  Eigen::VectorXd duals = solution.row_duals;
  if (duals.norm() <= 1e-12)
    throw HyperplaneRecoveryError("no supporting direction recovered");
  Eigen::VectorXd normal = duals.normalized();

  constexpr double kFracTol = 1e-7;
  std::vector<int> fractional, ones, zeros;
  for (int i = 0; i < solution.values.size(); ++i) {
    double v = solution.values[i];
    if (v > kFracTol && v < 1.0 - kFracTol)
      fractional.push_back(i);
    else if (v >= 1.0 - kFracTol)
      ones.push_back(i);
    else
      zeros.push_back(i);
  }

  auto mean_projection = [&](const std::vector<int>& idx) {
    double total = 0.0;
    for (int i : idx) total += normal.dot(dataset.points.row(i));
    return total / double(idx.size());
  };

  // Orient the class side positive, using the most informative pair of groups.
  double high, low;
  if (!ones.empty() && !zeros.empty()) {
    high = mean_projection(ones);
    low = mean_projection(zeros);
  } else if (!ones.empty() && !fractional.empty()) {
    high = mean_projection(ones);
    low = mean_projection(fractional);
  } else if (!fractional.empty() && !zeros.empty()) {
    high = mean_projection(fractional);
    low = mean_projection(zeros);
  } else {
    throw HyperplaneRecoveryError("labeling has no boundary to orient against");
  }
  if (high < low) normal = -normal;

  double offset;
  if (!fractional.empty()) {
    offset = -mean_projection(fractional);  // least squares of (normal.x + d)^2
  } else {
    double max_zero = -std::numeric_limits<double>::infinity();
    for (int i : zeros) max_zero = std::max(max_zero, normal.dot(dataset.points.row(i)));
    double min_one = std::numeric_limits<double>::infinity();
    for (int i : ones) min_one = std::min(min_one, normal.dot(dataset.points.row(i)));
    offset = -(max_zero + min_one) / 2.0;
  }
  return Hyperplane{normal, offset};
}

}  // namespace maxprob
