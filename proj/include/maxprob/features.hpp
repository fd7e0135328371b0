#pragma once

#include <Eigen/Dense>

#include <vector>

namespace maxprob {

enum class KernelKind { kLinear, kPolynomial, kRbf };

const char* to_string(KernelKind kind);

struct KernelSpec {
  KernelKind kind = KernelKind::kRbf;
  int degree = 2;      // polynomial only, >= 1
  double coef0 = 1.0;  // polynomial offset
  double gamma = 1.0;  // rbf only, > 0

  void validate() const;
};

/// Labeled-sample mean with per-coordinate sample standard deviation (the
/// n-1 convention; zero when a single point is given).
struct MeanEstimate {
  Eigen::VectorXd alpha;
  Eigen::VectorXd spread;
  int sample_size = 0;
};

/// points: one row per point. Throws on an empty sample.
MeanEstimate sample_mean(const Eigen::MatrixXd& points);

/// Appends all pairwise coordinate products x_t * x_r for t <= r in
/// lexicographic order; output dimension n + n(n+1)/2.
Eigen::VectorXd enrich_second_order(const Eigen::VectorXd& x);

int enriched_dimension(int n);

double kernel_value(const KernelSpec& spec, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& y);

/// Row r holds K(x_i, x_{landmarks[r]}) for every point i.
Eigen::MatrixXd kernel_feature_rows(const KernelSpec& spec, const Eigen::MatrixXd& points,
                                    const std::vector<int>& landmarks);

/// Per-coordinate zero-mean/unit-variance transform fitted on a point set.
/// Constant coordinates pass through unscaled.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  static Standardizer fit(const Eigen::MatrixXd& points);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& points) const;
};

}  // namespace maxprob
