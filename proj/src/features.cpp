#include "maxprob/features.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace maxprob {

const char* to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::kLinear: return "linear";
    case KernelKind::kPolynomial: return "polynomial";
    case KernelKind::kRbf: return "rbf";
  }
  return "unknown";
}

void KernelSpec::validate() const {
  if (kind == KernelKind::kRbf && !(gamma > 0.0))
    throw std::invalid_argument("kernel: rbf gamma must be positive");
  if (kind == KernelKind::kPolynomial && degree < 1)
    throw std::invalid_argument("kernel: polynomial degree must be >= 1");
}

MeanEstimate sample_mean(const Eigen::MatrixXd& points) {
  const int l = static_cast<int>(points.rows());
  if (l < 1) throw std::invalid_argument("empty labeled sample");
  MeanEstimate est;
  est.sample_size = l;
  est.alpha = points.colwise().mean();
  est.spread = Eigen::VectorXd::Zero(points.cols());
  if (l > 1) {
    Eigen::MatrixXd centered = points.rowwise() - est.alpha.transpose();
    est.spread = (centered.colwise().squaredNorm() / double(l - 1)).cwiseSqrt();
  }
  return est;
}

int enriched_dimension(int n) { return n + n * (n + 1) / 2; }

Eigen::VectorXd enrich_second_order(const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  Eigen::VectorXd out(enriched_dimension(n));
  out.head(n) = x;
  int pos = n;
  for (int t = 0; t < n; ++t)
    for (int r = t; r < n; ++r) out[pos++] = x[t] * x[r];
  return out;
}

double kernel_value(const KernelSpec& spec, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("kernel: dimension mismatch " + std::to_string(x.size()) +
                                " vs " + std::to_string(y.size()));
  switch (spec.kind) {
    case KernelKind::kLinear:
      return x.dot(y);
    case KernelKind::kPolynomial:
      return std::pow(x.dot(y) + spec.coef0, spec.degree);
    case KernelKind::kRbf:
      return std::exp(-spec.gamma * (x - y).squaredNorm());
  }
  throw std::logic_error("kernel: unknown kind");
}

Eigen::MatrixXd kernel_feature_rows(const KernelSpec& spec, const Eigen::MatrixXd& points,
                                    const std::vector<int>& landmarks) {
  spec.validate();
  const int n_points = static_cast<int>(points.rows());
  Eigen::MatrixXd out(landmarks.size(), n_points);
  for (size_t r = 0; r < landmarks.size(); ++r) {
    int lm = landmarks[r];
    if (lm < 0 || lm >= n_points)
      throw std::invalid_argument("kernel: landmark index " + std::to_string(lm) +
                                  " out of range");
    Eigen::VectorXd center = points.row(lm);
    for (int i = 0; i < n_points; ++i)
      out(r, i) = kernel_value(spec, points.row(i), center);
  }
  return out;
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& points) {
  Standardizer s;
  MeanEstimate est = sample_mean(points);
  s.mean = est.alpha;
  s.scale = est.spread;
  for (int j = 0; j < s.scale.size(); ++j)
    if (s.scale[j] <= 0.0) s.scale[j] = 1.0;
  return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& points) const {
  Eigen::MatrixXd out = points.rowwise() - mean.transpose();
  out.array().rowwise() /= scale.transpose().array();
  return out;
}

}  // namespace maxprob
