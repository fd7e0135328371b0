#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace maxprob {

struct Dataset {
  Eigen::MatrixXd points;  // one row per point
  std::optional<std::vector<uint8_t>> truth;  // class membership when known
  std::string name;

  int size() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }
};

struct CsvOptions {
  bool has_header = false;
  std::optional<int> label_column;  // zero-based; nonzero cell means member
};

/// Comma-delimited numeric rows, UTF-8. Errors carry the offending line
/// number; an empty file (no data rows) is rejected.
Dataset load_csv(const std::string& path, const CsvOptions& options = {});

void write_csv(const std::string& path, const Dataset& dataset, bool with_header = true);

/// Two clouds strictly on opposite sides of a random hyperplane, class side
/// positive; margin 0.2 of the unit cloud spread. Deterministic per seed.
/// The generating hyperplane (unit normal + offset) is reported on request.
Dataset gen_halfspace(uint64_t seed, int n_class, int n_other, int dim,
                      Eigen::VectorXd* normal_out = nullptr, double* offset_out = nullptr);

/// Class drawn from a full-covariance Gaussian; others from a surrounding
/// box excluding the class's high-density ellipsoid.
Dataset gen_gaussian(uint64_t seed, int n_class, int n_other, int dim);

/// Class uniform in the unit ball, others in the [1.5, 2.5] shell: not
/// linearly separable in input space, separable under RBF features.
Dataset gen_ring(uint64_t seed, int n_class, int n_other, int dim = 2);

struct SplitPlan {
  uint64_t seed = 0;
  int labeled_count = 1;
  int t_size = 0;  // 0: round(N/3)
  int s_size = 0;  // 0: remainder
};

struct SplitResult {
  std::vector<int> pool;     // T indices
  std::vector<int> eval;     // S indices, disjoint from T
  std::vector<int> labeled;  // drawn from T intersect class only
};

/// Deterministic T/S partition plus a labeled sample of plan.labeled_count
/// class members from T. Requires truth labels; throws when T holds fewer
/// class members than requested.
SplitResult split(const Dataset& dataset, const SplitPlan& plan);

/// Building blocks used by split and by the sweep harness (which re-draws
/// labeled samples of several sizes against one partition).
std::vector<int> shuffled_indices(int n, uint64_t seed);
std::vector<int> sample_class_indices(const Dataset& dataset, const std::vector<int>& pool,
                                      int count, uint64_t seed);

}  // namespace maxprob
