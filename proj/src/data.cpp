#include "maxprob/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "maxprob/common.hpp"
#include "maxprob/rng.hpp"

namespace maxprob {

namespace {

double parse_cell(const std::string& cell, int line_no, int col_no) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t' || *(end - 1) == '\r')) --end;
  double value = 0.0;
  auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end)
    throw std::invalid_argument("csv: non-numeric cell at line " + std::to_string(line_no) +
                                ", column " + std::to_string(col_no + 1));
  return value;
}

}  // namespace

Dataset load_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("csv: cannot open " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  bool skipped_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (options.has_header && !skipped_header) {
      skipped_header = true;
      continue;
    }
    std::vector<double> cells;
    std::stringstream ss(line);
    std::string cell;
    int col = 0;
    while (std::getline(ss, cell, ',')) cells.push_back(parse_cell(cell, line_no, col++));
    if (!rows.empty() && cells.size() != rows.front().size())
      throw std::invalid_argument("csv: ragged row at line " + std::to_string(line_no) +
                                  " (" + std::to_string(cells.size()) + " cells, expected " +
                                  std::to_string(rows.front().size()) + ")");
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw std::invalid_argument("csv: no rows in " + path);

  const int total_cols = static_cast<int>(rows.front().size());
  int label = -1;
  if (options.label_column) {
    label = *options.label_column;
    if (label < 0 || label >= total_cols)
      throw std::invalid_argument("csv: label column " + std::to_string(label) +
                                  " out of range (" + std::to_string(total_cols) + " columns)");
  }
  const int n_features = total_cols - (label >= 0 ? 1 : 0);
  if (n_features < 1) throw std::invalid_argument("csv: no feature columns");

  Dataset ds;
  ds.name = path;
  ds.points.resize(rows.size(), n_features);
  if (label >= 0) ds.truth.emplace(rows.size(), 0);
  for (size_t i = 0; i < rows.size(); ++i) {
    int out_col = 0;
    for (int c = 0; c < total_cols; ++c) {
      if (c == label)
        (*ds.truth)[i] = rows[i][c] != 0.0 ? 1 : 0;
      else
        ds.points(i, out_col++) = rows[i][c];
    }
  }
  return ds;
}

void write_csv(const std::string& path, const Dataset& dataset, bool with_header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("csv: cannot write " + path);
  const bool labeled = dataset.truth.has_value();
  if (with_header) {
    if (labeled) out << "label";
    for (int j = 0; j < dataset.dim(); ++j) out << (labeled || j > 0 ? "," : "") << "x" << j;
    out << "\n";
  }
  for (int i = 0; i < dataset.size(); ++i) {
    if (labeled) out << int((*dataset.truth)[i]);
    for (int j = 0; j < dataset.dim(); ++j) {
      if (labeled || j > 0) out << ",";
      out << format_g9(dataset.points(i, j));
    }
    out << "\n";
  }
}

namespace {

Eigen::VectorXd random_unit(Rng& rng, int dim) {
  Eigen::VectorXd v(dim);
  do {
    for (int j = 0; j < dim; ++j) v[j] = rng.next_normal();
  } while (v.norm() < 1e-9);
  return v.normalized();
}

}  // namespace

Dataset gen_halfspace(uint64_t seed, int n_class, int n_other, int dim,
                      Eigen::VectorXd* normal_out, double* offset_out) {
  if (n_class < 1 || n_other < 1 || dim < 1)
    throw std::invalid_argument("gen_halfspace: counts and dim must be >= 1");
  Rng rng(child_seed(seed, 0x5a1f));
  const double margin = 0.2;        // of unit cloud spread
  const double center_dist = 2.2;   // cloud center distance from the plane

  Eigen::VectorXd normal = random_unit(rng, dim);
  double offset = rng.next_double() * 2.0 - 1.0;  // plane: normal . x = offset

  Dataset ds;
  ds.name = "halfspace";
  ds.points.resize(n_class + n_other, dim);
  ds.truth.emplace(n_class + n_other, 0);

  auto sample_side = [&](int row, double side) {
    Eigen::VectorXd x(dim);
    for (int j = 0; j < dim; ++j) x[j] = rng.next_normal();
    x += (offset + side * center_dist) * normal;
    double signed_dist = normal.dot(x) - offset;
    double want = side * signed_dist;  // distance on the desired side
    if (want < margin) x += side * (margin - want) * 2.0 * normal;  // reflect across the margin
    ds.points.row(row) = x;
  };

  for (int i = 0; i < n_class; ++i) {
    sample_side(i, +1.0);
    (*ds.truth)[i] = 1;
  }
  for (int i = 0; i < n_other; ++i) sample_side(n_class + i, -1.0);

  if (normal_out) *normal_out = normal;
  if (offset_out) *offset_out = -offset;  // as c.x + d with d = -offset
  return ds;
}

Dataset gen_gaussian(uint64_t seed, int n_class, int n_other, int dim) {
  if (n_class < 1 || n_other < 1 || dim < 1)
    throw std::invalid_argument("gen_gaussian: counts and dim must be >= 1");
  Rng rng(child_seed(seed, 0x6a55));

  // Random SPD covariance with mild conditioning: Q diag(e) Q^T.
  Eigen::MatrixXd gauss(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) gauss(i, j) = rng.next_normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd eigs(dim);
  for (int j = 0; j < dim; ++j) eigs[j] = 0.4 + 1.0 * rng.next_double();  // cond <= 3.5
  Eigen::MatrixXd sqrt_cov = q * eigs.cwiseSqrt().asDiagonal();

  Eigen::VectorXd mu(dim);
  for (int j = 0; j < dim; ++j) mu[j] = rng.next_double() * 2.0 - 1.0;

  const double exclusion = 3.0;   // Mahalanobis radius carved out of the surround
  const double box_half = 6.0 * std::sqrt(eigs.maxCoeff());

  Dataset ds;
  ds.name = "gaussian";
  ds.points.resize(n_class + n_other, dim);
  ds.truth.emplace(n_class + n_other, 0);

  Eigen::MatrixXd cov_inv = (sqrt_cov * sqrt_cov.transpose()).inverse();
  auto mahalanobis2 = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd d = x - mu;
    return d.dot(cov_inv * d);
  };

  for (int i = 0; i < n_class; ++i) {
    Eigen::VectorXd z(dim);
    for (int j = 0; j < dim; ++j) z[j] = rng.next_normal();
    ds.points.row(i) = mu + sqrt_cov * z;
    (*ds.truth)[i] = 1;
  }
  for (int i = 0; i < n_other; ++i) {
    Eigen::VectorXd x(dim);
    do {
      for (int j = 0; j < dim; ++j) x[j] = mu[j] + (rng.next_double() * 2.0 - 1.0) * box_half;
    } while (mahalanobis2(x) < exclusion * exclusion);
    ds.points.row(n_class + i) = x;
  }
  return ds;
}

Dataset gen_ring(uint64_t seed, int n_class, int n_other, int dim) {
  if (n_class < 1 || n_other < 1 || dim < 1)
    throw std::invalid_argument("gen_ring: counts and dim must be >= 1");
  Rng rng(child_seed(seed, 0x7213));
  const double inner = 1.0, shell_lo = 1.5, shell_hi = 2.5;

  Dataset ds;
  ds.name = "ring";
  ds.points.resize(n_class + n_other, dim);
  ds.truth.emplace(n_class + n_other, 0);

  auto radial = [&](int row, double r) {
    ds.points.row(row) = r * random_unit(rng, dim);
  };

  for (int i = 0; i < n_class; ++i) {
    radial(i, inner * std::pow(rng.next_double(), 1.0 / dim));
    (*ds.truth)[i] = 1;
  }
  double lo_d = std::pow(shell_lo, dim), hi_d = std::pow(shell_hi, dim);
  for (int i = 0; i < n_other; ++i)
    radial(n_class + i, std::pow(lo_d + rng.next_double() * (hi_d - lo_d), 1.0 / dim));
  return ds;
}

std::vector<int> shuffled_indices(int n, uint64_t seed) {
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  Rng rng(seed);
  rng.shuffle(idx);
  return idx;
}

std::vector<int> sample_class_indices(const Dataset& dataset, const std::vector<int>& pool,
                                      int count, uint64_t seed) {
  if (!dataset.truth) throw std::invalid_argument("split: dataset has no truth labels");
  std::vector<int> members;
  for (int i : pool)
    if ((*dataset.truth)[i]) members.push_back(i);
  if (count < 1 || count > static_cast<int>(members.size()))
    throw std::invalid_argument("split: requested " + std::to_string(count) +
                                " labeled points but the pool holds " +
                                std::to_string(members.size()) + " class members");
  Rng rng(seed);
  rng.shuffle(members);
  members.resize(count);
  std::sort(members.begin(), members.end());
  return members;
}

SplitResult split(const Dataset& dataset, const SplitPlan& plan) {
  const int n = dataset.size();
  int t_size = plan.t_size > 0 ? plan.t_size : (n + 2) / 3;
  int s_size = plan.s_size > 0 ? plan.s_size : n - t_size;
  if (t_size < 1 || s_size < 1 || t_size + s_size > n)
    throw std::invalid_argument("split: T/S sizes inconsistent with dataset size " +
                                std::to_string(n));

  std::vector<int> order = shuffled_indices(n, child_seed(plan.seed, 0));
  SplitResult result;
  result.pool.assign(order.begin(), order.begin() + t_size);
  result.eval.assign(order.begin() + t_size, order.begin() + t_size + s_size);
  std::sort(result.pool.begin(), result.pool.end());
  std::sort(result.eval.begin(), result.eval.end());
  result.labeled =
      sample_class_indices(dataset, result.pool, plan.labeled_count, child_seed(plan.seed, 1));
  return result;
}

}  // namespace maxprob
