#include "maxprob/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace maxprob {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "OPTIMAL";
    case SolveStatus::kInfeasible: return "INFEASIBLE";
    case SolveStatus::kUnbounded: return "UNBOUNDED";
    case SolveStatus::kIterationLimit: return "ITERATION_LIMIT";
  }
  return "UNKNOWN";
}

void LpProblem::validate() const {
  const int n = num_vars();
  const int m = num_rows();
  if (n < 1) throw std::invalid_argument("lp: need at least one variable");
  if (rows.rows() != m || (m > 0 && rows.cols() != n))
    throw std::invalid_argument("lp: rows matrix shape mismatch");
  if (row_upper.size() != m) throw std::invalid_argument("lp: row bound length mismatch");
  if (var_lower.size() != n || var_upper.size() != n)
    throw std::invalid_argument("lp: var bound length mismatch");
  if (!objective.allFinite() || !row_lower.allFinite() || !row_upper.allFinite() ||
      !var_lower.allFinite() || !var_upper.allFinite() || (m > 0 && !rows.allFinite()))
    throw std::invalid_argument("lp: non-finite entry");
  for (int k = 0; k < m; ++k)
    if (row_lower[k] > row_upper[k])
      throw std::invalid_argument("lp: crossed row bounds at row " + std::to_string(k));
  for (int j = 0; j < n; ++j)
    if (var_lower[j] > var_upper[j])
      throw std::invalid_argument("lp: crossed variable bounds at column " + std::to_string(j));
}

namespace {

enum class VarState : uint8_t { kBasic, kAtLower, kAtUpper };

constexpr double kPivotSkipTol = 1e-9;    // ratio-test entries below this are treated as zero
constexpr double kPivotAcceptTol = 1e-8;  // minimum magnitude of an accepted basis pivot
constexpr double kRatioTieTol = 1e-10;
constexpr double kDegenerateStep = 1e-11;
constexpr int kRefactorInterval = 128;

// Columns are indexed over one combined space:
//   [0, n)          problem variables with the given box bounds,
//   [n, n+m)        row slacks s_k with bounds [row_lower, row_upper]
//                   (the equality system is  A x - s = 0),
//   [n+m, ...)      phase-one artificials with a +/-1 entry in one row.
class Simplex {
 public:
  Simplex(const LpProblem& p, const SolveLimits& lim)
      : p_(p), lim_(lim), n_(p.num_vars()), m_(p.num_rows()) {
    max_iterations_ = lim.max_iterations > 0 ? lim.max_iterations : 1000 + 50 * (n_ + m_);
  }

  LpSolution run() {
    init();
    std::vector<char> rejected(num_cols(), 0);
    for (;;) {
      if (iterations_ >= max_iterations_) return finish_limit();
      int entering = choose_entering(rejected);
      if (entering < 0) {
        if (std::count(rejected.begin(), rejected.end(), char(1)) > 0) {
          // Only numerically unusable candidates remain; accept the vertex.
          std::fill(rejected.begin(), rejected.end(), 0);
        }
        if (phase_one_) {
          double residual = artificial_sum();
          if (residual > lim_.tol_feas) return finish_infeasible(residual);
          to_phase_two();
          continue;
        }
        return finish_optimal();
      }
      StepOutcome outcome = step(entering);
      if (outcome == StepOutcome::kRejected) {
        rejected[entering] = 1;
        continue;
      }
      std::fill(rejected.begin(), rejected.end(), 0);
      if (outcome == StepOutcome::kUnbounded) return finish_unbounded();
      ++iterations_;
      if (++pivots_since_refactor_ >= kRefactorInterval) {
        refactorize();
        recompute_basics();
      }
    }
  }

 private:
  enum class StepOutcome { kMoved, kRejected, kUnbounded };

  int num_cols() const { return n_ + m_ + static_cast<int>(art_row_.size()); }
  bool is_structural(int j) const { return j < n_; }
  bool is_slack(int j) const { return j >= n_ && j < n_ + m_; }
  bool is_artificial(int j) const { return j >= n_ + m_; }
  bool is_fixed(int j) const { return lower_[j] == upper_[j]; }

  void init() {
    lower_.assign(n_ + m_, 0.0);
    upper_.assign(n_ + m_, 0.0);
    x_.assign(n_ + m_, 0.0);
    state_.assign(n_ + m_, VarState::kAtLower);
    cost_.assign(n_ + m_, 0.0);
    basic_.assign(m_, -1);

    for (int j = 0; j < n_; ++j) {
      lower_[j] = p_.var_lower[j];
      upper_[j] = p_.var_upper[j];
      x_[j] = lower_[j];
    }

    // Row activities with every variable at its lower bound.
    Eigen::VectorXd x0 = p_.var_lower;
    Eigen::VectorXd act = m_ > 0 ? Eigen::VectorXd(p_.rows * x0) : Eigen::VectorXd();

    for (int k = 0; k < m_; ++k) {
      int slack = n_ + k;
      lower_[slack] = p_.row_lower[k];
      upper_[slack] = p_.row_upper[k];
      double a = act[k];
      if (a >= p_.row_lower[k] && a <= p_.row_upper[k]) {
        basic_[k] = slack;
        state_[slack] = VarState::kBasic;
        x_[slack] = a;
      } else {
        double target = a < p_.row_lower[k] ? p_.row_lower[k] : p_.row_upper[k];
        state_[slack] = a < p_.row_lower[k] ? VarState::kAtLower : VarState::kAtUpper;
        x_[slack] = target;
        double sign = a < p_.row_lower[k] ? 1.0 : -1.0;
        double value = (target - a) / sign;  // > 0 by construction
        int art = n_ + m_ + static_cast<int>(art_row_.size());
        art_row_.push_back(k);
        art_sign_.push_back(sign);
        lower_.push_back(0.0);
        upper_.push_back(value);
        x_.push_back(value);
        state_.push_back(VarState::kBasic);
        cost_.push_back(-1.0);  // phase one maximizes -sum(artificials)
        basic_[k] = art;
      }
    }

    binv_.resize(m_, m_);
    refactorize();

    phase_one_ = !art_row_.empty();
    if (!phase_one_) set_phase_two_costs();

    y_.resize(m_);
    reduced_struct_.resize(n_);
    struct_cost_.resize(n_);
    struct_cost_.setZero();
    if (!phase_one_) struct_cost_ = p_.objective;
  }

  void set_phase_two_costs() {
    for (int j = 0; j < n_; ++j) cost_[j] = p_.objective[j];
    for (size_t a = 0; a < art_row_.size(); ++a) cost_[n_ + m_ + a] = 0.0;
  }

  void to_phase_two() {
    phase_one_ = false;
    // Artificials are pinned at zero and never priced again.
    for (size_t a = 0; a < art_row_.size(); ++a) {
      int j = n_ + m_ + static_cast<int>(a);
      upper_[j] = 0.0;
      if (state_[j] != VarState::kBasic) {
        state_[j] = VarState::kAtLower;
        x_[j] = 0.0;
      }
    }
    set_phase_two_costs();
    struct_cost_ = p_.objective;
    bland_ = false;
    degenerate_run_ = 0;
    refactorize();
    recompute_basics();
  }

  double artificial_sum() const {
    double total = 0.0;
    for (size_t a = 0; a < art_row_.size(); ++a) total += std::max(0.0, x_[n_ + m_ + a]);
    return total;
  }

  void refactorize() {
    if (m_ == 0) {
      pivots_since_refactor_ = 0;
      return;
    }
    Eigen::MatrixXd basis(m_, m_);
    for (int r = 0; r < m_; ++r) basis.col(r) = column(basic_[r]);
    binv_ = basis.partialPivLu().inverse();
    if (!binv_.allFinite()) throw std::runtime_error("lp: singular basis");
    pivots_since_refactor_ = 0;
  }

  Eigen::VectorXd column(int j) const {
    if (is_structural(j)) return p_.rows.col(j);
    Eigen::VectorXd col = Eigen::VectorXd::Zero(m_);
    if (is_slack(j)) {
      col[j - n_] = -1.0;
    } else {
      int a = j - n_ - m_;
      col[art_row_[a]] = art_sign_[a];
    }
    return col;
  }

  Eigen::VectorXd transformed_column(int j) const {
    if (m_ == 0) return Eigen::VectorXd();
    if (is_structural(j)) return binv_ * p_.rows.col(j);
    if (is_slack(j)) return -binv_.col(j - n_);
    int a = j - n_ - m_;
    return art_sign_[a] * binv_.col(art_row_[a]);
  }

  void recompute_basics() {
    if (m_ == 0) return;
    Eigen::VectorXd xs = Eigen::VectorXd::Zero(n_);
    for (int j = 0; j < n_; ++j)
      if (state_[j] != VarState::kBasic) xs[j] = x_[j];
    Eigen::VectorXd rhs = -(p_.rows * xs);
    for (int k = 0; k < m_; ++k) {
      int slack = n_ + k;
      if (state_[slack] != VarState::kBasic) rhs[k] += x_[slack];
    }
    // Nonbasic artificials sit at zero and contribute nothing.
    Eigen::VectorXd xb = binv_ * rhs;
    for (int r = 0; r < m_; ++r) x_[basic_[r]] = xb[r];
  }

  // Reduced cost d_j = c_j - y . A_j with y solving B^T y = c_B. Positive d
  // at a lower bound (or negative at an upper bound) improves the maximum.
  void compute_duals() {
    if (m_ == 0) {
      reduced_struct_ = struct_cost_;
      return;
    }
    Eigen::VectorXd cb(m_);
    for (int r = 0; r < m_; ++r) cb[r] = cost_[basic_[r]];
    y_ = binv_.transpose() * cb;
    reduced_struct_ = struct_cost_ - p_.rows.transpose() * y_;
  }

  double reduced_cost(int j) const {
    if (is_structural(j)) return reduced_struct_[j];
    if (is_slack(j)) return cost_[j] + y_[j - n_];
    int a = j - n_ - m_;
    return cost_[j] - art_sign_[a] * y_[art_row_[a]];
  }

  int choose_entering(const std::vector<char>& rejected) {
    compute_duals();
    int best = -1;
    double best_score = lim_.tol_opt;
    for (int j = 0; j < num_cols(); ++j) {
      if (state_[j] == VarState::kBasic || is_fixed(j) || rejected[j]) continue;
      if (is_artificial(j) && !phase_one_) continue;
      double d = reduced_cost(j);
      double score = state_[j] == VarState::kAtLower ? d : -d;
      if (score <= lim_.tol_opt) continue;
      if (bland_) return j;  // first improving index
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    return best;
  }

  StepOutcome step(int entering) {
    double direction = state_[entering] == VarState::kAtLower ? 1.0 : -1.0;
    Eigen::VectorXd w = transformed_column(entering);

    struct Ratio {
      double step;
      int row;
    };

    auto ratio_test = [&](const Eigen::VectorXd& wv, double& t_pivot, int& leave_row) {
      t_pivot = std::numeric_limits<double>::infinity();
      leave_row = -1;
      // Pass 1: tightest step.
      for (int r = 0; r < m_; ++r) {
        if (std::abs(wv[r]) <= kPivotSkipTol) continue;
        double rate = -direction * wv[r];
        int b = basic_[r];
        double t;
        if (rate < 0.0)
          t = (x_[b] - lower_[b]) / (-rate);
        else
          t = (upper_[b] - x_[b]) / rate;
        if (t < 0.0) t = 0.0;
        if (t < t_pivot) t_pivot = t;
      }
      if (leave_row == -1 && std::isfinite(t_pivot)) {
        // Pass 2: smallest variable index among ties.
        int best_col = std::numeric_limits<int>::max();
        for (int r = 0; r < m_; ++r) {
          if (std::abs(wv[r]) <= kPivotSkipTol) continue;
          double rate = -direction * wv[r];
          int b = basic_[r];
          double t;
          if (rate < 0.0)
            t = (x_[b] - lower_[b]) / (-rate);
          else
            t = (upper_[b] - x_[b]) / rate;
          if (t < 0.0) t = 0.0;
          if (t <= t_pivot + kRatioTieTol && b < best_col) {
            best_col = b;
            leave_row = r;
          }
        }
      }
    };

    double t_pivot;
    int leave_row;
    ratio_test(w, t_pivot, leave_row);

    double t_flip = upper_[entering] - lower_[entering];
    bool do_pivot = leave_row >= 0 && t_pivot <= t_flip + kRatioTieTol;

    if (do_pivot && std::abs(w[leave_row]) < kPivotAcceptTol) {
      // Tiny pivot: refresh the factorization once and retry the ratio test.
      refactorize();
      recompute_basics();
      w = transformed_column(entering);
      ratio_test(w, t_pivot, leave_row);
      do_pivot = leave_row >= 0 && t_pivot <= t_flip + kRatioTieTol;
      if (do_pivot && std::abs(w[leave_row]) < kPivotAcceptTol)
        return StepOutcome::kRejected;
    }

    double t = do_pivot ? t_pivot : t_flip;
    if (!std::isfinite(t)) return StepOutcome::kUnbounded;

    for (int r = 0; r < m_; ++r) x_[basic_[r]] -= direction * t * w[r];

    if (!do_pivot) {
      // Bound flip: the entering variable crosses to its other bound.
      if (state_[entering] == VarState::kAtLower) {
        state_[entering] = VarState::kAtUpper;
        x_[entering] = upper_[entering];
      } else {
        state_[entering] = VarState::kAtLower;
        x_[entering] = lower_[entering];
      }
      note_step_size(t);
      return StepOutcome::kMoved;
    }

    int leaving = basic_[leave_row];
    double rate = -direction * w[leave_row];
    if (rate < 0.0) {
      state_[leaving] = VarState::kAtLower;
      x_[leaving] = lower_[leaving];
    } else {
      state_[leaving] = VarState::kAtUpper;
      x_[leaving] = upper_[leaving];
    }

    double start = state_[entering] == VarState::kAtLower ? lower_[entering] : upper_[entering];
    x_[entering] = start + direction * t;
    state_[entering] = VarState::kBasic;
    basic_[leave_row] = entering;

    double pivot = w[leave_row];
    binv_.row(leave_row) /= pivot;
    for (int r = 0; r < m_; ++r) {
      if (r == leave_row) continue;
      double factor = w[r];
      if (factor != 0.0) binv_.row(r) -= factor * binv_.row(leave_row);
    }

    note_step_size(t);
    return StepOutcome::kMoved;
  }

  void note_step_size(double t) {
    if (t <= kDegenerateStep) {
      if (++degenerate_run_ >= 5 * (n_ + m_)) bland_ = true;
    } else {
      degenerate_run_ = 0;
      bland_ = false;
    }
  }

  LpSolution finish_optimal() {
    refactorize();
    recompute_basics();
    compute_duals();
    LpSolution out;
    out.status = SolveStatus::kOptimal;
    out.values.resize(n_);
    for (int j = 0; j < n_; ++j) out.values[j] = x_[j];
    out.objective_value = p_.objective.dot(out.values);
    out.row_duals = m_ > 0 ? y_ : Eigen::VectorXd(0);
    out.basis = basic_;
    out.iterations = iterations_;
    return out;
  }

  LpSolution finish_infeasible(double residual) {
    LpSolution out;
    out.status = SolveStatus::kInfeasible;
    out.infeasibility = residual;
    out.iterations = iterations_;
    return out;
  }

  LpSolution finish_unbounded() {
    LpSolution out;
    out.status = SolveStatus::kUnbounded;
    out.iterations = iterations_;
    return out;
  }

  LpSolution finish_limit() {
    LpSolution out;
    out.status = SolveStatus::kIterationLimit;
    out.iterations = iterations_;
    return out;
  }

  const LpProblem& p_;
  SolveLimits lim_;
  int n_ = 0;
  int m_ = 0;
  int max_iterations_ = 0;

  std::vector<double> lower_, upper_, x_, cost_;
  std::vector<VarState> state_;
  std::vector<int> basic_;
  std::vector<int> art_row_;
  std::vector<double> art_sign_;

  Eigen::MatrixXd binv_;
  Eigen::VectorXd y_;
  Eigen::VectorXd reduced_struct_;
  Eigen::VectorXd struct_cost_;

  bool phase_one_ = true;
  bool bland_ = false;
  int degenerate_run_ = 0;
  int iterations_ = 0;
  int pivots_since_refactor_ = 0;
};

}  // namespace

LpSolution solve(const LpProblem& problem, const SolveLimits& limits) {
  problem.validate();
  Simplex simplex(problem, limits);
  return simplex.run();
}

CertificateReport certify(const LpProblem& p, const LpSolution& s, const SolveLimits& lim) {
  if (s.status != SolveStatus::kOptimal)
    throw std::invalid_argument("certify: solution is not OPTIMAL");
  if (s.values.size() != p.num_vars())
    throw std::invalid_argument("certify: value vector length mismatch");

  const int n = p.num_vars();
  const int m = p.num_rows();
  CertificateReport rep;

  double scale = 1.0;
  for (int k = 0; k < m; ++k)
    scale = std::max({scale, std::abs(p.row_lower[k]), std::abs(p.row_upper[k])});
  for (int j = 0; j < n; ++j)
    scale = std::max({scale, std::abs(p.var_lower[j]), std::abs(p.var_upper[j])});
  const double feas_pass = 1e2 * lim.tol_feas * scale + 1e-9;

  Eigen::VectorXd act = m > 0 ? Eigen::VectorXd(p.rows * s.values) : Eigen::VectorXd();
  for (int k = 0; k < m; ++k) {
    double v = std::max({0.0, p.row_lower[k] - act[k], act[k] - p.row_upper[k]});
    rep.worst_row_violation = std::max(rep.worst_row_violation, v);
  }
  rep.rows_feasible = rep.worst_row_violation <= feas_pass;

  for (int j = 0; j < n; ++j) {
    double v = std::max({0.0, p.var_lower[j] - s.values[j], s.values[j] - p.var_upper[j]});
    rep.worst_var_violation = std::max(rep.worst_var_violation, v);
    if (s.values[j] > p.var_lower[j] + lim.fraction_tol &&
        s.values[j] < p.var_upper[j] - lim.fraction_tol)
      ++rep.fractional_count;
  }
  rep.vars_feasible = rep.worst_var_violation <= feas_pass;
  rep.vertex_ok = rep.fractional_count <= m;

  // Complementary slackness: a nonzero row dual claims its row active at the
  // matching bound.
  double dual_scale = 1.0 + (m > 0 ? s.row_duals.cwiseAbs().maxCoeff() : 0.0);
  for (int k = 0; k < m; ++k) {
    double y = s.row_duals[k];
    if (std::abs(y) <= lim.tol_opt * dual_scale) continue;
    double gap = y > 0.0 ? p.row_upper[k] - act[k] : act[k] - p.row_lower[k];
    rep.worst_complementarity = std::max(rep.worst_complementarity, std::max(0.0, gap));
  }
  rep.complementary_ok = rep.worst_complementarity <= feas_pass;

  // Stationarity via value positions: interior values need zero reduced cost,
  // values at a bound need the sign that forbids improvement.
  Eigen::VectorXd reduced = p.objective;
  if (m > 0) reduced -= p.rows.transpose() * s.row_duals;
  double obj_scale = 1.0 + p.objective.cwiseAbs().maxCoeff();
  for (int j = 0; j < n; ++j) {
    double d = reduced[j];
    double v = s.values[j];
    bool interior = v > p.var_lower[j] + lim.fraction_tol && v < p.var_upper[j] - lim.fraction_tol;
    double viol;
    if (interior)
      viol = std::abs(d);
    else if (v <= p.var_lower[j] + lim.fraction_tol && v < p.var_upper[j] - lim.fraction_tol)
      viol = std::max(0.0, d);   // at lower: d <= 0
    else if (v >= p.var_upper[j] - lim.fraction_tol && v > p.var_lower[j] + lim.fraction_tol)
      viol = std::max(0.0, -d);  // at upper: d >= 0
    else
      viol = 0.0;  // fixed variable, any reduced cost is fine
    rep.worst_stationarity = std::max(rep.worst_stationarity, viol);
  }
  rep.stationary_ok = rep.worst_stationarity <= 1e2 * lim.tol_opt * obj_scale * dual_scale + 1e-9;

  return rep;
}

void write_problem(std::ostream& out, const LpProblem& p) {
  const int n = p.num_vars();
  const int m = p.num_rows();
  out.precision(17);
  out << "maxprob-lp 1\n";
  out << "vars " << n << "\n";
  out << "rows " << m << "\n";
  out << "objective";
  for (int j = 0; j < n; ++j) out << ' ' << p.objective[j];
  out << "\nvar_lower";
  for (int j = 0; j < n; ++j) out << ' ' << p.var_lower[j];
  out << "\nvar_upper";
  for (int j = 0; j < n; ++j) out << ' ' << p.var_upper[j];
  out << '\n';
  for (int k = 0; k < m; ++k) {
    out << "row " << p.row_lower[k] << ' ' << p.row_upper[k];
    for (int j = 0; j < n; ++j) out << ' ' << p.rows(k, j);
    out << '\n';
  }
}

LpProblem read_problem(std::istream& in) {
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != "maxprob-lp" || version != 1)
    throw std::invalid_argument("lp dump: bad header");
  auto expect = [&](const char* word) {
    std::string got;
    if (!(in >> got) || got != word)
      throw std::invalid_argument(std::string("lp dump: expected '") + word + "'");
  };
  int n = 0, m = 0;
  expect("vars");
  if (!(in >> n) || n < 1) throw std::invalid_argument("lp dump: bad vars count");
  expect("rows");
  if (!(in >> m) || m < 0) throw std::invalid_argument("lp dump: bad rows count");

  LpProblem p;
  p.objective.resize(n);
  p.var_lower.resize(n);
  p.var_upper.resize(n);
  p.rows.resize(m, n);
  p.row_lower.resize(m);
  p.row_upper.resize(m);

  auto read_vec = [&](const char* word, Eigen::VectorXd& v) {
    expect(word);
    for (int j = 0; j < n; ++j)
      if (!(in >> v[j])) throw std::invalid_argument(std::string("lp dump: short ") + word);
  };
  read_vec("objective", p.objective);
  read_vec("var_lower", p.var_lower);
  read_vec("var_upper", p.var_upper);
  for (int k = 0; k < m; ++k) {
    expect("row");
    if (!(in >> p.row_lower[k] >> p.row_upper[k]))
      throw std::invalid_argument("lp dump: bad row bounds");
    for (int j = 0; j < n; ++j)
      if (!(in >> p.rows(k, j))) throw std::invalid_argument("lp dump: short row");
  }
  p.validate();
  return p;
}

}  // namespace maxprob
