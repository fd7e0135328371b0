#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace maxprob {

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

const char* to_string(SolveStatus status);

struct SolveLimits {
  int max_iterations = 0;      // 0 picks 1000 + 50*(vars+rows)
  double tol_feas = 1e-9;
  double tol_opt = 1e-9;
  double fraction_tol = 1e-7;  // a value inside (lb+tol, ub-tol) counts as fractional
};

/// Dense LP in the form
///   maximize objective . x
///   subject to row_lower <= rows * x <= row_upper,  var_lower <= x <= var_upper.
/// Equality rows are expressed as row_lower == row_upper.
struct LpProblem {
  Eigen::VectorXd objective;   // size N
  Eigen::MatrixXd rows;        // m x N
  Eigen::VectorXd row_lower;   // m
  Eigen::VectorXd row_upper;   // m
  Eigen::VectorXd var_lower;   // N
  Eigen::VectorXd var_upper;   // N

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(row_lower.size()); }

  /// Throws std::invalid_argument on non-finite entries, crossed bounds, or
  /// inconsistent dimensions.
  void validate() const;
};

/// Solved state. `values` and `row_duals` are populated only when kOptimal.
/// `basis` holds one column id per row at the final vertex: ids in [0,N) are
/// problem variables, [N,N+m) row slacks, >= N+m phase-one artificials that
/// finished basic at zero.
struct LpSolution {
  SolveStatus status = SolveStatus::kIterationLimit;
  Eigen::VectorXd values;
  double objective_value = 0.0;
  Eigen::VectorXd row_duals;
  std::vector<int> basis;
  double infeasibility = 0.0;  // phase-one residual when kInfeasible
  int iterations = 0;
};

/// Two-phase revised simplex with explicit bounded variables. Deterministic:
/// identical inputs take identical pivots and return bit-identical values.
LpSolution solve(const LpProblem& problem, const SolveLimits& limits = {});

/// Independent re-check of an optimal solution against the problem data; does
/// not reuse any solver state beyond the reported values and duals.
struct CertificateReport {
  bool rows_feasible = false;
  bool vars_feasible = false;
  bool vertex_ok = false;
  bool complementary_ok = false;
  bool stationary_ok = false;
  double worst_row_violation = 0.0;
  double worst_var_violation = 0.0;
  double worst_complementarity = 0.0;   // distance to the bound a nonzero dual claims active
  double worst_stationarity = 0.0;      // reduced-cost sign violation
  int fractional_count = 0;

  bool all_passed() const {
    return rows_feasible && vars_feasible && vertex_ok && complementary_ok &&
           stationary_ok;
  }
};

CertificateReport certify(const LpProblem& problem, const LpSolution& solution,
                          const SolveLimits& limits = {});

/// Plain-text tabular dump (one line per constraint row). Debug aid; the
/// format is readable back by read_problem but carries no stability promise.
void write_problem(std::ostream& out, const LpProblem& problem);
LpProblem read_problem(std::istream& in);

}  // namespace maxprob
