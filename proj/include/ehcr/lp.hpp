#pragma once

#include <Eigen/Dense>
#include <limits>

namespace ehcr::numerics {

inline constexpr double kLpFeasibilityTol = 1e-8;
inline constexpr double kLpPivotTol = 1e-9;

/// Dense linear program in maximization form:
///
///   maximize    objective · x
///   subject to  eq_matrix · x   = eq_rhs
///               ineq_matrix · x <= ineq_rhs
///               lower <= x <= upper
///
/// Lower bounds must be finite; upper bounds may be +infinity.
struct LinearProgram {
  Eigen::VectorXd objective;
  Eigen::MatrixXd eq_matrix;
  Eigen::VectorXd eq_rhs;
  Eigen::MatrixXd ineq_matrix;
  Eigen::VectorXd ineq_rhs;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  LinearProgram() = default;
  /// Zero objective, no constraints, bounds [0, +inf).
  explicit LinearProgram(Eigen::Index num_vars);

  Eigen::Index num_vars() const { return objective.size(); }

  void add_equality(const Eigen::RowVectorXd& row, double rhs);
  void add_inequality(const Eigen::RowVectorXd& row, double rhs);

  /// Throws DomainError on shape mismatches or inverted bounds.
  void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Eigen::VectorXd x;
  double objective_value = -std::numeric_limits<double>::infinity();
};

/// Two-phase dense simplex. Dantzig pricing with a permanent switch to
/// Bland's rule after a run of degenerate pivots, and a final re-solve of
/// the optimal basis against the original constraint matrix.
LpSolution solve_lp(const LinearProgram& lp);

const char* to_string(LpStatus status);

}  // namespace ehcr::numerics
