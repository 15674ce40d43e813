#include "ehcr/lp.hpp"

#include <cmath>
#include <vector>

#include "ehcr/error.hpp"

namespace ehcr::numerics {

namespace {

constexpr double kOptimalityTol = 1e-9;
constexpr int kDegenerateStreakForBland = 50;
constexpr int kIterationCap = 100000;

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Standard form: A y = b, y >= 0, with y = [structural shifted by lower | slacks].
struct StandardForm {
  RowMatrix a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  std::vector<bool> has_slack;  // row owns a +1 slack column
  Eigen::Index num_structural = 0;
};

StandardForm to_standard_form(const LinearProgram& lp) {
  const Eigen::Index n = lp.num_vars();
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!std::isfinite(lp.lower[k])) throw DomainError("solve_lp: lower bounds must be finite");
  }

  std::vector<Eigen::Index> upper_rows;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (std::isfinite(lp.upper[k])) upper_rows.push_back(k);
  }
  const Eigen::Index m_eq = lp.eq_matrix.rows();
  const Eigen::Index m_le = lp.ineq_matrix.rows() + static_cast<Eigen::Index>(upper_rows.size());
  const Eigen::Index m = m_eq + m_le;

  StandardForm sf;
  sf.num_structural = n;
  sf.a = RowMatrix::Zero(m, n + m_le);
  sf.b = Eigen::VectorXd::Zero(m);
  sf.c = Eigen::VectorXd::Zero(n + m_le);
  sf.c.head(n) = lp.objective;
  sf.has_slack.assign(static_cast<size_t>(m), false);

  for (Eigen::Index r = 0; r < m_eq; ++r) {
    sf.a.row(r).head(n) = lp.eq_matrix.row(r);
    sf.b[r] = lp.eq_rhs[r] - lp.eq_matrix.row(r).dot(lp.lower);
  }
  Eigen::Index r = m_eq;
  Eigen::Index slack = n;
  for (Eigen::Index i = 0; i < lp.ineq_matrix.rows(); ++i, ++r, ++slack) {
    sf.a.row(r).head(n) = lp.ineq_matrix.row(i);
    sf.a(r, slack) = 1.0;
    sf.b[r] = lp.ineq_rhs[i] - lp.ineq_matrix.row(i).dot(lp.lower);
    sf.has_slack[static_cast<size_t>(r)] = true;
  }
  for (Eigen::Index k : upper_rows) {
    sf.a(r, k) = 1.0;
    sf.a(r, slack) = 1.0;
    sf.b[r] = lp.upper[k] - lp.lower[k];
    sf.has_slack[static_cast<size_t>(r)] = true;
    ++r;
    ++slack;
  }
  return sf;
}

class Tableau {
 public:
  explicit Tableau(const StandardForm& sf)
      : num_cols_(sf.a.cols()), m_(sf.a.rows()) {
    // Columns: [standard-form columns | one artificial per row | rhs].
    t_ = RowMatrix::Zero(m_, num_cols_ + m_ + 1);
    t_.leftCols(num_cols_) = sf.a;
    t_.col(rhs_col()) = sf.b;
    basis_.assign(static_cast<size_t>(m_), -1);
    for (Eigen::Index r = 0; r < m_; ++r) {
      const bool negate = t_(r, rhs_col()) < 0.0;
      if (negate) t_.row(r) *= -1.0;
      if (sf.has_slack[static_cast<size_t>(r)] && !negate) {
        // The slack column of this row is the unique +1 entry among slacks.
        for (Eigen::Index j = sf.num_structural; j < num_cols_; ++j) {
          if (sf.a(r, j) == 1.0) {
            basis_[static_cast<size_t>(r)] = j;
            break;
          }
        }
      } else {
        t_(r, artificial(r)) = 1.0;
        basis_[static_cast<size_t>(r)] = artificial(r);
      }
    }
    allowed_.assign(static_cast<size_t>(num_cols_ + m_), false);
    for (Eigen::Index j = 0; j < num_cols_; ++j) allowed_[static_cast<size_t>(j)] = true;
  }

  bool needs_phase_one() const {
    for (Eigen::Index b : basis_) {
      if (is_artificial(b)) return true;
    }
    return false;
  }

  // Returns the phase-one optimum, i.e. -(sum of artificials).
  double phase_one() {
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(num_cols_ + m_);
    for (Eigen::Index r = 0; r < m_; ++r) cost[artificial(r)] = -1.0;
    if (!iterate(cost)) throw NumericError("solve_lp: phase one reported unbounded");
    return objective_value(cost);
  }

  // Pivots zero-level artificials out of the basis; rows where that is
  // impossible are linearly dependent and are dropped.
  void drive_out_artificials() {
    for (Eigen::Index r = 0; r < m_;) {
      if (!is_artificial(basis_[static_cast<size_t>(r)])) {
        ++r;
        continue;
      }
      Eigen::Index best = -1;
      double best_abs = kLpPivotTol;
      for (Eigen::Index j = 0; j < num_cols_; ++j) {
        if (std::abs(t_(r, j)) > best_abs) {
          best_abs = std::abs(t_(r, j));
          best = j;
        }
      }
      if (best >= 0) {
        pivot(r, best);
        ++r;
      } else {
        remove_row(r);
      }
    }
  }

  // Returns false when the objective is unbounded.
  bool phase_two(const Eigen::VectorXd& c) {
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(num_cols_ + m_);
    cost.head(num_cols_) = c;
    return iterate(cost);
  }

  const std::vector<Eigen::Index>& basis() const { return basis_; }
  const std::vector<Eigen::Index>& kept_rows() const { return kept_rows_; }
  double rhs(Eigen::Index r) const { return t_(r, rhs_col()); }
  Eigen::Index rows() const { return m_; }
  bool is_artificial(Eigen::Index col) const { return col >= num_cols_; }

  void init_kept_rows() {
    kept_rows_.resize(static_cast<size_t>(m_));
    for (Eigen::Index r = 0; r < m_; ++r) kept_rows_[static_cast<size_t>(r)] = r;
  }

 private:
  Eigen::Index artificial(Eigen::Index r) const { return num_cols_ + r; }
  Eigen::Index rhs_col() const { return t_.cols() - 1; }

  double objective_value(const Eigen::VectorXd& cost) const {
    double v = 0.0;
    for (Eigen::Index r = 0; r < m_; ++r) v += cost[basis_[static_cast<size_t>(r)]] * rhs(r);
    return v;
  }

  void pivot(Eigen::Index r, Eigen::Index col) {
    t_.row(r) /= t_(r, col);
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[static_cast<size_t>(r)] = col;
  }

  void remove_row(Eigen::Index r) {
    const Eigen::Index last = m_ - 1;
    if (r != last) t_.row(r).swap(t_.row(last));
    std::swap(basis_[static_cast<size_t>(r)], basis_[static_cast<size_t>(last)]);
    std::swap(kept_rows_[static_cast<size_t>(r)], kept_rows_[static_cast<size_t>(last)]);
    t_.conservativeResize(last, Eigen::NoChange);
    basis_.pop_back();
    kept_rows_.pop_back();
    m_ = last;
  }

  bool iterate(const Eigen::VectorXd& cost) {
    bool bland = false;
    int degenerate_streak = 0;
    for (int iter = 0; iter < kIterationCap; ++iter) {
      // Reduced costs d_j = c_j - c_B · column_j.
      Eigen::RowVectorXd reduced = cost.transpose();
      for (Eigen::Index r = 0; r < m_; ++r) {
        const double cb = cost[basis_[static_cast<size_t>(r)]];
        if (cb != 0.0) reduced -= cb * t_.row(r).head(num_cols_ + m_);
      }

      Eigen::Index enter = -1;
      double best = kOptimalityTol;
      for (Eigen::Index j = 0; j < num_cols_ + m_; ++j) {
        if (!allowed_[static_cast<size_t>(j)]) continue;
        if (reduced[j] > best) {
          enter = j;
          if (bland) break;
          best = reduced[j];
        }
      }
      if (enter < 0) return true;

      Eigen::Index leave = -1;
      double min_ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index r = 0; r < m_; ++r) {
        const double coef = t_(r, enter);
        if (coef <= kLpPivotTol) continue;
        const double ratio = std::max(rhs(r), 0.0) / coef;
        const bool tie = leave >= 0 && std::abs(ratio - min_ratio) <= 1e-12 * (1.0 + min_ratio);
        if (tie) {
          const bool better = bland ? basis_[static_cast<size_t>(r)] < basis_[static_cast<size_t>(leave)]
                                    : coef > t_(leave, enter);
          if (better) leave = r;
        } else if (ratio < min_ratio) {
          min_ratio = ratio;
          leave = r;
        }
      }
      if (leave < 0) return false;

      if (min_ratio <= 1e-12) {
        if (++degenerate_streak > kDegenerateStreakForBland) bland = true;
      } else {
        degenerate_streak = 0;
      }
      pivot(leave, enter);
    }
    throw NumericError("solve_lp: iteration cap exceeded");
  }

  RowMatrix t_;
  Eigen::Index num_cols_;
  Eigen::Index m_;
  std::vector<Eigen::Index> basis_;
  std::vector<Eigen::Index> kept_rows_;
  std::vector<bool> allowed_;
};

double residual_norm(const StandardForm& sf, const Eigen::VectorXd& y) {
  if (sf.a.rows() == 0) return 0.0;
  return (sf.a * y - sf.b).lpNorm<Eigen::Infinity>();
}

}  // namespace

LinearProgram::LinearProgram(Eigen::Index num_vars)
    : objective(Eigen::VectorXd::Zero(num_vars)),
      eq_matrix(0, num_vars),
      eq_rhs(0),
      ineq_matrix(0, num_vars),
      ineq_rhs(0),
      lower(Eigen::VectorXd::Zero(num_vars)),
      upper(Eigen::VectorXd::Constant(num_vars, std::numeric_limits<double>::infinity())) {}

void LinearProgram::add_equality(const Eigen::RowVectorXd& row, double rhs) {
  if (row.size() != num_vars()) throw DomainError("add_equality: row length mismatch");
  eq_matrix.conservativeResize(eq_matrix.rows() + 1, num_vars());
  eq_matrix.row(eq_matrix.rows() - 1) = row;
  eq_rhs.conservativeResize(eq_rhs.size() + 1);
  eq_rhs[eq_rhs.size() - 1] = rhs;
}

void LinearProgram::add_inequality(const Eigen::RowVectorXd& row, double rhs) {
  if (row.size() != num_vars()) throw DomainError("add_inequality: row length mismatch");
  ineq_matrix.conservativeResize(ineq_matrix.rows() + 1, num_vars());
  ineq_matrix.row(ineq_matrix.rows() - 1) = row;
  ineq_rhs.conservativeResize(ineq_rhs.size() + 1);
  ineq_rhs[ineq_rhs.size() - 1] = rhs;
}

void LinearProgram::validate() const {
  const Eigen::Index n = num_vars();
  if (eq_matrix.cols() != n && eq_matrix.rows() > 0)
    throw DomainError("LinearProgram: equality matrix column count differs from objective");
  if (ineq_matrix.cols() != n && ineq_matrix.rows() > 0)
    throw DomainError("LinearProgram: inequality matrix column count differs from objective");
  if (eq_matrix.rows() != eq_rhs.size()) throw DomainError("LinearProgram: equality rhs length");
  if (ineq_matrix.rows() != ineq_rhs.size()) throw DomainError("LinearProgram: inequality rhs length");
  if (lower.size() != n || upper.size() != n) throw DomainError("LinearProgram: bound vector length");
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!(lower[k] <= upper[k])) throw DomainError("LinearProgram: lower bound exceeds upper bound");
  }
}

LpSolution solve_lp(const LinearProgram& lp) {
  lp.validate();
  const StandardForm sf = to_standard_form(lp);
  const Eigen::Index n = sf.num_structural;

  Tableau tab(sf);
  tab.init_kept_rows();
  LpSolution sol;
  if (tab.needs_phase_one()) {
    const double infeasibility = -tab.phase_one();
    if (infeasibility > kLpFeasibilityTol) {
      sol.status = LpStatus::infeasible;
      return sol;
    }
    tab.drive_out_artificials();
  }
  if (!tab.phase_two(sf.c)) {
    sol.status = LpStatus::unbounded;
    sol.objective_value = std::numeric_limits<double>::infinity();
    return sol;
  }

  Eigen::VectorXd y = Eigen::VectorXd::Zero(sf.a.cols());
  for (Eigen::Index r = 0; r < tab.rows(); ++r) {
    y[tab.basis()[static_cast<size_t>(r)]] = std::max(tab.rhs(r), 0.0);
  }

  // Re-solve the final basis against the untouched constraint rows to strip
  // rounding accumulated over the pivots; keep whichever is more accurate.
  if (tab.rows() > 0) {
    Eigen::MatrixXd basis_matrix(tab.rows(), tab.rows());
    Eigen::VectorXd rhs(tab.rows());
    for (Eigen::Index r = 0; r < tab.rows(); ++r) {
      const Eigen::Index orig = tab.kept_rows()[static_cast<size_t>(r)];
      rhs[r] = sf.b[orig];
      for (Eigen::Index k = 0; k < tab.rows(); ++k) {
        basis_matrix(r, k) = sf.a(orig, tab.basis()[static_cast<size_t>(k)]);
      }
    }
    const Eigen::VectorXd xb = basis_matrix.fullPivLu().solve(rhs);
    Eigen::VectorXd polished = Eigen::VectorXd::Zero(sf.a.cols());
    bool finite = xb.allFinite();
    for (Eigen::Index k = 0; finite && k < tab.rows(); ++k) {
      polished[tab.basis()[static_cast<size_t>(k)]] = std::max(xb[k], 0.0);
    }
    if (finite && residual_norm(sf, polished) < residual_norm(sf, y)) y = polished;
  }

  sol.status = LpStatus::optimal;
  sol.x = lp.lower + y.head(n);
  sol.objective_value = lp.objective.dot(sol.x);
  return sol;
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "unknown";
}

}  // namespace ehcr::numerics
