#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "polybilliard/numerics.hpp"

namespace polybilliard {

LinearProgram::LinearProgram(int variables)
    : objective(Vec::Zero(variables)),
      eq_lhs(0, variables),
      eq_rhs(0),
      ub_lhs(0, variables),
      ub_rhs(0),
      nonnegative(static_cast<std::size_t>(variables), false) {}

namespace {

void append_row(Mat& lhs, Vec& rhs, const Vec& row, double value) {
  if (row.size() != lhs.cols()) fail(ErrorKind::InvalidInput, "LP row has wrong length");
  lhs.conservativeResize(lhs.rows() + 1, Eigen::NoChange);
  lhs.row(lhs.rows() - 1) = row.transpose();
  rhs.conservativeResize(rhs.size() + 1);
  rhs(rhs.size() - 1) = value;
}

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-11;

// Dense tableau in the form  T x = rhs, x >= 0, with an explicit basis. The
// last row holds reduced costs d_j (entering candidates have d_j > 0) and
// minus the current objective value in the rhs slot.
class Tableau {
 public:
  Tableau(Mat body, std::vector<int> basis, int pivot_cap)
      : t_(std::move(body)), basis_(std::move(basis)), cap_(pivot_cap) {}

  int rows() const { return static_cast<int>(t_.rows()) - 1; }
  int cols() const { return static_cast<int>(t_.cols()) - 1; }
  double rhs(int i) const { return t_(i, cols()); }
  double value() const { return -t_(rows(), cols()); }
  const std::vector<int>& basis() const { return basis_; }
  double entry(int i, int j) const { return t_(i, j); }

  void set_costs(const Vec& costs) {
    const int r = rows();
    t_.row(r).setZero();
    t_.row(r).head(cols()) = costs.transpose();
    for (int i = 0; i < r; ++i) {
      const double cb = costs(basis_[static_cast<std::size_t>(i)]);
      if (cb != 0.0) t_.row(r) -= cb * t_.row(i);
    }
  }

  // Runs Bland's rule over the columns with allowed[j]. Returns false when
  // the objective is unbounded.
  bool optimize(const std::vector<bool>& allowed) {
    const int r = rows();
    while (true) {
      int entering = -1;
      for (int j = 0; j < cols(); ++j) {
        if (allowed[static_cast<std::size_t>(j)] && t_(r, j) > kCostEps) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return true;
      int leaving = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < r; ++i) {
        const double a = t_(i, entering);
        if (a <= kPivotEps) continue;
        const double ratio = std::max(rhs(i), 0.0) / a;
        if (leaving < 0) {
          best_ratio = ratio;
          leaving = i;
          continue;
        }
        const double slop = 1e-12 * (1.0 + best_ratio);
        const bool tie = std::abs(ratio - best_ratio) <= slop;
        if ((!tie && ratio < best_ratio) ||
            (tie && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leaving)])) {
          best_ratio = std::min(best_ratio, ratio);
          leaving = i;
        }
      }
      if (leaving < 0) return false;
      pivot(leaving, entering);
    }
  }

  void pivot(int row, int col) {
    if (++pivots_ > cap_) fail(ErrorKind::NumericalFailure, "simplex: pivot cap exceeded");
    t_.row(row) /= t_(row, col);
    for (int i = 0; i <= rows(); ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    for (int i = 0; i < rows(); ++i) {
      if (t_(i, cols()) < 0.0 && t_(i, cols()) > -1e-13) t_(i, cols()) = 0.0;
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

 private:
  Mat t_;
  std::vector<int> basis_;
  int cap_;
  int pivots_ = 0;
};

}  // namespace

void LinearProgram::add_equality(const Vec& row, double rhs) {
  append_row(eq_lhs, eq_rhs, row, rhs);
}

void LinearProgram::add_upper_bound(const Vec& row, double rhs) {
  append_row(ub_lhs, ub_rhs, row, rhs);
}

LpSolution solve_lp(const LinearProgram& lp, const ToleranceProfile& tol) {
  const int nv = lp.variables();
  if (static_cast<int>(lp.nonnegative.size()) != nv || lp.eq_lhs.cols() != nv ||
      lp.ub_lhs.cols() != nv || lp.eq_lhs.rows() != lp.eq_rhs.size() ||
      lp.ub_lhs.rows() != lp.ub_rhs.size()) {
    fail(ErrorKind::InvalidInput, "solve_lp: malformed program");
  }
  if (!lp.objective.allFinite() || !lp.eq_lhs.allFinite() || !lp.ub_lhs.allFinite() ||
      !lp.eq_rhs.allFinite() || !lp.ub_rhs.allFinite()) {
    fail(ErrorKind::InvalidInput, "solve_lp: non-finite data");
  }

  // Column layout: structural (free variables split in two), slacks, artificials.
  std::vector<int> plus_col(static_cast<std::size_t>(nv)), minus_col(static_cast<std::size_t>(nv), -1);
  int ncol = 0;
  for (int i = 0; i < nv; ++i) {
    plus_col[static_cast<std::size_t>(i)] = ncol++;
    if (!lp.nonnegative[static_cast<std::size_t>(i)]) minus_col[static_cast<std::size_t>(i)] = ncol++;
  }
  const int n_struct = ncol;
  const int n_eq = static_cast<int>(lp.eq_lhs.rows());
  const int n_ub = static_cast<int>(lp.ub_lhs.rows());
  const int n_rows = n_eq + n_ub;
  const int slack0 = n_struct;
  const int art0 = slack0 + n_ub;
  const int total = art0 + n_rows;

  Mat body = Mat::Zero(n_rows + 1, total + 1);
  std::vector<int> basis(static_cast<std::size_t>(n_rows));
  auto fill = [&](int r, const Eigen::RowVectorXd& coeffs, double rhs, int slack) {
    for (int i = 0; i < nv; ++i) {
      body(r, plus_col[static_cast<std::size_t>(i)]) = coeffs(i);
      if (minus_col[static_cast<std::size_t>(i)] >= 0) body(r, minus_col[static_cast<std::size_t>(i)]) = -coeffs(i);
    }
    if (slack >= 0) body(r, slack) = 1.0;
    body(r, total) = rhs;
    if (rhs < 0.0) body.row(r) *= -1.0;
    const bool slack_basic = slack >= 0 && body(r, slack) > 0.0;
    body(r, art0 + r) = 1.0;
    basis[static_cast<std::size_t>(r)] = slack_basic ? slack : art0 + r;
  };
  for (int r = 0; r < n_eq; ++r) fill(r, lp.eq_lhs.row(r), lp.eq_rhs(r), -1);
  for (int r = 0; r < n_ub; ++r) fill(n_eq + r, lp.ub_lhs.row(r), lp.ub_rhs(r), slack0 + r);

  const int cap = std::max(1000, 20 * (n_rows + total));
  Tableau tab(std::move(body), std::move(basis), cap);

  // Phase 1: maximize -(sum of artificials in use).
  Vec phase1 = Vec::Zero(total);
  bool any_artificial = false;
  for (int b : tab.basis()) {
    if (b >= art0) {
      phase1(b) = -1.0;
      any_artificial = true;
    }
  }
  std::vector<bool> allowed(static_cast<std::size_t>(total), true);
  for (int j = art0; j < total; ++j) allowed[static_cast<std::size_t>(j)] = phase1(j) != 0.0;

  double rhs_scale = 1.0;
  for (int i = 0; i < n_rows; ++i) rhs_scale = std::max(rhs_scale, std::abs(tab.rhs(i)));

  if (any_artificial) {
    tab.set_costs(phase1);
    tab.optimize(allowed);
    if (tab.value() < -tol.feas * rhs_scale) return LpSolution{LpStatus::Infeasible, Vec(), 0.0};
    // Drive remaining zero-level artificials out of the basis where possible.
    for (int i = 0; i < n_rows; ++i) {
      if (tab.basis()[static_cast<std::size_t>(i)] < art0) continue;
      for (int j = 0; j < art0; ++j) {
        if (std::abs(tab.entry(i, j)) > 1e-9) {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }

  for (int j = art0; j < total; ++j) allowed[static_cast<std::size_t>(j)] = false;
  Vec phase2 = Vec::Zero(total);
  for (int i = 0; i < nv; ++i) {
    phase2(plus_col[static_cast<std::size_t>(i)]) = lp.objective(i);
    if (minus_col[static_cast<std::size_t>(i)] >= 0) phase2(minus_col[static_cast<std::size_t>(i)]) = -lp.objective(i);
  }
  tab.set_costs(phase2);
  if (!tab.optimize(allowed)) return LpSolution{LpStatus::Unbounded, Vec(), 0.0};

  Vec columns = Vec::Zero(total);
  for (int i = 0; i < n_rows; ++i) columns(tab.basis()[static_cast<std::size_t>(i)]) = std::max(tab.rhs(i), 0.0);
  Vec x(nv);
  for (int i = 0; i < nv; ++i) {
    x(i) = columns(plus_col[static_cast<std::size_t>(i)]);
    if (minus_col[static_cast<std::size_t>(i)] >= 0) x(i) -= columns(minus_col[static_cast<std::size_t>(i)]);
  }
  return LpSolution{LpStatus::Optimal, x, lp.objective.dot(x)};
}

std::optional<Placement> solve_placement(const PlacementLP& lp, const ToleranceProfile& tol) {
  const auto sol = solve_lp(lp.program, tol);
  switch (sol.status) {
    case LpStatus::Infeasible:
      return std::nullopt;
    case LpStatus::Unbounded:
      fail(ErrorKind::NumericalFailure, "placement LP is unbounded");
    case LpStatus::Optimal:
      break;
  }
  return Placement{sol.x(PlacementLP::kClearance), sol.x(PlacementLP::kScale),
                   sol.x.segment(PlacementLP::kShift, lp.dim)};
}

}  // namespace polybilliard
