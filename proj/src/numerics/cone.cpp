#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "polybilliard/numerics.hpp"

namespace polybilliard {

namespace {

Vec least_squares_on(const Mat& a, const Vec& b, const std::vector<int>& cols) {
  Mat sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(cols[k]);
  return sub.completeOrthogonalDecomposition().solve(b);
}

}  // namespace

NnlsResult nnls(const Mat& a, const Vec& b, const ToleranceProfile& /*tol*/) {
  if (a.rows() != b.size()) fail(ErrorKind::InvalidInput, "nnls: dimension mismatch");
  if (!a.allFinite() || !b.allFinite()) fail(ErrorKind::InvalidInput, "nnls: non-finite input");
  const auto n = a.cols();
  NnlsResult out{Vec::Zero(n), b.norm()};
  if (n == 0) return out;

  const double eps = 1e-13 * (1.0 + a.norm() * (1.0 + b.norm()));
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  Vec& x = out.x;
  const int cap = 100 * static_cast<int>(a.rows() + n);
  int iterations = 0;

  while (true) {
    Vec w = a.transpose() * (b - a * x);
    int entering = -1;
    double best = eps;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w(j) > best) {
        best = w(j);
        entering = static_cast<int>(j);
      }
    }
    if (entering < 0) break;
    passive[static_cast<std::size_t>(entering)] = true;

    bool stalled = false;
    for (bool first = true;; first = false) {
      if (++iterations > cap) fail(ErrorKind::NumericalFailure, "nnls: iteration cap exceeded");
      std::vector<int> cols;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)]) cols.push_back(static_cast<int>(j));
      }
      Vec z_sub = least_squares_on(a, b, cols);
      Vec z = Vec::Zero(n);
      for (std::size_t k = 0; k < cols.size(); ++k) z(cols[k]) = z_sub(static_cast<Eigen::Index>(k));

      bool all_positive = true;
      for (int j : cols) {
        if (z(j) <= 0.0) all_positive = false;
      }
      if (all_positive) {
        x = z;
        break;
      }
      // The freshly added column cannot enter; its gradient was round-off.
      if (first && z(entering) <= 0.0) {
        passive[static_cast<std::size_t>(entering)] = false;
        stalled = true;
        break;
      }
      double alpha = std::numeric_limits<double>::infinity();
      for (int j : cols) {
        if (z(j) <= 0.0) alpha = std::min(alpha, x(j) / (x(j) - z(j)));
      }
      x += alpha * (z - x);
      for (int j : cols) {
        if (x(j) <= eps) {
          x(j) = 0.0;
          passive[static_cast<std::size_t>(j)] = false;
        }
      }
    }
    if (stalled) break;
  }
  out.residual = (a * x - b).norm();
  return out;
}

Vec project_polyhedral_cone(const Vec& c, const Mat& ineq_normals, const Mat& basis,
                            const ToleranceProfile& tol) {
  const auto n = c.size();
  if (basis.rows() != n || (ineq_normals.cols() > 0 && ineq_normals.rows() != n)) {
    fail(ErrorKind::InvalidInput, "project_polyhedral_cone: dimension mismatch");
  }
  if (basis.cols() == 0) return Vec::Zero(n);
  // Work in basis coordinates y; the cone is {y : G y >= 0} with G = A^T B.
  const Vec y0 = basis.transpose() * c;
  if (ineq_normals.cols() == 0) return basis * y0;
  const Mat g = ineq_normals.transpose() * basis;
  // Dual: y = y0 + G^T mu with mu = argmin_{mu >= 0} ||G^T mu + y0||.
  const auto dual = nnls(g.transpose(), -y0, tol);
  const Vec y = y0 + g.transpose() * dual.x;
  return basis * y;
}

std::optional<ConeBallSolution> max_linear_over_cone_ball(const ConeBallProblem& p,
                                                          const ToleranceProfile& tol) {
  const auto n = p.objective.size();
  const bool ineq_ok = p.ineq_normals.cols() == 0 || p.ineq_normals.rows() == n;
  const bool eq_ok = p.eq_matrix.rows() == 0 || p.eq_matrix.cols() == n;
  if (n == 0 || !ineq_ok || !eq_ok) {
    fail(ErrorKind::InvalidInput, "max_linear_over_cone_ball: inconsistent dimensions");
  }
  const Mat basis = p.eq_matrix.rows() == 0 ? Mat(Mat::Identity(n, n))
                                            : null_space(p.eq_matrix, tol, 1.0);
  // max <c,x> over K ∩ ball equals ||proj_K(c)||, attained at the normalized projection.
  const Vec proj = project_polyhedral_cone(p.objective, p.ineq_normals, basis, tol);
  const double value = proj.norm();
  if (!(value > tol.feas)) return std::nullopt;
  return ConeBallSolution{proj / value, value};
}

}  // namespace polybilliard
