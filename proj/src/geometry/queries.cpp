#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <numbers>

#include "polybilliard/geometry.hpp"

namespace polybilliard {

std::vector<int> active_facets(const Polytope& p, const Vec& x, const ToleranceProfile& tol) {
  if (x.size() != p.dim()) fail(ErrorKind::InvalidInput, "active_facets: dimension mismatch");
  const double on_tol = tol.feas * p.diameter();
  std::vector<int> out;
  for (int i = 0; i < p.facet_count(); ++i) {
    if (std::abs(p.facet(i).normal.dot(x) - p.facet(i).offset) <= on_tol) out.push_back(i);
  }
  return out;
}

double max_slack_violation(const Polytope& p, const Vec& x) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& f : p.facets()) worst = std::max(worst, f.normal.dot(x) - f.offset);
  return worst;
}

PointLocation locate(const Polytope& p, const Vec& x, const ToleranceProfile& tol) {
  const double v = max_slack_violation(p, x);
  const double on_tol = tol.feas * p.diameter();
  if (v > on_tol) return PointLocation::Exterior;
  if (v < -on_tol) return PointLocation::Interior;
  return PointLocation::Boundary;
}

std::vector<Vec> normal_cone_generators(const Polytope& p, const Vec& x, const ToleranceProfile& tol) {
  if (locate(p, x, tol) != PointLocation::Boundary) {
    fail(ErrorKind::PreconditionViolation, "normal_cone_generators: point is not on the boundary");
  }
  std::vector<Vec> out;
  for (int i : active_facets(p, x, tol)) out.push_back(p.facet(i).normal);
  return out;
}

std::vector<DihedralAngle> dihedral_angles(const Polytope& p, const ToleranceProfile& tol) {
  std::vector<DihedralAngle> out;
  const int n = p.dim();
  const auto& inc = p.incidence();
  for (int i = 0; i < p.facet_count(); ++i) {
    for (int j = i + 1; j < p.facet_count(); ++j) {
      std::vector<int> shared;
      std::set_intersection(inc[static_cast<std::size_t>(i)].begin(), inc[static_cast<std::size_t>(i)].end(),
                            inc[static_cast<std::size_t>(j)].begin(), inc[static_cast<std::size_t>(j)].end(),
                            std::back_inserter(shared));
      if (static_cast<int>(shared.size()) < n - 1 || shared.empty()) continue;
      Mat diffs(n, static_cast<Eigen::Index>(shared.size()) - 1);
      for (std::size_t k = 1; k < shared.size(); ++k) {
        diffs.col(static_cast<Eigen::Index>(k - 1)) =
            p.vertices()[static_cast<std::size_t>(shared[k])] - p.vertices()[static_cast<std::size_t>(shared[0])];
      }
      if (matrix_rank(diffs, tol) != n - 2) continue;
      // Inward normals are -u; their inner product equals <u_i, u_j>.
      const double c = std::clamp(p.facet(i).normal.dot(p.facet(j).normal), -1.0, 1.0);
      out.push_back({i, j, std::numbers::pi - std::acos(c)});
    }
  }
  return out;
}

AcuteReport is_acute(const Polytope& p, const ToleranceProfile& tol) {
  AcuteReport r{true, 0.0};
  for (const auto& a : dihedral_angles(p, tol)) {
    r.angle_sum += a.angle;
    if (!(a.angle > tol.feas && a.angle < std::numbers::pi / 2 - tol.feas)) r.acute = false;
  }
  return r;
}

TranslationTest can_translate_into_interior(const Polytope& p, const std::vector<Vec>& points,
                                            const ToleranceProfile& tol) {
  if (points.empty()) fail(ErrorKind::PreconditionViolation, "can_translate_into_interior: no points");
  const int n = p.dim();
  // Variables (delta, t): maximize delta s.t. <u_i, p_j + t> + delta <= b_i.
  LinearProgram lp(n + 1);
  lp.objective(0) = 1.0;
  for (const auto& x : points) {
    if (x.size() != n) fail(ErrorKind::InvalidInput, "can_translate_into_interior: dimension mismatch");
    for (const auto& f : p.facets()) {
      Vec row(n + 1);
      row(0) = 1.0;
      row.tail(n) = f.normal;
      lp.add_upper_bound(row, f.offset - f.normal.dot(x));
    }
  }
  const auto sol = solve_lp(lp, tol);
  if (sol.status != LpStatus::Optimal) {
    fail(ErrorKind::NumericalFailure, "can_translate_into_interior: translation LP did not solve");
  }
  TranslationTest out;
  out.margin = sol.x(0);
  out.translatable = out.margin > tol.feas;
  if (out.translatable) out.witness = sol.x.tail(n);
  return out;
}

ChebyshevBall chebyshev_ball(const std::vector<Halfspace>& halfspaces, int dim, const ToleranceProfile& tol) {
  // Variables (r, c): maximize r s.t. <u_i, c> + r ||u_i|| <= b_i.
  LinearProgram lp(dim + 1);
  lp.objective(0) = 1.0;
  for (const auto& h : halfspaces) {
    Vec row(dim + 1);
    row(0) = h.normal.norm();
    row.tail(dim) = h.normal;
    lp.add_upper_bound(row, h.offset);
  }
  const auto sol = solve_lp(lp, tol);
  if (sol.status == LpStatus::Infeasible) return ChebyshevBall{Vec::Zero(dim), -1.0};
  if (sol.status == LpStatus::Unbounded) {
    return ChebyshevBall{Vec::Zero(dim), std::numeric_limits<double>::infinity()};
  }
  return ChebyshevBall{sol.x.tail(dim), sol.x(0)};
}

Vec interior_point(const Polytope& p, const ToleranceProfile& tol) {
  return chebyshev_ball(p.facets(), p.dim(), tol).center;
}

Trajectory make_trajectory(const Polytope& p, const std::vector<Vec>& points, const ToleranceProfile& tol) {
  const auto m = points.size();
  if (m < 2) fail(ErrorKind::InvalidInput, "trajectory needs at least two points");
  Trajectory t;
  t.points = points;
  t.regular = true;
  for (std::size_t j = 0; j < m; ++j) {
    if (points[j].size() != p.dim()) fail(ErrorKind::InvalidInput, "trajectory point has wrong dimension");
    const Vec step = points[(j + 1) % m] - points[j];
    const double len = step.norm();
    if (!(len > tol.feas * p.diameter())) {
      fail(ErrorKind::InvalidInput, "trajectory has coincident consecutive points");
    }
    t.directions.push_back(step / len);
    t.seg_lengths.push_back(len);
    t.length += len;
    t.active_facets.push_back(active_facets(p, points[j], tol));
    if (t.active_facets.back().size() != 1) t.regular = false;
  }
  return t;
}

}  // namespace polybilliard
