#include <cmath>
#include <limits>
#include <sstream>

#include "polybilliard/verify.hpp"

namespace polybilliard {

namespace {

// Slack allowed in the cone-section equalities, and the smallest coefficient
// counted as "in the support" of that section.
constexpr double kSectionSlack = 1e-7;
constexpr double kSupportFloor = 1e-4;

Mat stack(const std::vector<Vec>& vs, int rows) {
  Mat m(rows, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t k = 0; k < vs.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = vs[k];
  return m;
}

}  // namespace

bool is_regular(const Polytope& p, const std::vector<Vec>& points, const ToleranceProfile& tol) {
  for (const auto& x : points) {
    if (x.size() != p.dim()) fail(ErrorKind::InvalidInput, "is_regular: dimension mismatch");
    if (locate(p, x, tol) != PointLocation::Boundary) {
      fail(ErrorKind::PreconditionViolation, "is_regular: point is not on the boundary");
    }
    if (active_facets(p, x, tol).size() != 1) return false;
  }
  return true;
}

VerificationReport verify_billiard(const Polytope& p, const std::vector<Vec>& points, const ToleranceProfile& tol) {
  const auto m = points.size();
  if (m < 2) fail(ErrorKind::InvalidInput, "verify_billiard: need at least two points");
  const Trajectory traj = make_trajectory(p, points, tol);

  VerificationReport r;
  r.length = traj.length;
  bool ok = true;
  bool on_boundary = true;
  const double dist_tol = tol.feas * p.diameter();

  for (std::size_t j = 0; j < m; ++j) {
    PointCheck pc;
    pc.active = traj.active_facets[j];
    pc.seg_length = traj.seg_lengths[j];
    pc.direction = traj.directions[j];
    if (locate(p, points[j], tol) != PointLocation::Boundary) {
      on_boundary = false;
      ok = false;
      r.notes.push_back("point " + std::to_string(j + 1) + " is not on the boundary");
      pc.cone_residual = std::numeric_limits<double>::infinity();
      r.per_point.push_back(std::move(pc));
      continue;
    }
    const Vec& incoming = traj.directions[(j + m - 1) % m];
    const Vec& outgoing = traj.directions[j];
    const Vec turn = incoming - outgoing;
    if (m > 2 && turn.norm() <= tol.feas) {
      ok = false;
      r.notes.push_back("point " + std::to_string(j + 1) + " lies on the segment joining its neighbours");
    }
    const Mat gens = stack(normal_cone_generators(p, points[j], tol), p.dim());
    pc.cone_residual = nnls(gens, turn, tol).residual;
    if (pc.cone_residual > tol.feas * std::max(1.0, turn.norm())) {
      ok = false;
      std::ostringstream os;
      os << "reflection law fails at point " << j + 1 << " (residual " << pc.cone_residual << ")";
      r.notes.push_back(os.str());
    }
    r.per_point.push_back(std::move(pc));
  }

  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = i + 1; k < m; ++k) {
      if ((points[i] - points[k]).norm() <= dist_tol) {
        ok = false;
        r.notes.push_back("points " + std::to_string(i + 1) + " and " + std::to_string(k + 1) + " coincide");
      }
    }
  }

  r.valid_billiard = ok;
  if (on_boundary) {
    r.regular = is_regular(p, points, tol);
    r.in_FT = !can_translate_into_interior(p, points, tol).translatable;
    if (!r.in_FT) r.notes.push_back("points can be translated into the interior");
  }
  if (ok) {
    Trajectory checked = traj;
    checked.regular = r.regular;
    const auto mc = check_minimality_conditions(p, checked, tol);
    r.theorem1_ok = mc.dim_v_ok && mc.cone_dim_ok;
    if (!*r.theorem1_ok) r.notes.push_back(mc.details);
  }
  return r;
}

MinimalityCheck check_minimality_conditions(const Polytope& p, const Trajectory& t, const ToleranceProfile& tol) {
  const int n = p.dim();
  const int m = t.bounces();
  MinimalityCheck out;
  if (m < 2) fail(ErrorKind::InvalidInput, "check_minimality_conditions: need at least two points");

  ToleranceProfile loose = tol;
  loose.rank_rel = std::max(tol.rank_rel, kSectionSlack);

  Mat centered(n, m);
  for (int j = 0; j < m; ++j) centered.col(j) = t.points[static_cast<std::size_t>(j)] - t.points[0];
  const Mat v0 = column_span(centered, loose);
  out.dim_v = static_cast<int>(v0.cols());
  out.dim_v_ok = out.dim_v == m - 1;
  const Mat w = null_space(v0.transpose(), loose, 1.0);  // basis of the orthogonal complement

  std::ostringstream details;
  details << "dim V = " << out.dim_v << " (m - 1 = " << m - 1 << ")";
  out.cone_dim_ok = true;
  for (int j = 0; j < m; ++j) {
    const Mat g = stack(normal_cone_generators(p, t.points[static_cast<std::size_t>(j)], tol), n);
    const int k = static_cast<int>(g.cols());
    const Mat a = w.transpose() * g;

    // Generators that carry weight in some element of the section cone.
    std::vector<int> support;
    for (int target = 0; target < k; ++target) {
      LinearProgram lp(k);
      lp.objective(target) = 1.0;
      for (int c = 0; c < k; ++c) lp.nonnegative[static_cast<std::size_t>(c)] = true;
      lp.add_upper_bound(Vec::Ones(k), 1.0);
      for (int row = 0; row < a.rows(); ++row) {
        lp.add_upper_bound(a.row(row).transpose(), kSectionSlack);
        lp.add_upper_bound(-a.row(row).transpose(), kSectionSlack);
      }
      const auto sol = solve_lp(lp, tol);
      if (sol.status == LpStatus::Optimal && sol.value > kSupportFloor) support.push_back(target);
    }

    int dim = 0;
    if (!support.empty()) {
      Mat gj(n, static_cast<Eigen::Index>(support.size()));
      Mat aj(a.rows(), static_cast<Eigen::Index>(support.size()));
      for (std::size_t s = 0; s < support.size(); ++s) {
        gj.col(static_cast<Eigen::Index>(s)) = g.col(support[s]);
        aj.col(static_cast<Eigen::Index>(s)) = a.col(support[s]);
      }
      const Mat kernel = aj.rows() == 0 ? Mat(Mat::Identity(gj.cols(), gj.cols())) : null_space(aj, loose, 1.0);
      dim = kernel.cols() == 0 ? 0 : matrix_rank(gj * kernel, loose);
    }
    out.cone_dims.push_back(dim);
    if (dim != 1) out.cone_dim_ok = false;
    details << "; cone " << j + 1 << " dim " << dim;
  }
  out.details = details.str();
  return out;
}

Trajectory translate_to_nonregular(const Polytope& p, const Trajectory& t, const ToleranceProfile& tol) {
  const int n = p.dim();
  const int m = t.bounces();
  if (m > n) fail(ErrorKind::PreconditionViolation, "translate_to_nonregular: needs at most dim bounces");
  if (!is_regular(p, t.points, tol)) fail(ErrorKind::PreconditionViolation, "translate_to_nonregular: not regular");

  std::vector<Vec> normals;
  for (const auto& x : t.points) normals.push_back(p.facet(active_facets(p, x, tol).front()).normal);
  const Mat q = column_span(stack(normals, n), tol);

  // First coordinate axis with a component orthogonal to every bounce normal.
  Vec d;
  for (int i = 0; i < n && d.size() == 0; ++i) {
    Vec e = Vec::Unit(n, i);
    e -= q * (q.transpose() * e);
    if (e.norm() > 1e-6) d = e.normalized();
  }
  if (d.size() == 0) fail(ErrorKind::NumericalFailure, "translate_to_nonregular: no tangent direction");

  auto ray_step = [&](const Vec& dir) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& x : t.points) {
      const auto active = active_facets(p, x, tol);
      for (int i = 0; i < p.facet_count(); ++i) {
        if (i == active.front()) continue;
        const double rate = p.facet(i).normal.dot(dir);
        if (rate <= 1e-12) continue;
        best = std::min(best, std::max(0.0, p.facet(i).offset - p.facet(i).normal.dot(x)) / rate);
      }
    }
    return best;
  };

  for (const Vec& dir : {Vec(d), Vec(-d)}) {
    const double step = ray_step(dir);
    if (!std::isfinite(step)) continue;
    std::vector<Vec> moved;
    for (const auto& x : t.points) moved.push_back(x + step * dir);
    return make_trajectory(p, moved, tol);
  }
  fail(ErrorKind::NumericalFailure, "translate_to_nonregular: no bounded step along either ray");
}

}  // namespace polybilliard
