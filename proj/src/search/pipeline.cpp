#include <cmath>
#include <set>
#include <sstream>

#include "polybilliard/search.hpp"
#include "polybilliard/verify.hpp"

namespace polybilliard {

NormalPropagation propagate_normals(const Vec& first, const std::vector<Vec>& reflectors) {
  NormalPropagation out;
  Vec n = first;
  for (const auto& u : reflectors) {
    out.directions.push_back(n);
    const double mu = 2.0 * n.dot(u);
    out.multipliers.push_back(mu);
    n = n - mu * u;
  }
  out.closure_residual = (n - first).norm();
  return out;
}

std::vector<Vec> build_closed_line(const std::vector<Vec>& directions, const std::vector<double>& weights,
                                   const ToleranceProfile& tol) {
  if (directions.empty() || directions.size() != weights.size()) {
    fail(ErrorKind::InvalidInput, "build_closed_line: need one weight per direction");
  }
  const auto n = directions.front().size();
  std::vector<Vec> out;
  Vec cursor = Vec::Zero(n);
  double scale = 0.0;
  for (std::size_t j = 0; j < directions.size(); ++j) {
    if (!(weights[j] > 0.0)) fail(ErrorKind::PreconditionViolation, "build_closed_line: weights must be positive");
    out.push_back(cursor);
    cursor += weights[j] * directions[j];
    scale += weights[j] * directions[j].norm();
  }
  if (cursor.norm() > tol.feas * std::max(1.0, scale)) {
    fail(ErrorKind::PreconditionViolation, "build_closed_line: weighted directions do not close");
  }
  return out;
}

namespace {

CandidateResult reject(const FacetTuple& t, Stage stage, std::string detail) {
  return CandidateResult{t, stage, std::nullopt, std::move(detail)};
}

Mat columns(const std::vector<Vec>& vs) {
  Mat m(vs.front().size(), static_cast<Eigen::Index>(vs.size()));
  for (std::size_t j = 0; j < vs.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = vs[j];
  return m;
}

std::vector<double> to_std(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

void check_tuple(const Polytope& p, const FacetTuple& t) {
  std::set<int> seen;
  for (int idx : t.indices) {
    if (idx < 0 || idx >= p.facet_count()) fail(ErrorKind::InvalidInput, "tuple references unknown facet");
    if (!seen.insert(idx).second) fail(ErrorKind::InvalidInput, "tuple repeats a facet");
  }
  if (t.size() < 2) fail(ErrorKind::InvalidInput, "tuple needs at least two facets");
}

}  // namespace

std::variant<DirectionSolution, CandidateResult> solve_directions(const Polytope& p, const FacetTuple& t,
                                                                  const ToleranceProfile& tol) {
  check_tuple(p, t);
  const int m = t.size();
  const int n = p.dim();
  DirectionSolution d;

  // (1) u_j is the normal of the facet hit at the end of segment j.
  for (int j = 0; j < m; ++j) d.reflectors.push_back(p.facet(t[(j + 1) % m]).normal);
  const Mat u = columns(d.reflectors);
  const int rank_u = matrix_rank(u, tol);
  if (rank_u != m - 1) {
    return reject(t, Stage::RankU, "rank(U) = " + std::to_string(rank_u) + ", need " + std::to_string(m - 1));
  }

  // (2) Unique positive dependency sum mu_j u_j = 0, i.e. a closed line from -u_j.
  const auto mu = positive_kernel(u, tol);
  if (!mu) return reject(t, Stage::KernelMu, "kernel of U is not strictly positive");
  d.reflector_weights = to_std(*mu);
  std::vector<Vec> minus_u;
  for (const auto& v : d.reflectors) minus_u.push_back(-v);
  build_closed_line(minus_u, d.reflector_weights, tol);

  // (3) n_1 maximizes sum_j mu_j over the unit ball, with mu_j >= 0 and closure.
  Mat cumulative = Mat::Identity(n, n);  // R_{j-1} ... R_1
  d.cone_ball.objective = Vec::Zero(n);
  d.cone_ball.ineq_normals = Mat(n, m);
  for (int j = 0; j < m; ++j) {
    const Vec a = 2.0 * cumulative.transpose() * d.reflectors[static_cast<std::size_t>(j)];
    d.cone_ball.ineq_normals.col(j) = a;
    d.cone_ball.objective += a;
    cumulative = reflection(d.reflectors[static_cast<std::size_t>(j)]) * cumulative;
  }
  d.cone_ball.eq_matrix = cumulative - Mat::Identity(n, n);
  std::optional<ConeBallSolution> sol;
  try {
    sol = max_linear_over_cone_ball(d.cone_ball, tol);
  } catch (const Error& e) {
    return reject(t, Stage::Socp, e.what());
  }
  if (!sol) return reject(t, Stage::Socp, "cone-ball optimum is zero");
  const auto prop = propagate_normals(sol->x, d.reflectors);
  for (int j = 0; j < m; ++j) {
    if (!(prop.multipliers[static_cast<std::size_t>(j)] > tol.positivity)) {
      return reject(t, Stage::Socp, "multiplier mu_" + std::to_string(j + 1) + " is not positive");
    }
  }
  if (prop.closure_residual > tol.feas) return reject(t, Stage::Socp, "propagated normals do not close");
  d.directions = prop.directions;
  d.multipliers = prop.multipliers;

  // (4) A length minimizer needs directions of rank m-1.
  const Mat nmat = columns(d.directions);
  const int rank_n = matrix_rank(nmat, tol);
  if (rank_n != m - 1) {
    return reject(t, Stage::RankN, "rank(n) = " + std::to_string(rank_n) + ", need " + std::to_string(m - 1));
  }

  // (5) Closed line xi from positive multiples of the directions.
  const auto lambda = positive_kernel(nmat, tol);
  if (!lambda) return reject(t, Stage::KernelLambda, "directions are not totally cyclic");
  d.segment_weights = to_std(*lambda);
  d.xi = build_closed_line(d.directions, d.segment_weights, tol);
  return d;
}

PlacementLP build_placement_lp(const Polytope& p, const FacetTuple& t, const std::vector<Vec>& xi) {
  const int n = p.dim();
  PlacementLP lp{LinearProgram(n + 2), n};
  auto& prog = lp.program;
  prog.nonnegative[PlacementLP::kClearance] = true;
  prog.nonnegative[PlacementLP::kScale] = true;
  prog.objective(PlacementLP::kClearance) = 1.0;
  for (int j = 0; j < t.size(); ++j) {
    const Vec& x = xi[static_cast<std::size_t>(j)];
    const auto& own = p.facet(t[j]);
    Vec eq(n + 2);
    eq(PlacementLP::kClearance) = 0.0;
    eq(PlacementLP::kScale) = x.dot(own.normal);
    eq.tail(n) = own.normal;
    prog.add_equality(eq, own.offset);
    for (int i = 0; i < p.facet_count(); ++i) {
      if (i == t[j]) continue;
      const auto& other = p.facet(i);
      Vec row(n + 2);
      row(PlacementLP::kClearance) = 1.0;
      row(PlacementLP::kScale) = x.dot(other.normal);
      row.tail(n) = other.normal;
      prog.add_upper_bound(row, other.offset);
    }
  }
  return lp;
}

CandidateResult evaluate_tuple(const Polytope& p, const FacetTuple& t, const ToleranceProfile& tol) {
  auto solved = solve_directions(p, t, tol);
  if (auto* rejected = std::get_if<CandidateResult>(&solved)) return std::move(*rejected);
  const auto& d = std::get<DirectionSolution>(solved);
  const int m = t.size();

  // (6) Place lambda * xi + s on the facets with maximal clearance.
  std::optional<Placement> placement;
  try {
    placement = solve_placement(build_placement_lp(p, t, d.xi), tol);
  } catch (const Error& e) {
    return reject(t, Stage::LpInfeasible, e.what());
  }
  if (!placement) return reject(t, Stage::LpInfeasible, "placement LP is infeasible");
  if (!(placement->clearance > tol.feas)) {
    return reject(t, Stage::LpNonregular, "best clearance is not positive");
  }
  if (!(placement->scale > tol.feas)) return reject(t, Stage::LpNonregular, "placement scale is not positive");

  Trajectory traj;
  traj.regular = true;
  for (int j = 0; j < m; ++j) {
    const Vec point = placement->scale * d.xi[static_cast<std::size_t>(j)] + placement->shift;
    traj.points.push_back(point);
    traj.directions.push_back(d.directions[static_cast<std::size_t>(j)]);
    const double len = placement->scale * d.segment_weights[static_cast<std::size_t>(j)];
    traj.seg_lengths.push_back(len);
    traj.length += len;
    traj.active_facets.push_back(active_facets(p, point, tol));
    if (traj.active_facets.back() != std::vector<int>{t[j]}) {
      traj.regular = false;
    }
  }
  if (!traj.regular) return reject(t, Stage::LpNonregular, "a bouncing point is not a smooth boundary point");

  const auto report = verify_billiard(p, traj.points, tol);
  if (!report.valid_billiard || !report.in_FT) {
    std::ostringstream os;
    os << "placed line failed verification (valid=" << report.valid_billiard << ", in_FT=" << report.in_FT << ")";
    return reject(t, Stage::LpNonregular, os.str());
  }
  return CandidateResult{t, Stage::Accepted, std::move(traj), ""};
}

}  // namespace polybilliard
