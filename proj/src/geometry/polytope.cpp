#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "polybilliard/geometry.hpp"

namespace polybilliard {

namespace {

constexpr double kDedupTol = 1e-8;

// Calls fn(indices) for every k-subset of {0..n-1} in lexicographic order.
template <typename Fn>
void for_each_subset(int n, int k, Fn&& fn) {
  if (k > n || k <= 0) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

double point_set_diameter(const std::vector<Vec>& pts) {
  double d = 0.0;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) d = std::max(d, (pts[a] - pts[b]).norm());
  }
  return d;
}

int affine_rank(const std::vector<Vec>& pts, const std::vector<int>& which, double scale) {
  if (which.size() < 2) return 0;
  const auto n = pts[static_cast<std::size_t>(which[0])].size();
  Mat diffs(n, static_cast<Eigen::Index>(which.size() - 1));
  for (std::size_t k = 1; k < which.size(); ++k) {
    diffs.col(static_cast<Eigen::Index>(k - 1)) =
        pts[static_cast<std::size_t>(which[k])] - pts[static_cast<std::size_t>(which[0])];
  }
  Eigen::JacobiSVD<Mat> svd(diffs);
  const auto& sv = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > 1e-9 * std::max(scale, 1e-300)) ++r;
  }
  return r;
}

bool same_halfspace(const Halfspace& a, const Halfspace& b, double scale) {
  return (a.normal - b.normal).norm() <= kDedupTol && std::abs(a.offset - b.offset) <= kDedupTol * scale;
}

void check_points(const std::vector<Vec>& points) {
  if (points.empty()) fail(ErrorKind::InvalidInput, "polytope: no points given");
  const auto n = points.front().size();
  if (n < 1) fail(ErrorKind::InvalidInput, "polytope: zero-dimensional points");
  for (const auto& p : points) {
    if (p.size() != n) fail(ErrorKind::InvalidInput, "polytope: points of mixed dimension");
    if (!p.allFinite()) fail(ErrorKind::InvalidInput, "polytope: non-finite coordinate");
  }
}

}  // namespace

Polytope Polytope::from_vertices(const std::vector<Vec>& points, const ToleranceProfile& tol) {
  tol.validate();
  check_points(points);
  const int n = static_cast<int>(points.front().size());
  const int count = static_cast<int>(points.size());
  const double scale = point_set_diameter(points);
  std::vector<int> all(static_cast<std::size_t>(count));
  std::iota(all.begin(), all.end(), 0);
  if (count < n + 1 || scale <= 0.0 || affine_rank(points, all, scale) < n) {
    fail(ErrorKind::InvalidInput, "polytope_from_vertices: points do not span a full-dimensional hull");
  }
  const double side_tol = tol.feas * scale;

  Polytope out;
  out.dim_ = n;
  for_each_subset(count, n, [&](const std::vector<int>& subset) {
    Vec normal;
    if (n == 1) {
      normal = Vec::Ones(1);
    } else {
      Mat diffs(n - 1, n);
      for (int k = 1; k < n; ++k) {
        diffs.row(k - 1) = (points[static_cast<std::size_t>(subset[static_cast<std::size_t>(k)])] -
                            points[static_cast<std::size_t>(subset[0])])
                               .transpose();
      }
      Eigen::JacobiSVD<Mat> svd(diffs, Eigen::ComputeFullV);
      if (svd.singularValues()(n - 2) <= 1e-9 * scale) return;
      normal = svd.matrixV().col(n - 1);
    }
    double offset = normal.dot(points[static_cast<std::size_t>(subset[0])]);
    bool below = true, above = true;
    for (const auto& p : points) {
      const double s = normal.dot(p) - offset;
      if (s > side_tol) below = false;
      if (s < -side_tol) above = false;
    }
    if (!below && !above) return;
    if (!below) {
      normal = -normal;
      offset = -offset;
    }
    Halfspace h{normal, offset};
    for (const auto& f : out.facets_) {
      if (same_halfspace(f, h, scale)) return;
    }
    out.facets_.push_back(std::move(h));
  });

  // Keep only extreme points: those whose incident facet normals span R^n.
  for (const auto& p : points) {
    Mat normals(n, 0);
    for (const auto& f : out.facets_) {
      if (std::abs(f.normal.dot(p) - f.offset) <= side_tol) {
        normals.conservativeResize(Eigen::NoChange, normals.cols() + 1);
        normals.col(normals.cols() - 1) = f.normal;
      }
    }
    if (matrix_rank(normals, tol) < n) continue;
    const bool dup = std::any_of(out.vertices_.begin(), out.vertices_.end(),
                                 [&](const Vec& v) { return (v - p).norm() <= kDedupTol * scale; });
    if (!dup) out.vertices_.push_back(p);
  }
  out.finalize(tol);
  return out;
}

Polytope Polytope::from_halfspaces(const std::vector<Halfspace>& halfspaces,
                                   const ToleranceProfile& tol) {
  tol.validate();
  if (halfspaces.empty()) fail(ErrorKind::InvalidInput, "polytope_from_halfspaces: no halfspaces");
  const auto n = halfspaces.front().normal.size();
  if (n < 1) fail(ErrorKind::InvalidInput, "polytope_from_halfspaces: zero dimension");
  std::vector<Halfspace> hs;
  double offset_scale = 1.0;
  for (const auto& h : halfspaces) {
    if (h.normal.size() != n) fail(ErrorKind::InvalidInput, "halfspaces of mixed dimension");
    const double len = h.normal.norm();
    if (!h.normal.allFinite() || !std::isfinite(h.offset) || len == 0.0) {
      fail(ErrorKind::InvalidInput, "halfspace with zero or non-finite normal");
    }
    hs.push_back({h.normal / len, h.offset / len});
    offset_scale = std::max(offset_scale, std::abs(h.offset / len));
  }

  // Boundedness: every coordinate direction must have a finite maximum.
  LinearProgram probe(static_cast<int>(n));
  for (const auto& h : hs) probe.add_upper_bound(h.normal, h.offset);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (double sign : {1.0, -1.0}) {
      probe.objective.setZero();
      probe.objective(k) = sign;
      const auto sol = solve_lp(probe, tol);
      if (sol.status == LpStatus::Unbounded) {
        fail(ErrorKind::InvalidInput, "polytope_from_halfspaces: intersection is unbounded");
      }
      if (sol.status == LpStatus::Infeasible) {
        fail(ErrorKind::InvalidInput, "polytope_from_halfspaces: intersection is empty");
      }
    }
  }
  const auto ball = chebyshev_ball(hs, static_cast<int>(n), tol);
  if (!(ball.radius > tol.feas)) {
    fail(ErrorKind::InvalidInput, "polytope_from_halfspaces: intersection has empty interior");
  }

  const double feas_tol = tol.feas * offset_scale;
  std::vector<Vec> verts;
  for_each_subset(static_cast<int>(hs.size()), static_cast<int>(n), [&](const std::vector<int>& subset) {
    Mat a(n, n);
    Vec b(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      a.row(k) = hs[static_cast<std::size_t>(subset[static_cast<std::size_t>(k)])].normal.transpose();
      b(k) = hs[static_cast<std::size_t>(subset[static_cast<std::size_t>(k)])].offset;
    }
    Eigen::FullPivLU<Mat> lu(a);
    lu.setThreshold(1e-10);
    if (!lu.isInvertible()) return;
    Vec x = lu.solve(b);
    for (const auto& h : hs) {
      if (h.normal.dot(x) - h.offset > feas_tol) return;
    }
    const bool dup = std::any_of(verts.begin(), verts.end(),
                                 [&](const Vec& v) { return (v - x).norm() <= kDedupTol * offset_scale; });
    if (!dup) verts.push_back(x);
  });

  Polytope out;
  out.dim_ = static_cast<int>(n);
  out.vertices_ = std::move(verts);
  const double scale = point_set_diameter(out.vertices_);
  for (const auto& h : hs) {
    std::vector<int> on;
    for (std::size_t v = 0; v < out.vertices_.size(); ++v) {
      if (std::abs(h.normal.dot(out.vertices_[v]) - h.offset) <= tol.feas * scale) on.push_back(static_cast<int>(v));
    }
    if (static_cast<int>(on.size()) < n || affine_rank(out.vertices_, on, scale) < n - 1) continue;
    const bool dup = std::any_of(out.facets_.begin(), out.facets_.end(),
                                 [&](const Halfspace& f) { return same_halfspace(f, h, scale); });
    if (!dup) out.facets_.push_back(h);
  }
  out.finalize(tol);
  return out;
}

void Polytope::finalize(const ToleranceProfile& tol) {
  diameter_ = point_set_diameter(vertices_);
  const double on_tol = tol.feas * diameter_;
  incidence_.assign(facets_.size(), {});
  for (std::size_t f = 0; f < facets_.size(); ++f) {
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
      const double s = facets_[f].normal.dot(vertices_[v]) - facets_[f].offset;
      if (s > on_tol) fail(ErrorKind::InvalidInput, "polytope: vertex violates a facet inequality");
      if (std::abs(s) <= on_tol) incidence_[f].push_back(static_cast<int>(v));
    }
    if (affine_rank(vertices_, incidence_[f], diameter_) != dim_ - 1) {
      fail(ErrorKind::InvalidInput, "polytope: facet " + std::to_string(f) + " is not (n-1)-dimensional");
    }
  }
  if (static_cast<int>(facets_.size()) < dim_ + 1) {
    fail(ErrorKind::InvalidInput, "polytope: fewer than n+1 facets");
  }
}

Mat Polytope::normal_matrix() const {
  Mat m(dim_, facet_count());
  for (int i = 0; i < facet_count(); ++i) m.col(i) = facets_[static_cast<std::size_t>(i)].normal;
  return m;
}

Polytope Polytope::translated(const Vec& shift) const {
  if (shift.size() != dim_) fail(ErrorKind::InvalidInput, "translated: dimension mismatch");
  Polytope out = *this;
  for (auto& f : out.facets_) f.offset += f.normal.dot(shift);
  for (auto& v : out.vertices_) v += shift;
  return out;
}

Polytope Polytope::scaled(double factor) const {
  if (!(factor > 0.0)) fail(ErrorKind::InvalidInput, "scaled: factor must be positive");
  Polytope out = *this;
  for (auto& f : out.facets_) f.offset *= factor;
  for (auto& v : out.vertices_) v *= factor;
  out.diameter_ *= factor;
  return out;
}

}  // namespace polybilliard
