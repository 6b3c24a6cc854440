#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polybilliard/numerics.hpp"

namespace polybilliard {

/// Closed half-space {x : <normal, x> <= offset} with a unit outward normal.
struct Halfspace {
  Vec normal;
  double offset = 0.0;
};

/// A full-dimensional convex polytope carrying both its facet description
/// and its vertex list. Immutable once built; construct through
/// Polytope::from_vertices or Polytope::from_halfspaces.
class Polytope {
 public:
  static Polytope from_vertices(const std::vector<Vec>& points,
                                const ToleranceProfile& tol = {});
  static Polytope from_halfspaces(const std::vector<Halfspace>& halfspaces,
                                  const ToleranceProfile& tol = {});

  int dim() const { return dim_; }
  int facet_count() const { return static_cast<int>(facets_.size()); }
  const std::vector<Halfspace>& facets() const { return facets_; }
  const Halfspace& facet(int i) const { return facets_[static_cast<std::size_t>(i)]; }
  const std::vector<Vec>& vertices() const { return vertices_; }
  /// Indices into vertices() lying on each facet.
  const std::vector<std::vector<int>>& incidence() const { return incidence_; }
  double diameter() const { return diameter_; }

  /// Facet normals as the columns of a dim x facet_count matrix.
  Mat normal_matrix() const;

  /// Same polytope moved by `shift` / scaled about the origin by `factor`.
  Polytope translated(const Vec& shift) const;
  Polytope scaled(double factor) const;

 private:
  Polytope() = default;
  void finalize(const ToleranceProfile& tol);

  int dim_ = 0;
  std::vector<Halfspace> facets_;
  std::vector<Vec> vertices_;
  std::vector<std::vector<int>> incidence_;
  double diameter_ = 0.0;
};

/// A closed polygonal line p_1..p_m on the boundary of a polytope with
/// p_{j+1} - p_j = seg_lengths[j] * directions[j] (indices cyclic).
struct Trajectory {
  std::vector<Vec> points;
  std::vector<Vec> directions;
  std::vector<double> seg_lengths;
  std::vector<std::vector<int>> active_facets;
  double length = 0.0;
  bool regular = false;

  int bounces() const { return static_cast<int>(points.size()); }
};

/// Builds the Trajectory record for a list of boundary points.
Trajectory make_trajectory(const Polytope& p, const std::vector<Vec>& points,
                           const ToleranceProfile& tol = {});

/// Facets whose hyperplane passes within feas * diameter of x.
std::vector<int> active_facets(const Polytope& p, const Vec& x, const ToleranceProfile& tol = {});

/// Largest value of <u_i, x> - b_i; positive outside the polytope.
double max_slack_violation(const Polytope& p, const Vec& x);

enum class PointLocation { Interior, Boundary, Exterior };
PointLocation locate(const Polytope& p, const Vec& x, const ToleranceProfile& tol = {});

/// Generators of the outer normal cone at a boundary point.
std::vector<Vec> normal_cone_generators(const Polytope& p, const Vec& x,
                                        const ToleranceProfile& tol = {});

struct DihedralAngle {
  int i = 0;
  int j = 0;
  double angle = 0.0;  // radians, in (0, pi)
};

/// One entry per pair of adjacent facets (i < j).
std::vector<DihedralAngle> dihedral_angles(const Polytope& p, const ToleranceProfile& tol = {});

struct AcuteReport {
  bool acute = false;
  double angle_sum = 0.0;
};

AcuteReport is_acute(const Polytope& p, const ToleranceProfile& tol = {});

struct TranslationTest {
  bool translatable = false;
  double margin = 0.0;        // optimal delta
  std::optional<Vec> witness;
};

/// Whether the point set can be moved into the interior by a translation.
/// `translatable == false` is membership of the set in F(P).
TranslationTest can_translate_into_interior(const Polytope& p, const std::vector<Vec>& points,
                                            const ToleranceProfile& tol = {});

struct ChebyshevBall {
  Vec center;
  double radius = 0.0;
};

ChebyshevBall chebyshev_ball(const std::vector<Halfspace>& halfspaces, int dim,
                             const ToleranceProfile& tol = {});

/// Chebyshev center of the polytope.
Vec interior_point(const Polytope& p, const ToleranceProfile& tol = {});

}  // namespace polybilliard
