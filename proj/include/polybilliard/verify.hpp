#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polybilliard/geometry.hpp"

namespace polybilliard {

struct PointCheck {
  std::vector<int> active;
  double cone_residual = 0.0;  // distance of n_{j-1} - n_j from N_P(p_j)
  double seg_length = 0.0;     // |p_{j+1} - p_j|
  Vec direction;               // unit (p_{j+1} - p_j)
};

struct VerificationReport {
  bool valid_billiard = false;
  bool regular = false;
  bool in_FT = false;
  std::optional<bool> theorem1_ok;
  double length = 0.0;
  std::vector<PointCheck> per_point;
  std::vector<std::string> notes;
};

/// Checks a closed polygonal line against the billiard reflection law: every
/// point on the boundary, consecutive points distinct, no straight-through
/// vertex, and n_{j-1} - n_j in the outer normal cone at p_j.
VerificationReport verify_billiard(const Polytope& p, const std::vector<Vec>& points,
                                   const ToleranceProfile& tol = {});

/// True iff every point is a smooth boundary point.
bool is_regular(const Polytope& p, const std::vector<Vec>& points, const ToleranceProfile& tol = {});

struct MinimalityCheck {
  bool dim_v_ok = false;
  bool cone_dim_ok = false;
  int dim_v = 0;
  std::vector<int> cone_dims;  // dim span(N_P(p_j) ∩ V_0) per point
  std::string details;
};

/// Necessary conditions for length minimality: the affine hull V of the
/// bouncing points has dimension m-1 and each normal cone meets the
/// direction space of V in exactly a ray.
MinimalityCheck check_minimality_conditions(const Polytope& p, const Trajectory& t,
                                            const ToleranceProfile& tol = {});

/// Slides a regular trajectory with at most dim bounces along the common
/// tangent directions of its bounce facets until some bouncing point reaches
/// a lower-dimensional face. Length is preserved.
Trajectory translate_to_nonregular(const Polytope& p, const Trajectory& t, const ToleranceProfile& tol = {});

}  // namespace polybilliard
