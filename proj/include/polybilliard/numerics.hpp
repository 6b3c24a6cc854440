#pragma once

// Small dense linear algebra plus the two special-purpose solvers used by the
// trajectory search: a ball-constrained linear maximization over a polyhedral
// cone (solved by Moreau decomposition) and a dense two-phase simplex.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "polybilliard/error.hpp"

namespace polybilliard {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct ToleranceProfile {
  double rank_rel = 1e-10;    // relative singular-value cutoff
  double feas = 1e-9;         // absolute feasibility, in length units
  double positivity = 1e-8;   // cutoff for "strictly positive" multipliers

  // Throws InvalidInput unless every field lies in (0, 1e-2).
  void validate() const;
};

/// Number of singular values above rank_rel * sigma_max * max(rows, cols).
int matrix_rank(const Mat& m, const ToleranceProfile& tol);

/// Orthonormal basis (columns) of the null space of `m`, using the same
/// cutoff as matrix_rank. May have zero columns. A positive `floor_scale`
/// keeps the cutoff from shrinking below rank_rel * floor_scale.
Mat null_space(const Mat& m, const ToleranceProfile& tol, double floor_scale = 0.0);

/// Orthonormal basis of the column span of `m`.
Mat column_span(const Mat& m, const ToleranceProfile& tol);

/// The unique (up to scale) kernel vector of a matrix of rank cols-1,
/// normalized so that its smallest entry is 1. Returns nullopt when the
/// kernel cannot be made strictly positive.
std::optional<Vec> positive_kernel(const Mat& m, const ToleranceProfile& tol);

/// Householder reflection I - 2uu^T for a unit vector u.
Mat reflection(const Vec& u);

/// Orthonormal basis of {x : Qx = x} for an orthogonal Q.
Mat fixed_subspace(const Mat& q, const ToleranceProfile& tol);

struct NnlsResult {
  Vec x;
  double residual = 0.0;  // ||Ax - b||
};

/// Lawson-Hanson non-negative least squares: min ||Ax - b|| s.t. x >= 0.
NnlsResult nnls(const Mat& a, const Vec& b, const ToleranceProfile& tol);

/// Euclidean projection of c onto K = {x in span(basis) : <a_j, x> >= 0},
/// where the a_j are the columns of `ineq_normals`.
Vec project_polyhedral_cone(const Vec& c, const Mat& ineq_normals, const Mat& basis,
                            const ToleranceProfile& tol);

// maximize <c, x>  s.t.  ||x|| <= 1,  <a_j, x> >= 0,  E x = 0
struct ConeBallProblem {
  Vec objective;
  Mat ineq_normals;  // n x m, one column per a_j
  Mat eq_matrix;     // k x n
};

struct ConeBallSolution {
  Vec x;  // unit vector
  double value = 0.0;
};

/// Returns nullopt when the optimum is <= tol.feas (degenerate problem).
std::optional<ConeBallSolution> max_linear_over_cone_ball(const ConeBallProblem& p,
                                                          const ToleranceProfile& tol);

// ---------------------------------------------------------------------------
// Linear programming

/// maximize objective^T x  s.t.  eq_lhs x = eq_rhs,  ub_lhs x <= ub_rhs,
/// x_i >= 0 for every i with nonnegative[i] (others free).
struct LinearProgram {
  Vec objective;
  Mat eq_lhs;
  Vec eq_rhs;
  Mat ub_lhs;
  Vec ub_rhs;
  std::vector<bool> nonnegative;

  explicit LinearProgram(int variables = 0);
  int variables() const { return static_cast<int>(objective.size()); }
  void add_equality(const Vec& row, double rhs);
  void add_upper_bound(const Vec& row, double rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Vec x;
  double value = 0.0;
};

/// Dense two-phase simplex with Bland's rule. Throws NumericalFailure when
/// the pivot cap is exceeded.
LpSolution solve_lp(const LinearProgram& lp, const ToleranceProfile& tol);

/// Placement of a closed polygonal line xi onto a tuple of facets. Variable
/// order is (rho, lambda, s_1..s_n): rho >= 0 is the smallest clearance from
/// non-incident facets, lambda >= 0 the scale, s the translation.
struct PlacementLP {
  LinearProgram program;
  int dim = 0;

  static constexpr int kClearance = 0;
  static constexpr int kScale = 1;
  static constexpr int kShift = 2;
};

struct Placement {
  double clearance = 0.0;
  double scale = 0.0;
  Vec shift;
};

/// Solves the placement LP. nullopt means infeasible; an unbounded program
/// is reported as NumericalFailure.
std::optional<Placement> solve_placement(const PlacementLP& lp, const ToleranceProfile& tol);

}  // namespace polybilliard
