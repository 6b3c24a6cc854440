#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "polybilliard/geometry.hpp"

namespace polybilliard {

/// Ordered facet indices, canonical under cyclic shift: the first entry is
/// the smallest one.
struct FacetTuple {
  std::vector<int> indices;

  int size() const { return static_cast<int>(indices.size()); }
  int operator[](int j) const { return indices[static_cast<std::size_t>(j)]; }
  auto operator<=>(const FacetTuple&) const = default;

  /// Rotation of `indices` that starts with its minimum.
  static FacetTuple canonical(std::vector<int> indices);
};

/// Streams the C(f, m) * (m-1)! canonical tuples in lexicographic order.
class FacetTupleEnumerator {
 public:
  FacetTupleEnumerator(int facets, int bounces);

  /// Writes the next tuple and returns true, or returns false when done.
  bool next(FacetTuple& out);

 private:
  bool advance();

  int f_;
  int m_;
  bool started_ = false;
  bool done_ = false;
  std::vector<int> current_;
};

std::vector<FacetTuple> enumerate_facet_tuples(int facets, int bounces);

/// C(f, m) * (m-1)!
std::uint64_t tuple_count(int facets, int bounces);

enum class Stage {
  RankU,
  KernelMu,
  Socp,
  RankN,
  KernelLambda,
  LpInfeasible,
  LpNonregular,
  Accepted,
};

inline constexpr Stage kAllStages[] = {Stage::RankU,  Stage::KernelMu,     Stage::Socp,
                                       Stage::RankN,  Stage::KernelLambda, Stage::LpInfeasible,
                                       Stage::LpNonregular, Stage::Accepted};

const char* to_string(Stage s);

struct CandidateResult {
  FacetTuple tuple;
  Stage stage = Stage::RankU;
  std::optional<Trajectory> trajectory;
  std::string rejection_detail;
};

struct NormalPropagation {
  std::vector<Vec> directions;    // n_1..n_m
  std::vector<double> multipliers;  // mu_j = 2 <n_j, u_j>
  double closure_residual = 0.0;  // ||R_m n_m - n_1||
};

/// n_{j+1} = n_j - 2 <n_j, u_j> u_j.
NormalPropagation propagate_normals(const Vec& first, const std::vector<Vec>& reflectors);

/// gamma_1 = 0, gamma_{j+1} = gamma_j + w_j d_j. Throws PreconditionViolation
/// when the weighted directions do not sum to zero within tol.feas.
std::vector<Vec> build_closed_line(const std::vector<Vec>& directions, const std::vector<double>& weights,
                                   const ToleranceProfile& tol = {});

/// The direction-finding half of the pipeline for one tuple: the normals
/// u_j, the cone-ball problem, the unit directions n_j and the closed line xi
/// built from positive multiples of them.
struct DirectionSolution {
  std::vector<Vec> reflectors;        // u_j = normal of facet t[j+1]
  std::vector<double> reflector_weights;  // positive kernel of U
  ConeBallProblem cone_ball;
  std::vector<Vec> directions;        // n_1..n_m
  std::vector<double> multipliers;    // mu_j
  std::vector<double> segment_weights;  // lambda'_j
  std::vector<Vec> xi;
};

/// Either the solved directions or the rejection at the first failing stage.
std::variant<DirectionSolution, CandidateResult> solve_directions(const Polytope& p, const FacetTuple& t,
                                                                  const ToleranceProfile& tol = {});

/// The placement LP for a tuple and closed line xi. Clearance rows are
/// generated against every facet of the polytope other than the one the
/// point must lie on.
PlacementLP build_placement_lp(const Polytope& p, const FacetTuple& t, const std::vector<Vec>& xi);

CandidateResult evaluate_tuple(const Polytope& p, const FacetTuple& t, const ToleranceProfile& tol = {});

struct SearchOptions {
  int max_bounces = 0;  // 0: dim + 1
  int workers = 1;
  ToleranceProfile tol;
};

struct BounceStats {
  std::uint64_t tuples = 0;
  double elapsed_s = 0.0;
  std::optional<double> best_length;
  std::optional<FacetTuple> best_tuple;
};

struct SearchReport {
  std::optional<Trajectory> best;
  std::optional<FacetTuple> best_tuple;
  std::map<int, BounceStats> per_m;
  std::map<Stage, std::uint64_t> stage_counts;
  std::uint64_t tuples_examined = 0;
  double elapsed_s = 0.0;
  std::vector<std::string> warnings;
};

/// Minimum-length regular closed billiard trajectory over all facet tuples
/// with 2..max_bounces entries. Result is independent of the worker count.
SearchReport search_min(const Polytope& p, const SearchOptions& opts = {});

}  // namespace polybilliard
