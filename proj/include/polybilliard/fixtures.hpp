#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polybilliard/geometry.hpp"

namespace polybilliard {

struct ReferenceTrajectory {
  std::vector<Vec> points;
  double expected_length = 0.0;
  bool expected_regular = false;
  std::string note;
};

struct Fixture {
  std::string name;
  Polytope polytope;
  std::vector<ReferenceTrajectory> references;
  std::string note;
};

struct FixtureParams {
  std::optional<double> epsilon;  // examples e and f, default 0.05
  std::optional<int> dim;         // regular_simplex
};

/// Built-in polytopes: example_a .. example_f, unit_square,
/// equilateral_triangle and regular_simplex. Throws InvalidInput for an
/// unknown name or an out-of-range parameter.
Fixture builtin(const std::string& name, const FixtureParams& params);

/// Same as builtin(name, params) but accepts "name" or "name(arg)", e.g.
/// "example_e(0.1)" or "regular_simplex(3)".
Fixture builtin(const std::string& spec);

std::vector<std::string> builtin_names();

/// Regular n-simplex with unit edge length, centred at the origin.
Polytope regular_simplex(int n);

/// Convex hull of `point_count` standard normal vectors, each scaled by a
/// uniform factor in [1, 3]. Deterministic in the seed; a degenerate draw is
/// retried with the next seed, at most 10 times.
Polytope random_polytope(int dim, int point_count, std::uint64_t seed);

/// A random_polytope with exactly `facets` facets: tries point counts and
/// seeds in a fixed order starting from `seed`.
Polytope random_polytope_with_facets(int dim, int facets, std::uint64_t seed);

struct Oracle2dResult {
  double length = 0.0;
  std::vector<Vec> points;
  std::vector<int> edges;
};

/// Exhaustive oracle for polygons: minimizes the perimeter over every ordered
/// tuple of 2..m_max edges and keeps the shortest closed billiard trajectory
/// whose bouncing points all lie inside their edges.
std::optional<Oracle2dResult> brute_force_min_2d(const Polytope& polygon, int m_max = 3);

}  // namespace polybilliard
