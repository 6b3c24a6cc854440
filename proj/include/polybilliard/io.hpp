#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "polybilliard/geometry.hpp"
#include "polybilliard/search.hpp"
#include "polybilliard/verify.hpp"

namespace polybilliard {

using Json = nlohmann::ordered_json;

Json vec_to_json(const Vec& v);
Vec vec_from_json(const Json& j, int dim = -1);

/// {"name"?, "dim", "vertices", "halfspaces"}.
Json polytope_to_json(const Polytope& p, const std::string& name = "");

/// Reads the polytope schema, preferring "vertices" when both descriptions
/// are present. Schema violations throw InvalidInput.
Polytope polytope_from_json(const Json& j, const ToleranceProfile& tol = {});

Json trajectory_to_json(const Trajectory& t);

struct TrajectoryInput {
  std::vector<Vec> points;
  std::optional<double> length;
  std::optional<bool> regular;
  std::optional<std::vector<std::vector<int>>> facets;
};

/// Reads {"points", "length"?, "regular"?, "facets"?}; only "points" is required.
TrajectoryInput trajectory_from_json(const Json& j, int dim);

Json search_report_to_json(const SearchReport& r, bool include_elapsed = true);
Json verification_to_json(const VerificationReport& r);

/// SVG 1.1 drawing of a polygon and an optional trajectory, with the
/// bounding box mapped onto a 1000 x 1000 viewport.
std::string render_svg(const Polytope& polygon, const Trajectory* trajectory = nullptr);

Json read_json_file(const std::string& path);

}  // namespace polybilliard
