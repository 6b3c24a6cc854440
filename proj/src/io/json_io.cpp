#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "polybilliard/io.hpp"

namespace polybilliard {

Json vec_to_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i) + 0.0);
  return out;
}

Vec vec_from_json(const Json& j, int dim) {
  if (!j.is_array()) fail(ErrorKind::InvalidInput, "expected an array of numbers");
  if (dim >= 0 && static_cast<int>(j.size()) != dim) {
    fail(ErrorKind::InvalidInput, "expected a vector of length " + std::to_string(dim));
  }
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) fail(ErrorKind::InvalidInput, "expected a number");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    if (!std::isfinite(v(static_cast<Eigen::Index>(i)))) fail(ErrorKind::InvalidInput, "non-finite coordinate");
  }
  return v;
}

Json polytope_to_json(const Polytope& p, const std::string& name) {
  Json out;
  if (!name.empty()) out["name"] = name;
  out["dim"] = p.dim();
  out["vertices"] = Json::array();
  for (const auto& v : p.vertices()) out["vertices"].push_back(vec_to_json(v));
  out["halfspaces"] = Json::array();
  for (const auto& h : p.facets()) out["halfspaces"].push_back({{"normal", vec_to_json(h.normal)}, {"offset", h.offset + 0.0}});
  return out;
}

Polytope polytope_from_json(const Json& j, const ToleranceProfile& tol) {
  if (!j.is_object()) fail(ErrorKind::InvalidInput, "polytope must be a JSON object");
  int dim = 0;
  if (j.contains("dim")) {
    if (!j["dim"].is_number_integer()) fail(ErrorKind::InvalidInput, "dim must be an integer");
    dim = j["dim"].get<int>();
  } else if (j.contains("vertices") && j["vertices"].is_array() && !j["vertices"].empty() &&
             j["vertices"].front().is_array()) {
    dim = static_cast<int>(j["vertices"].front().size());
  } else {
    fail(ErrorKind::InvalidInput, "polytope needs dim or a non-empty vertex list");
  }
  if (dim < 1) fail(ErrorKind::InvalidInput, "dim must be positive");
  if (j.contains("vertices")) {
    if (!j["vertices"].is_array()) fail(ErrorKind::InvalidInput, "vertices must be an array");
    std::vector<Vec> pts;
    for (const auto& v : j["vertices"]) pts.push_back(vec_from_json(v, dim));
    return Polytope::from_vertices(pts, tol);
  }
  if (j.contains("halfspaces")) {
    if (!j["halfspaces"].is_array()) fail(ErrorKind::InvalidInput, "halfspaces must be an array");
    std::vector<Halfspace> hs;
    for (const auto& h : j["halfspaces"]) {
      if (!h.is_object() || !h.contains("normal") || !h.contains("offset") || !h["offset"].is_number()) {
        fail(ErrorKind::InvalidInput, "halfspace needs normal and offset");
      }
      hs.push_back({vec_from_json(h["normal"], dim), h["offset"].get<double>()});
    }
    return Polytope::from_halfspaces(hs, tol);
  }
  fail(ErrorKind::InvalidInput, "polytope needs vertices or halfspaces");
}

Json trajectory_to_json(const Trajectory& t) {
  Json out;
  out["points"] = Json::array();
  for (const auto& p : t.points) out["points"].push_back(vec_to_json(p));
  out["length"] = t.length;
  out["regular"] = t.regular;
  out["facets"] = t.active_facets;
  return out;
}

TrajectoryInput trajectory_from_json(const Json& j, int dim) {
  if (!j.is_object() || !j.contains("points") || !j["points"].is_array()) {
    fail(ErrorKind::InvalidInput, "trajectory needs a points array");
  }
  TrajectoryInput in;
  for (const auto& p : j["points"]) in.points.push_back(vec_from_json(p, dim));
  if (in.points.size() < 2) fail(ErrorKind::InvalidInput, "trajectory needs at least two points");
  try {
    if (j.contains("length")) in.length = j["length"].get<double>();
    if (j.contains("regular")) in.regular = j["regular"].get<bool>();
    if (j.contains("facets")) in.facets = j["facets"].get<std::vector<std::vector<int>>>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidInput, std::string("trajectory: ") + e.what());
  }
  return in;
}

Json search_report_to_json(const SearchReport& r, bool include_elapsed) {
  Json out;
  out["best"] = r.best ? trajectory_to_json(*r.best) : Json(nullptr);
  out["length"] = r.best ? Json(r.best->length) : Json(nullptr);
  out["bounces"] = r.best ? Json(r.best->bounces()) : Json(nullptr);
  out["best_tuple"] = r.best_tuple ? Json(r.best_tuple->indices) : Json(nullptr);
  Json per_m = Json::object();
  for (const auto& [m, s] : r.per_m) {
    Json e;
    e["tuples"] = s.tuples;
    if (include_elapsed) e["elapsed_s"] = s.elapsed_s;
    e["best_length"] = s.best_length ? Json(*s.best_length) : Json(nullptr);
    e["best_tuple"] = s.best_tuple ? Json(s.best_tuple->indices) : Json(nullptr);
    per_m[std::to_string(m)] = e;
  }
  out["per_m"] = per_m;
  Json stages = Json::object();
  for (Stage s : kAllStages) {
    const auto it = r.stage_counts.find(s);
    stages[to_string(s)] = it == r.stage_counts.end() ? 0 : it->second;
  }
  out["stage_counts"] = stages;
  out["tuples_examined"] = r.tuples_examined;
  if (include_elapsed) out["elapsed_s"] = r.elapsed_s;
  out["warnings"] = r.warnings;
  return out;
}

Json verification_to_json(const VerificationReport& r) {
  Json out;
  out["valid_billiard"] = r.valid_billiard;
  out["regular"] = r.regular;
  out["in_FT"] = r.in_FT;
  out["theorem1_ok"] = r.theorem1_ok ? Json(*r.theorem1_ok) : Json(nullptr);
  out["length"] = r.length;
  out["per_point"] = Json::array();
  for (const auto& pc : r.per_point) {
    out["per_point"].push_back({{"active", pc.active},
                                {"cone_residual", std::isfinite(pc.cone_residual) ? Json(pc.cone_residual) : Json(nullptr)},
                                {"lambda", pc.seg_length},
                                {"direction", vec_to_json(pc.direction)}});
  }
  out["notes"] = r.notes;
  return out;
}

std::string render_svg(const Polytope& polygon, const Trajectory* trajectory) {
  if (polygon.dim() != 2) fail(ErrorKind::InvalidInput, "SVG output needs a 2-D polytope");
  Vec lo = polygon.vertices().front();
  Vec hi = lo;
  Vec centre = Vec::Zero(2);
  for (const auto& v : polygon.vertices()) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
    centre += v;
  }
  centre /= static_cast<double>(polygon.vertices().size());
  const double size = 1000.0;
  const double margin = 50.0;
  const double span = std::max(hi(0) - lo(0), hi(1) - lo(1));
  const double scale = (size - 2 * margin) / span;
  auto map = [&](const Vec& v) {
    std::ostringstream os;
    os.precision(10);
    os << margin + (v(0) - lo(0)) * scale << "," << size - margin - (v(1) - lo(1)) * scale;
    return os.str();
  };

  auto ordered = polygon.vertices();
  std::sort(ordered.begin(), ordered.end(), [&](const Vec& a, const Vec& b) {
    return std::atan2(a(1) - centre(1), a(0) - centre(0)) < std::atan2(b(1) - centre(1), b(0) - centre(0));
  });

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"1000\" height=\"1000\" "
         "viewBox=\"0 0 1000 1000\">\n";
  svg << "  <polygon fill=\"#f4f4f4\" stroke=\"#222222\" stroke-width=\"3\" points=\"";
  for (std::size_t k = 0; k < ordered.size(); ++k) svg << (k ? " " : "") << map(ordered[k]);
  svg << "\"/>\n";
  if (trajectory && !trajectory->points.empty()) {
    svg << "  <polygon fill=\"none\" stroke=\"#c0392b\" stroke-width=\"3\" points=\"";
    for (std::size_t k = 0; k < trajectory->points.size(); ++k) svg << (k ? " " : "") << map(trajectory->points[k]);
    svg << "\"/>\n";
    for (const auto& p : trajectory->points) {
      const auto xy = map(p);
      const auto comma = xy.find(',');
      svg << "  <circle r=\"6\" fill=\"#c0392b\" cx=\"" << xy.substr(0, comma) << "\" cy=\"" << xy.substr(comma + 1)
          << "\"/>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidInput, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidInput, path + ": " + e.what());
  }
}

}  // namespace polybilliard
