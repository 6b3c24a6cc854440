#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "polybilliard/fixtures.hpp"
#include "polybilliard/io.hpp"
#include "polybilliard/verify.hpp"

using namespace polybilliard;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "polybilliard_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
}

// Drops every "elapsed_s" member, recursively.
nlohmann::ordered_json strip_times(nlohmann::ordered_json j) {
  if (j.is_object()) {
    j.erase("elapsed_s");
    for (auto& [k, v] : j.items()) v = strip_times(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = strip_times(v);
  }
  return j;
}

}  // namespace

TEST_CASE("solve on the fixtures") {
  auto r = run({"solve", "--fixture", "example_a"});
  REQUIRE(r.code == cli::kOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["length"].get<double>() == doctest::Approx(1.0));
  CHECK(j["bounces"].get<int>() == 2);
  CHECK(j["best"]["regular"].get<bool>());
  CHECK(j.contains("stage_counts"));
  CHECK(j["per_m"].contains("4"));

  r = run({"solve", "--fixture", "example_e", "--format", "text"});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out.find("length 1.5") != std::string::npos);

  r = run({"solve", "--fixture", "regular_simplex(3)"});
  REQUIRE(r.code == cli::kOk);
  CHECK(nlohmann::json::parse(r.out)["length"].get<double>() == doctest::Approx(2.0 * std::sqrt(0.4)));

  // No regular trajectory at all inside an obtuse triangle.
  const auto obtuse = scratch("obtuse.json");
  write_file(obtuse, R"({"vertices": [[0, 0], [4, 0], [1, 0.5]]})");
  r = run({"solve", "--input", obtuse.string()});
  CHECK(r.code == cli::kNoRegularTrajectory);
  j = nlohmann::json::parse(r.out);
  CHECK(j["best"].is_null());
  CHECK_FALSE(j["warnings"].empty());
}

TEST_CASE("input errors") {
  CHECK(run({"solve"}).code == cli::kInputError);
  CHECK(run({"solve", "--fixture", "nope"}).code == cli::kInputError);
  CHECK(run({"solve", "--fixture", "example_e(0.7)"}).code == cli::kInputError);
  CHECK(run({"solve", "--fixture", "example_a", "--format", "xml"}).code == cli::kInputError);
  CHECK(run({"solve", "--input", scratch("missing.json").string()}).code == cli::kInputError);
  const auto bad = scratch("bad.json");
  write_file(bad, "{\"vertices\": [[0, 0], [1, 0]]");
  auto r = run({"solve", "--input", bad.string()});
  CHECK(r.code == cli::kInputError);
  CHECK_FALSE(r.err.empty());
  CHECK(run({"frobnicate"}).code == cli::kInputError);
  CHECK(run({"verify", "--fixture", "example_a", "--reference", "5"}).code == cli::kInputError);
}

TEST_CASE("solve then verify round trip") {
  const auto out = scratch("square_solution.json");
  REQUIRE(run({"solve", "--fixture", "unit_square", "--output", out.string()}).code == cli::kOk);
  auto solved = read_json_file(out.string());
  const auto traj = scratch("square_traj.json");
  write_file(traj, solved["best"].dump());
  auto r = run({"verify", "--fixture", "unit_square", "--trajectory", traj.string()});
  REQUIRE(r.code == cli::kOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["valid_billiard"].get<bool>());
  CHECK(j["regular"].get<bool>());

  write_file(traj, R"({"points": [[0.3, 0], [0.7, 1]]})");
  r = run({"verify", "--fixture", "unit_square", "--trajectory", traj.string()});
  CHECK(r.code == cli::kVerificationFailed);
  CHECK_FALSE(nlohmann::json::parse(r.out)["valid_billiard"].get<bool>());

  r = run({"verify", "--fixture", "example_f", "--format", "text"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("regular 0") != std::string::npos);

  // A stated length that does not match is reported, not trusted.
  write_file(traj, R"({"points": [[0.5, 0], [0.5, 1]], "length": 3.0})");
  r = run({"verify", "--fixture", "unit_square", "--trajectory", traj.string()});
  CHECK(r.code == cli::kOk);
  CHECK(nlohmann::json::parse(r.out)["length"].get<double>() == doctest::Approx(2.0));
  CHECK(r.out.find("stated length") != std::string::npos);
}

TEST_CASE("polytope files round trip") {
  const auto path = scratch("gen.json");
  REQUIRE(run({"gen", "--dim", "3", "--points", "8", "--seed", "5", "--output", path.string()}).code == cli::kOk);
  const auto again = run({"gen", "--dim", "3", "--points", "8", "--seed", "5"});
  REQUIRE(again.code == cli::kOk);
  std::ifstream f(path);
  std::stringstream first;
  first << f.rdbuf();
  CHECK(first.str() == again.out);

  const auto p = polytope_from_json(read_json_file(path.string()));
  const auto q = random_polytope(3, 8, 5);
  CHECK(p.facet_count() == q.facet_count());
  CHECK(p.vertices().size() == q.vertices().size());

  auto r = run({"gen", "--dim", "4", "--facets", "11", "--seed", "3"});
  REQUIRE(r.code == cli::kOk);
  CHECK(polytope_from_json(nlohmann::ordered_json::parse(r.out)).facet_count() == 11);

  // A polytope given only by half-spaces.
  const auto hs = scratch("halfspaces.json");
  write_file(hs, R"({"dim": 2, "halfspaces": [
    {"normal": [0, -1], "offset": 0}, {"normal": [1, 0], "offset": 1},
    {"normal": [0, 1], "offset": 1}, {"normal": [-1, 0], "offset": 0}]})");
  r = run({"solve", "--input", hs.string()});
  REQUIRE(r.code == cli::kOk);
  CHECK(nlohmann::json::parse(r.out)["length"].get<double>() == doctest::Approx(2.0));
}

TEST_CASE("inspect and bench") {
  auto r = run({"inspect", "--fixture", "regular_simplex(3)"});
  REQUIRE(r.code == cli::kOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["facet_count"].get<int>() == 4);
  CHECK(j["acute"].get<bool>());
  CHECK(j["dihedral_angle_sum"].get<double>() == doctest::Approx(6.0 * std::acos(1.0 / 3.0)));
  CHECK(j["tuple_counts"]["4"].get<int>() == 6);

  r = run({"bench", "--dim", "2", "--facets", "10", "--seed", "1"});
  REQUIRE(r.code == cli::kOk);
  j = nlohmann::json::parse(r.out);
  REQUIRE(j.is_array());
  CHECK(j[0]["tuples_examined"].get<int>() == 285);
  CHECK(j[0]["expected_tuples"].get<int>() == 285);
  CHECK(run({"bench", "--dim", "9", "--facets", "10"}).code == cli::kInputError);
}

TEST_CASE("svg output") {
  auto r = run({"solve", "--fixture", "equilateral_triangle", "--format", "svg"});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out.rfind("<?xml", 0) == 0);
  CHECK(r.out.find("<svg") != std::string::npos);
  CHECK(r.out.find("</svg>") != std::string::npos);
  // The polygon, then the closed trajectory with a marker per bounce.
  std::size_t polygons = 0, circles = 0;
  for (auto at = r.out.find("<polygon"); at != std::string::npos; at = r.out.find("<polygon", at + 1)) ++polygons;
  for (auto at = r.out.find("<circle"); at != std::string::npos; at = r.out.find("<circle", at + 1)) ++circles;
  CHECK(polygons == 2);
  CHECK(circles == 3);
  CHECK(run({"solve", "--fixture", "example_a", "--format", "svg"}).code == cli::kInputError);
}

TEST_CASE("worker count does not change the answer") {
  for (const auto* fixture : {"example_e", "regular_simplex(3)", "unit_square"}) {
    const auto one = run({"solve", "--fixture", fixture, "--workers", "1"});
    const auto many = run({"solve", "--fixture", fixture, "--workers", "8"});
    REQUIRE(one.code == many.code);
    CHECK(strip_times(nlohmann::ordered_json::parse(one.out)).dump() ==
          strip_times(nlohmann::ordered_json::parse(many.out)).dump());
  }
}
