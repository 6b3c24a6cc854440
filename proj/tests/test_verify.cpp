#include <cmath>
#include <random>

#include "doctest.h"
#include "polybilliard/fixtures.hpp"
#include "polybilliard/search.hpp"
#include "polybilliard/verify.hpp"

using namespace polybilliard;

namespace {

const double kSqrt3 = std::sqrt(3.0);

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidInput;
}

// Reflection law by hand for a polygon: at each point the incoming and
// outgoing unit directions are mirror images across the edge line.
bool mirror_law_2d(const Polytope& p, const std::vector<Vec>& pts) {
  const std::size_t m = pts.size();
  for (std::size_t j = 0; j < m; ++j) {
    const Vec in = (pts[j] - pts[(j + m - 1) % m]).normalized();
    const Vec out = (pts[(j + 1) % m] - pts[j]).normalized();
    bool matched = false;
    for (const auto& h : p.facets()) {
      if (std::abs(h.normal.dot(pts[j]) - h.offset) > 1e-12) continue;
      const Vec mirrored = in - 2.0 * in.dot(h.normal) * h.normal;
      matched = matched || (mirrored - out).norm() < 1e-9;
    }
    if (!matched) return false;
  }
  return true;
}

std::vector<Vec> shifted(const std::vector<Vec>& pts, const Vec& c) {
  auto out = pts;
  for (auto& x : out) x += c;
  return out;
}

}  // namespace

TEST_CASE("reflection law on known trajectories") {
  const auto tri = builtin("equilateral_triangle").polytope;
  const std::vector<Vec> fagnano{Vec{{0.5, 0.0}}, Vec{{0.75, kSqrt3 / 4}}, Vec{{0.25, kSqrt3 / 4}}};
  REQUIRE(mirror_law_2d(tri, fagnano));
  auto r = verify_billiard(tri, fagnano);
  CHECK(r.valid_billiard);
  CHECK(r.regular);
  CHECK(r.in_FT);
  CHECK(r.length == doctest::Approx(1.5));
  REQUIRE(r.per_point.size() == 3);
  for (const auto& pc : r.per_point) {
    CHECK(pc.active.size() == 1);
    CHECK(pc.seg_length == doctest::Approx(0.5));
  }

  const auto c = builtin("example_c").polytope;
  r = verify_billiard(c, {Vec{{0.5, -1.0, 0.0}}, Vec{{0.25, -1.0, kSqrt3 / 4}}, Vec{{0.75, -1.0, kSqrt3 / 4}}});
  CHECK(r.valid_billiard);
  CHECK(r.length == doctest::Approx(1.5));

  const auto sq = builtin("unit_square").polytope;
  const std::vector<Vec> oblique{Vec{{0.3, 0.0}}, Vec{{0.7, 1.0}}};
  CHECK_FALSE(mirror_law_2d(sq, oblique));
  r = verify_billiard(sq, oblique);
  CHECK_FALSE(r.valid_billiard);
  CHECK(std::max(r.per_point[0].cone_residual, r.per_point[1].cone_residual) > 1e-9);

  // A point off the boundary is not a billiard trajectory.
  CHECK_FALSE(verify_billiard(sq, {Vec{{0.5, 0.1}}, Vec{{0.5, 1.0}}}).valid_billiard);
  // A vertex passed straight through is rejected.
  CHECK_FALSE(verify_billiard(sq, {Vec{{0.0, 0.0}}, Vec{{0.5, 0.5}}, Vec{{1.0, 1.0}}}).valid_billiard);
  CHECK_THROWS_AS(verify_billiard(sq, {Vec{{0.5, 0.0}}}), Error);
}

TEST_CASE("regularity") {
  CHECK(is_regular(builtin("example_a").polytope, {Vec{{0.0, 0.0, 0.75}}, Vec{{0.0, -0.5, 0.75}}}));
  const auto f = builtin("example_f");
  CHECK_FALSE(is_regular(f.polytope, f.references[0].points));
  const auto e = builtin("example_e");
  CHECK_FALSE(is_regular(e.polytope, e.references[2].points));
  CHECK(is_regular(e.polytope, e.references[1].points));
  CHECK(kind_of([&] { is_regular(e.polytope, {Vec{{0.0, -1.0, 0.3}}}); }) == ErrorKind::PreconditionViolation);
}

TEST_CASE("minimality conditions") {
  const auto a = builtin("example_a").polytope;
  auto t = make_trajectory(a, {Vec{{0.0, 0.0, 0.75}}, Vec{{0.0, -0.5, 0.75}}});
  auto mc = check_minimality_conditions(a, t);
  CHECK(mc.dim_v_ok);
  CHECK(mc.cone_dim_ok);
  CHECK(mc.dim_v == 1);
  CHECK(mc.cone_dims == std::vector<int>{1, 1});

  const auto e = builtin("example_e");
  t = make_trajectory(e.polytope, e.references[2].points);
  mc = check_minimality_conditions(e.polytope, t);
  CHECK(mc.dim_v_ok);
  CHECK(mc.cone_dim_ok);
  CHECK(mc.dim_v == 2);

  const auto sq = builtin("unit_square").polytope;
  const std::vector<Vec> diamond{Vec{{0.5, 0.0}}, Vec{{1.0, 0.5}}, Vec{{0.5, 1.0}}, Vec{{0.0, 0.5}}};
  REQUIRE(mirror_law_2d(sq, diamond));
  REQUIRE(verify_billiard(sq, diamond).valid_billiard);
  mc = check_minimality_conditions(sq, make_trajectory(sq, diamond));
  CHECK_FALSE(mc.dim_v_ok);
  CHECK(mc.dim_v == 2);
  CHECK(verify_billiard(sq, diamond).theorem1_ok == std::optional<bool>(false));
}

TEST_CASE("sliding to a non-regular trajectory") {
  const ToleranceProfile tol;
  const auto a = builtin("example_a").polytope;
  const auto t = make_trajectory(a, {Vec{{0.0, 0.0, 0.75}}, Vec{{0.0, -0.5, 0.75}}});
  const auto moved = translate_to_nonregular(a, t);
  CHECK(std::abs(moved.length - 1.0) <= 1e-12);
  CHECK_FALSE(moved.regular);
  CHECK_FALSE(is_regular(a, moved.points));
  CHECK(verify_billiard(a, moved.points).valid_billiard);
  const Vec c = moved.points[0] - t.points[0];
  CHECK((moved.points[1] - t.points[1] - c).norm() < 1e-12);
  CHECK(std::abs(c(1)) < 1e-12);
  bool on_edge = false;
  for (const auto& x : moved.points) on_edge = on_edge || active_facets(a, x, tol).size() >= 2;
  CHECK(on_edge);

  const auto sq = builtin("unit_square").polytope;
  const auto chord = make_trajectory(sq, {Vec{{0.5, 0.0}}, Vec{{0.5, 1.0}}});
  const auto slid = translate_to_nonregular(sq, chord);
  CHECK(slid.length == doctest::Approx(2.0).epsilon(1e-12));
  const double x = slid.points[0](0);
  CHECK((std::abs(x) < 1e-12 || std::abs(x - 1.0) < 1e-12));
  CHECK(std::abs(slid.points[1](0) - x) < 1e-12);

  const auto tri = builtin("equilateral_triangle");
  const auto fag = make_trajectory(tri.polytope, tri.references[0].points);
  CHECK(kind_of([&] { translate_to_nonregular(tri.polytope, fag); }) == ErrorKind::PreconditionViolation);
  const auto f = builtin("example_f");
  const auto nonreg = make_trajectory(f.polytope, f.references[0].points);
  CHECK(kind_of([&] { translate_to_nonregular(f.polytope, nonreg); }) == ErrorKind::PreconditionViolation);
}

TEST_CASE("verification under translation of the whole picture") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  for (const auto* name : {"example_a", "example_c", "example_e", "unit_square", "equilateral_triangle"}) {
    const auto fx = builtin(name);
    for (const auto& ref : fx.references) {
      const auto base = verify_billiard(fx.polytope, ref.points);
      for (int trial = 0; trial < 3; ++trial) {
        Vec c(fx.polytope.dim());
        for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = 3.0 * g(rng);
        const auto moved = verify_billiard(fx.polytope.translated(c), shifted(ref.points, c));
        CHECK(moved.valid_billiard == base.valid_billiard);
        CHECK(moved.regular == base.regular);
        CHECK(moved.in_FT == base.in_FT);
        CHECK(moved.length == doctest::Approx(base.length).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("search results pass every check and break under tangential perturbation") {
  SearchOptions opts;
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 30 && checked < 8; ++seed) {
    const int dim = 2 + static_cast<int>(seed % 2);
    const auto p = random_polytope(dim, dim == 2 ? 7 : 6, seed);
    const auto r = search_min(p, opts);
    if (!r.best) continue;
    ++checked;
    const auto& t = *r.best;
    const auto report = verify_billiard(p, t.points);
    CHECK(report.valid_billiard);
    CHECK(report.regular);
    CHECK(report.in_FT);
    CHECK(is_regular(p, t.points));
    const auto mc = check_minimality_conditions(p, t);
    CHECK(mc.dim_v_ok);
    CHECK(mc.cone_dim_ok);
    CHECK_FALSE(can_translate_into_interior(p, t.points).translatable);

    // Slide one point inside its facet by 2e-3 of the diameter.
    const Vec u = p.facet(t.active_facets[0][0]).normal;
    Vec tangent = Vec::Unit(p.dim(), 0) - u(0) * u;
    if (tangent.norm() < 0.1) tangent = Vec::Unit(p.dim(), 1) - u(1) * u;
    tangent.normalize();
    for (double sign : {1.0, -1.0}) {
      auto pts = t.points;
      pts[0] += sign * 2e-3 * p.diameter() * tangent;
      if (locate(p, pts[0]) != PointLocation::Boundary) continue;
      CHECK_FALSE(verify_billiard(p, pts).valid_billiard);
    }
  }
  CHECK(checked >= 4);
}
