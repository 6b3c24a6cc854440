#include <cmath>
#include <set>

#include "doctest.h"
#include "polybilliard/fixtures.hpp"
#include "polybilliard/search.hpp"
#include "polybilliard/verify.hpp"

using namespace polybilliard;

namespace {

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidInput;
}

double perimeter(const std::vector<Vec>& pts) {
  double len = 0.0;
  for (std::size_t j = 0; j < pts.size(); ++j) len += (pts[(j + 1) % pts.size()] - pts[j]).norm();
  return len;
}

// Facets of a 3-D hull: distinct planes through 3 vertices with every
// vertex on one side.
int facets_by_plane_enumeration(const std::vector<Vec>& v) {
  std::vector<std::pair<Vec, double>> planes;
  const std::size_t k = v.size();
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      for (std::size_t c = b + 1; c < k; ++c) {
        const Eigen::Vector3d e1 = v[b] - v[a];
        const Eigen::Vector3d e2 = v[c] - v[a];
        Vec n = e1.cross(e2);
        if (n.norm() < 1e-9) continue;
        n.normalize();
        double lo = 0.0, hi = 0.0;
        for (const auto& x : v) {
          lo = std::min(lo, n.dot(x - v[a]));
          hi = std::max(hi, n.dot(x - v[a]));
        }
        if (lo < -1e-9 && hi > 1e-9) continue;
        if (hi > 1e-9) n = -n;
        const double off = n.dot(v[a]);
        bool seen = false;
        for (const auto& [m, o] : planes) seen = seen || ((m - n).norm() < 1e-9 && std::abs(o - off) < 1e-9);
        if (!seen) planes.emplace_back(n, off);
      }
    }
  }
  return static_cast<int>(planes.size());
}

}  // namespace

TEST_CASE("every reference trajectory re-verifies") {
  for (const auto& name : builtin_names()) {
    if (name == "regular_simplex") continue;
    const auto fx = builtin(name);
    CHECK(fx.name == name);
    for (const auto& ref : fx.references) {
      const auto r = verify_billiard(fx.polytope, ref.points);
      INFO(name, " ", ref.note);
      CHECK(r.valid_billiard);
      CHECK(r.in_FT);
      CHECK(r.regular == ref.expected_regular);
      CHECK(std::abs(r.length - ref.expected_length) <= 1e-9 * ref.expected_length);
      CHECK(r.length == doctest::Approx(perimeter(ref.points)).epsilon(1e-12));
    }
  }
  // The recomputed distance between the printed points is authoritative.
  const auto b = builtin("example_b");
  CHECK(b.references[0].expected_length == doctest::Approx(16.0 / std::sqrt(5.0)));
}

TEST_CASE("fixture shapes") {
  const auto a = builtin("example_a").polytope;
  CHECK(a.dim() == 3);
  CHECK(a.facet_count() == 5);
  CHECK(a.vertices().size() == 6);
  CHECK(builtin("unit_square").polytope.facet_count() == 4);
  CHECK(builtin("equilateral_triangle").polytope.facet_count() == 3);
  for (const auto* name : {"example_a", "example_b", "example_c", "example_e", "example_f"}) {
    const auto p = builtin(name).polytope;
    CHECK(p.facet_count() == facets_by_plane_enumeration(p.vertices()));
  }

  for (int n = 2; n <= 5; ++n) {
    const auto s = regular_simplex(n);
    CHECK(s.dim() == n);
    CHECK(s.facet_count() == n + 1);
    for (std::size_t i = 0; i < s.vertices().size(); ++i) {
      for (std::size_t j = i + 1; j < s.vertices().size(); ++j) {
        CHECK((s.vertices()[i] - s.vertices()[j]).norm() == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
  CHECK(builtin("regular_simplex(4)").polytope.dim() == 4);
  FixtureParams params;
  params.dim = 3;
  CHECK(builtin("regular_simplex", params).polytope.facet_count() == 4);
}

TEST_CASE("example_e family") {
  for (double eps : {0.01, 0.05, 0.15}) {
    FixtureParams params;
    params.epsilon = eps;
    const auto e = builtin("example_e", params);
    REQUIRE(e.references.size() == 3);
    const bool expected[] = {false, true, false};
    for (int a = 0; a < 3; ++a) {
      const auto& pts = e.references[static_cast<std::size_t>(a)].points;
      for (const auto& x : pts) CHECK(x(1) == doctest::Approx(-static_cast<double>(a)));
      const auto r = verify_billiard(e.polytope, pts);
      CHECK(r.valid_billiard);
      CHECK(r.length == doctest::Approx(1.5));
      CHECK(r.regular == expected[a]);
    }
    CHECK(active_facets(e.polytope, e.references[2].points[2]).size() >= 3);
    const auto f = builtin("example_f", params);
    CHECK(normal_cone_generators(f.polytope, f.references[0].points[2]).size() == 2);
  }
  FixtureParams tenth;
  tenth.epsilon = 0.1;
  const auto parsed = builtin("example_e(0.1)").polytope;
  const auto direct = builtin("example_e", tenth).polytope;
  REQUIRE(parsed.vertices().size() == direct.vertices().size());
  for (std::size_t i = 0; i < parsed.vertices().size(); ++i) CHECK(parsed.vertices()[i] == direct.vertices()[i]);
}

TEST_CASE("fixture errors") {
  FixtureParams params;
  for (double eps : {0.0, -0.1, 0.2, 0.5}) {
    params.epsilon = eps;
    CHECK(kind_of([&] { builtin("example_e", params); }) == ErrorKind::InvalidInput);
    CHECK(kind_of([&] { builtin("example_f", params); }) == ErrorKind::InvalidInput);
  }
  CHECK(kind_of([] { builtin("no_such_shape"); }) == ErrorKind::InvalidInput);
  CHECK(kind_of([] { builtin("regular_simplex(1)"); }) == ErrorKind::InvalidInput);
  CHECK(kind_of([] { builtin("example_e(abc)"); }) == ErrorKind::InvalidInput);
  CHECK(kind_of([] { random_polytope(1, 5, 0); }) == ErrorKind::InvalidInput);
}

TEST_CASE("random polytopes are reproducible") {
  for (int dim = 2; dim <= 4; ++dim) {
    const auto p = random_polytope(dim, 9, 42);
    const auto q = random_polytope(dim, 9, 42);
    REQUIRE(p.vertices().size() == q.vertices().size());
    for (std::size_t i = 0; i < p.vertices().size(); ++i) CHECK(p.vertices()[i] == q.vertices()[i]);
    CHECK(p.dim() == dim);
    CHECK(p.facet_count() >= dim + 1);
    const auto other = random_polytope(dim, 9, 43);
    CHECK((other.vertices().size() != p.vertices().size() || other.vertices()[0] != p.vertices()[0]));
  }
  for (auto [dim, facets] : std::vector<std::pair<int, int>>{{2, 10}, {3, 14}, {4, 11}}) {
    const auto p = random_polytope_with_facets(dim, facets, 7);
    CHECK(p.dim() == dim);
    CHECK(p.facet_count() == facets);
  }
}

TEST_CASE("polygon oracle") {
  const auto tri = brute_force_min_2d(builtin("equilateral_triangle").polytope);
  REQUIRE(tri);
  CHECK(tri->length == doctest::Approx(1.5).epsilon(1e-7));
  CHECK(tri->points.size() == 3);
  const auto sq = brute_force_min_2d(builtin("unit_square").polytope);
  REQUIRE(sq);
  CHECK(sq->length == doctest::Approx(2.0).epsilon(1e-7));

  // An obtuse triangle has no regular closed trajectory with 2 or 3 bounces.
  const auto obtuse = Polytope::from_vertices({Vec{{0.0, 0.0}}, Vec{{4.0, 0.0}}, Vec{{1.0, 0.5}}});
  CHECK_FALSE(brute_force_min_2d(obtuse));
  CHECK_FALSE(search_min(obtuse, SearchOptions{}).best);

  SearchOptions opts;
  opts.max_bounces = 3;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto p = random_polytope(2, 6, seed);
    const auto o = brute_force_min_2d(p);
    const auto s = search_min(p, opts);
    CHECK(o.has_value() == s.best.has_value());
    if (o && s.best) CHECK(o->length == doctest::Approx(s.best->length).epsilon(1e-6));
  }
}
