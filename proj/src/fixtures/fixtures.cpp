#include <cmath>
#include <random>
#include <sstream>

#include "polybilliard/fixtures.hpp"

namespace polybilliard {

namespace {

const double kSqrt3 = std::sqrt(3.0);

Vec v3(double x, double y, double z) { return Vec{{x, y, z}}; }
Vec v2(double x, double y) { return Vec{{x, y}}; }

Fixture example_a() {
  Fixture f{"example_a",
            Polytope::from_vertices({v3(-0.5, 0, 0), v3(0.5, 0, 0), v3(0, 0, 1), v3(-0.5, -0.5, 0), v3(0.5, -0.5, 0),
                                     v3(0, -0.5, 1)}),
            {},
            "triangular prism; the section z = 3/4 has the shorter trajectory "
            "(-1/8,-1/4,3/4), (1/8,-1/4,3/4) of length 1/2"};
  f.references.push_back({{v3(0, 0, 0.75), v3(0, -0.5, 0.75)}, 1.0, true, "length minimizer between front and back"});
  return f;
}

Fixture example_b() {
  Fixture f{"example_b",
            Polytope::from_vertices({v3(0, 0, 0), v3(4, 0, 0), v3(0, -4, 0), v3(3.2, -2.4, 0), v3(0, 0, 8),
                                     v3(0, -4, 8)}),
            {},
            "the printed length 16/(5 sqrt 5) disagrees with the printed points; "
            "the distance between them gives 16/sqrt 5"};
  f.references.push_back({{v3(0, 0, 4), v3(1.6, -3.2, 4)}, 16.0 / std::sqrt(5.0), false,
                          "length recomputed from the points"});
  return f;
}

Polytope example_c_polytope() {
  return Polytope::from_vertices(
      {v3(0, 0, 0), v3(1, 0, 0), v3(0.5, 0, kSqrt3 / 2), v3(0, -2, 0), v3(1, -2, 0)});
}

Fixture example_c() {
  Fixture f{"example_c", example_c_polytope(), {},
            "Fagnano triangle of the section y = -1; inside that section the "
            "2-bounce line (1/2,-1,0), (1/2,-1,sqrt3/4) is shorter"};
  f.references.push_back({{v3(0.5, -1, 0), v3(0.25, -1, kSqrt3 / 4), v3(0.75, -1, kSqrt3 / 4)}, 1.5, false,
                          "length minimizer"});
  return f;
}

Fixture example_d_base() {
  return Fixture{"example_d_base", example_c_polytope(), {},
                 "polytope of example_c; moving p_2 to (1/4 + d, -1, sqrt3/4) gives shorter "
                 "lines inside the section y = -1 that leave F(T) and converge to the minimizer as d -> 0"};
}

double checked_epsilon(const FixtureParams& params) {
  const double eps = params.epsilon.value_or(0.05);
  if (!(eps > 0.0 && eps < 0.2)) fail(ErrorKind::InvalidInput, "epsilon must lie in (0, 0.2)");
  return eps;
}

std::vector<Vec> fagnano_at(double y) {
  return {v3(-0.25, y, kSqrt3 / 4), v3(0.25, y, kSqrt3 / 4), v3(0, y, kSqrt3 / 2)};
}

Fixture example_e(const FixtureParams& params) {
  const double eps = checked_epsilon(params);
  const double s = eps / kSqrt3;
  Fixture f{"example_e",
            Polytope::from_vertices({v3(0, 0, 0), v3(-0.5, 0, kSqrt3 / 2), v3(0.5, 0, kSqrt3 / 2), v3(0, -2, 0),
                                     v3(0, -2, kSqrt3 / 2), v3(-0.5 + s, -2, kSqrt3 / 2 - eps),
                                     v3(0.5 - s, -2, kSqrt3 / 2 - eps)}),
            {},
            "a family of Fagnano triangles p^a in the sections y = -a, a in [0, 2], all of length 3/2"};
  f.references.push_back({fagnano_at(0.0), 1.5, false, "a = 0, first two points on edges of the front facet"});
  f.references.push_back({fagnano_at(-1.0), 1.5, true, "a = 1"});
  f.references.push_back({fagnano_at(-2.0), 1.5, false, "a = 2, third point is a vertex"});
  return f;
}

Fixture example_f(const FixtureParams& params) {
  const double eps = checked_epsilon(params);
  const double s = eps / kSqrt3;
  Fixture f{"example_f",
            Polytope::from_vertices({v3(0, 0, 0), v3(-0.5 + s, 0, kSqrt3 / 2 - eps), v3(-0.5 + s, 0, kSqrt3 / 2),
                                     v3(0.5 - s, 0, kSqrt3 / 2 - eps), v3(0, -2, 0),
                                     v3(-0.5 + s, -2, kSqrt3 / 2 - eps), v3(0.5 - s, -2, kSqrt3 / 2 - eps),
                                     v3(0.5 - s, -2, kSqrt3 / 2)}),
            {},
            "the unique minimizer has its third point inside an edge, so every regular trajectory is longer"};
  f.references.push_back({fagnano_at(-1.0), 1.5, false, "unique length minimizer"});
  return f;
}

Fixture unit_square() {
  Fixture f{"unit_square", Polytope::from_vertices({v2(0, 0), v2(1, 0), v2(1, 1), v2(0, 1)}), {}, ""};
  f.references.push_back({{v2(0.5, 0), v2(0.5, 1)}, 2.0, true, "double normal"});
  return f;
}

Fixture equilateral_triangle() {
  Fixture f{"equilateral_triangle", Polytope::from_vertices({v2(0, 0), v2(1, 0), v2(0.5, kSqrt3 / 2)}), {}, ""};
  f.references.push_back({{v2(0.5, 0), v2(0.75, kSqrt3 / 4), v2(0.25, kSqrt3 / 4)}, 1.5, true, "Fagnano triangle"});
  return f;
}

}  // namespace

Polytope regular_simplex(int n) {
  if (n < 2 || n > 8) fail(ErrorKind::InvalidInput, "regular_simplex: dimension must be in 2..8");
  // Orthonormal basis of {x in R^{n+1} : sum x = 0}.
  Mat diffs = Mat::Zero(n + 1, n);
  for (int i = 0; i < n; ++i) {
    diffs(i, i) = 1.0;
    diffs(i + 1, i) = -1.0;
  }
  const Mat basis = Eigen::HouseholderQR<Mat>(diffs).householderQ() * Mat::Identity(n + 1, n);
  const Vec centroid = Vec::Constant(n + 1, 1.0 / (n + 1) / std::sqrt(2.0));
  std::vector<Vec> pts;
  for (int i = 0; i <= n; ++i) {
    const Vec corner = Vec::Unit(n + 1, i) / std::sqrt(2.0);
    pts.push_back(basis.transpose() * (corner - centroid));
  }
  return Polytope::from_vertices(pts);
}

Fixture builtin(const std::string& name, const FixtureParams& params) {
  if (name == "example_a") return example_a();
  if (name == "example_b") return example_b();
  if (name == "example_c") return example_c();
  if (name == "example_d_base") return example_d_base();
  if (name == "example_e") return example_e(params);
  if (name == "example_f") return example_f(params);
  if (name == "unit_square") return unit_square();
  if (name == "equilateral_triangle") return equilateral_triangle();
  if (name == "regular_simplex") {
    const int n = params.dim.value_or(3);
    return Fixture{"regular_simplex(" + std::to_string(n) + ")", regular_simplex(n), {}, ""};
  }
  fail(ErrorKind::InvalidInput, "unknown fixture '" + name + "'");
}

Fixture builtin(const std::string& spec) {
  const auto open = spec.find('(');
  if (open == std::string::npos) return builtin(spec, FixtureParams{});
  if (spec.back() != ')') fail(ErrorKind::InvalidInput, "malformed fixture name '" + spec + "'");
  const std::string name = spec.substr(0, open);
  const std::string arg = spec.substr(open + 1, spec.size() - open - 2);
  FixtureParams params;
  std::istringstream in(arg);
  if (name == "regular_simplex") {
    int n = 0;
    if (!(in >> n) || !in.eof()) fail(ErrorKind::InvalidInput, "regular_simplex expects an integer dimension");
    params.dim = n;
  } else if (name == "example_e" || name == "example_f") {
    double eps = 0.0;
    if (!(in >> eps) || !in.eof()) fail(ErrorKind::InvalidInput, name + " expects a numeric epsilon");
    params.epsilon = eps;
  } else {
    fail(ErrorKind::InvalidInput, "fixture '" + name + "' takes no parameter");
  }
  return builtin(name, params);
}

std::vector<std::string> builtin_names() {
  return {"example_a", "example_b", "example_c", "example_d_base", "example_e",
          "example_f", "unit_square", "equilateral_triangle", "regular_simplex"};
}

Polytope random_polytope(int dim, int point_count, std::uint64_t seed) {
  if (dim < 2 || dim > 5) fail(ErrorKind::InvalidInput, "random_polytope: dim must be in 2..5");
  if (point_count < dim + 1) fail(ErrorKind::InvalidInput, "random_polytope: need at least dim + 1 points");
  for (int attempt = 0; attempt <= 10; ++attempt) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> scale(1.0, 3.0);
    std::vector<Vec> pts;
    for (int k = 0; k < point_count; ++k) {
      Vec x(dim);
      for (int i = 0; i < dim; ++i) x(i) = normal(rng);
      pts.push_back(scale(rng) * x);
    }
    try {
      return Polytope::from_vertices(pts);
    } catch (const Error&) {
    }
  }
  fail(ErrorKind::NumericalFailure, "random_polytope: degenerate hull after 10 retries");
}

Polytope random_polytope_with_facets(int dim, int facets, std::uint64_t seed) {
  if (facets < dim + 1) fail(ErrorKind::InvalidInput, "random_polytope_with_facets: too few facets");
  for (std::uint64_t round = 0; round < 200; ++round) {
    for (int points = dim + 1; points <= 8 * facets; ++points) {
      const auto p = random_polytope(dim, points, seed + 1000 * round + static_cast<std::uint64_t>(points));
      if (p.facet_count() == facets) return p;
      if (p.facet_count() > facets + facets / 2 + 2) break;
    }
  }
  fail(ErrorKind::NumericalFailure, "random_polytope_with_facets: no polytope with the requested facet count");
}

}  // namespace polybilliard
