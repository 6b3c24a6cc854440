#include <cmath>

#include "polybilliard/fixtures.hpp"
#include "polybilliard/search.hpp"
#include "polybilliard/verify.hpp"

namespace polybilliard {

namespace {

struct Edge {
  Vec a;
  Vec b;
};

constexpr double kGolden = 0.6180339887498949;
constexpr double kLineTol = 1e-10;
constexpr double kInsideMargin = 1e-6;

template <class F>
double golden_min(F&& f, double lo, double hi) {
  double x1 = hi - kGolden * (hi - lo);
  double x2 = lo + kGolden * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > kLineTol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGolden * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGolden * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

// Edge endpoints from the vertices incident to each facet.
std::vector<Edge> polygon_edges(const Polytope& p) {
  std::vector<Edge> edges;
  for (int i = 0; i < p.facet_count(); ++i) {
    const auto& inc = p.incidence()[static_cast<std::size_t>(i)];
    if (inc.size() != 2) fail(ErrorKind::NumericalFailure, "polygon edge without exactly two vertices");
    edges.push_back({p.vertices()[static_cast<std::size_t>(inc[0])], p.vertices()[static_cast<std::size_t>(inc[1])]});
  }
  return edges;
}

}  // namespace

std::optional<Oracle2dResult> brute_force_min_2d(const Polytope& polygon, int m_max) {
  if (polygon.dim() != 2) fail(ErrorKind::PreconditionViolation, "brute_force_min_2d: polygon must be 2-D");
  if (m_max < 2 || m_max > 3) fail(ErrorKind::InvalidInput, "brute_force_min_2d: m_max must be 2 or 3");
  const auto edges = polygon_edges(polygon);
  ToleranceProfile loose;
  loose.feas = 1e-6;

  std::optional<Oracle2dResult> best;
  for (int m = 2; m <= std::min(m_max, polygon.facet_count()); ++m) {
    for (const auto& tuple : enumerate_facet_tuples(polygon.facet_count(), m)) {
      std::vector<double> t(static_cast<std::size_t>(m), 0.5);
      auto point = [&](int j, double s) {
        const auto& e = edges[static_cast<std::size_t>(tuple[j])];
        return Vec((1.0 - s) * e.a + s * e.b);
      };
      auto perimeter = [&](const std::vector<double>& params) {
        double len = 0.0;
        for (int j = 0; j < m; ++j) {
          len += (point((j + 1) % m, params[static_cast<std::size_t>((j + 1) % m)]) -
                  point(j, params[static_cast<std::size_t>(j)]))
                     .norm();
        }
        return len;
      };

      double current = perimeter(t);
      for (int sweep = 0; sweep < 5000; ++sweep) {
        for (int j = 0; j < m; ++j) {
          auto trial = t;
          t[static_cast<std::size_t>(j)] = golden_min(
              [&](double s) {
                trial[static_cast<std::size_t>(j)] = s;
                return perimeter(trial);
              },
              0.0, 1.0);
        }
        const double next = perimeter(t);
        const bool settled = current - next < 1e-15 * std::max(1.0, current);
        current = next;
        if (settled) break;
      }

      bool inside = true;
      for (double s : t) inside = inside && s > kInsideMargin && s < 1.0 - kInsideMargin;
      if (!inside) continue;
      std::vector<Vec> pts;
      for (int j = 0; j < m; ++j) pts.push_back(point(j, t[static_cast<std::size_t>(j)]));
      bool distinct = true;
      for (int j = 0; j < m; ++j) {
        distinct = distinct && (pts[static_cast<std::size_t>((j + 1) % m)] - pts[static_cast<std::size_t>(j)]).norm() >
                                   kInsideMargin * polygon.diameter();
      }
      if (!distinct) continue;
      const auto report = verify_billiard(polygon, pts, loose);
      if (!report.valid_billiard) continue;
      if (!best || report.length < best->length) best = Oracle2dResult{report.length, pts, tuple.indices};
    }
  }
  return best;
}

}  // namespace polybilliard
