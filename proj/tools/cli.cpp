#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "polybilliard/fixtures.hpp"
#include "polybilliard/io.hpp"
#include "polybilliard/search.hpp"
#include "polybilliard/verify.hpp"

namespace polybilliard::cli {

namespace {

struct RunConfig {
  std::string fixture;
  std::string input;
  std::string trajectory;
  int reference = -1;
  int max_bounces = 0;
  double tol_feas = ToleranceProfile{}.feas;
  int workers = std::max(1u, std::thread::hardware_concurrency());
  std::string format = "json";
  std::string output;

  // gen / bench
  std::vector<int> dims;
  std::vector<int> facets;
  int points = 0;
  std::uint64_t seed = 1;
};

ToleranceProfile tolerance(const RunConfig& c) {
  ToleranceProfile t;
  t.feas = c.tol_feas;
  t.validate();
  return t;
}

struct Loaded {
  std::string name;
  Polytope polytope;
  std::vector<ReferenceTrajectory> references;
};

Loaded load_polytope(const RunConfig& c, const ToleranceProfile& tol) {
  if (c.fixture.empty() == c.input.empty()) fail(ErrorKind::InvalidInput, "give exactly one of --fixture or --input");
  if (!c.fixture.empty()) {
    auto f = builtin(c.fixture);
    return Loaded{f.name, f.polytope, f.references};
  }
  const auto j = read_json_file(c.input);
  std::string name = c.input;
  if (j.is_object() && j.contains("name") && j["name"].is_string()) name = j["name"].get<std::string>();
  return Loaded{name, polytope_from_json(j, tol), {}};
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(c.output);
  if (!file) fail(ErrorKind::InvalidInput, "cannot write " + c.output);
  file << text;
}

std::string format_point(const Vec& v) {
  std::ostringstream os;
  os << std::setprecision(12) << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
  os << ")";
  return os.str();
}

int cmd_solve(const RunConfig& c, std::ostream& out) {
  const auto tol = tolerance(c);
  const auto loaded = load_polytope(c, tol);
  SearchOptions opts;
  opts.max_bounces = c.max_bounces;
  opts.workers = c.workers;
  opts.tol = tol;
  const auto report = search_min(loaded.polytope, opts);

  if (c.format == "svg") {
    emit(c, render_svg(loaded.polytope, report.best ? &*report.best : nullptr), out);
  } else if (c.format == "text") {
    std::ostringstream os;
    os << std::setprecision(12);
    os << "polytope " << loaded.name << " (dim " << loaded.polytope.dim() << ", " << loaded.polytope.facet_count()
       << " facets)\n";
    if (report.best) {
      os << "length " << report.best->length << "\nbounces " << report.best->bounces() << "\n";
      for (const auto& p : report.best->points) os << "  " << format_point(p) << "\n";
    } else {
      os << "no regular closed billiard trajectory\n";
    }
    for (const auto& [m, s] : report.per_m) {
      os << "m=" << m << " tuples " << s.tuples << " best ";
      if (s.best_length) {
        os << *s.best_length;
      } else {
        os << "-";
      }
      os << "\n";
    }
    os << "tuples examined " << report.tuples_examined << "\n";
    emit(c, os.str(), out);
  } else {
    emit(c, search_report_to_json(report).dump(2) + "\n", out);
  }
  return report.best ? kOk : kNoRegularTrajectory;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  const auto tol = tolerance(c);
  const auto loaded = load_polytope(c, tol);
  TrajectoryInput input;
  if (!c.trajectory.empty()) {
    if (c.reference >= 0) fail(ErrorKind::InvalidInput, "give only one of --trajectory or --reference");
    input = trajectory_from_json(read_json_file(c.trajectory), loaded.polytope.dim());
  } else {
    const int k = std::max(0, c.reference);
    if (k >= static_cast<int>(loaded.references.size())) {
      fail(ErrorKind::InvalidInput, "no reference trajectory " + std::to_string(k) + " for this polytope");
    }
    input.points = loaded.references[static_cast<std::size_t>(k)].points;
  }

  auto report = verify_billiard(loaded.polytope, input.points, tol);
  if (input.length && std::abs(*input.length - report.length) > 1e-9 * std::max(1.0, report.length)) {
    report.notes.push_back("stated length differs from the recomputed one");
  }
  if (input.regular && *input.regular != report.regular) {
    report.notes.push_back("stated regularity differs from the recomputed one");
  }
  if (input.facets) {
    std::vector<std::vector<int>> active;
    for (const auto& pc : report.per_point) active.push_back(pc.active);
    if (*input.facets != active) report.notes.push_back("stated facets differ from the recomputed active sets");
  }

  if (c.format == "svg") {
    const auto traj = make_trajectory(loaded.polytope, input.points, tol);
    emit(c, render_svg(loaded.polytope, &traj), out);
  } else if (c.format == "text") {
    std::ostringstream os;
    os << std::setprecision(12) << "valid " << report.valid_billiard << "\nregular " << report.regular << "\nin_FT "
       << report.in_FT << "\nlength " << report.length << "\n";
    for (const auto& n : report.notes) os << "note: " << n << "\n";
    emit(c, os.str(), out);
  } else {
    emit(c, verification_to_json(report).dump(2) + "\n", out);
  }
  return report.valid_billiard ? kOk : kVerificationFailed;
}

int cmd_inspect(const RunConfig& c, std::ostream& out) {
  const auto tol = tolerance(c);
  const auto loaded = load_polytope(c, tol);
  const auto& p = loaded.polytope;
  const auto acute = is_acute(p, tol);
  Json j = polytope_to_json(p, loaded.name);
  j["facet_count"] = p.facet_count();
  j["vertex_count"] = p.vertices().size();
  j["diameter"] = p.diameter();
  j["acute"] = acute.acute;
  j["dihedral_angle_sum"] = acute.angle_sum;
  Json tuples = Json::object();
  const int max_m = c.max_bounces > 0 ? c.max_bounces : p.dim() + 1;
  for (int m = 2; m <= max_m; ++m) tuples[std::to_string(m)] = tuple_count(p.facet_count(), m);
  j["tuple_counts"] = tuples;
  j["references"] = Json::array();
  for (const auto& r : loaded.references) {
    Json e;
    e["points"] = Json::array();
    for (const auto& x : r.points) e["points"].push_back(vec_to_json(x));
    e["expected_length"] = r.expected_length;
    e["expected_regular"] = r.expected_regular;
    e["note"] = r.note;
    j["references"].push_back(e);
  }
  if (c.format == "svg") {
    emit(c, render_svg(p), out);
  } else {
    emit(c, j.dump(2) + "\n", out);
  }
  return kOk;
}

int cmd_gen(const RunConfig& c, std::ostream& out) {
  if (c.dims.size() != 1) fail(ErrorKind::InvalidInput, "gen takes exactly one --dim");
  const int dim = c.dims.front();
  Polytope p = [&] {
    if (!c.facets.empty()) {
      if (c.facets.size() != 1) fail(ErrorKind::InvalidInput, "gen takes at most one --facets");
      return random_polytope_with_facets(dim, c.facets.front(), c.seed);
    }
    if (c.points <= 0) fail(ErrorKind::InvalidInput, "gen needs --points or --facets");
    return random_polytope(dim, c.points, c.seed);
  }();
  emit(c, polytope_to_json(p, "random").dump(2) + "\n", out);
  return kOk;
}

std::uint64_t expected_tuples(int facets, int max_m) {
  std::uint64_t total = 0;
  for (int m = 2; m <= std::min(max_m, facets); ++m) total += tuple_count(facets, m);
  return total;
}

int cmd_bench(const RunConfig& c, std::ostream& out) {
  if (c.dims.empty() || c.facets.empty()) fail(ErrorKind::InvalidInput, "bench needs --dim and --facets");
  for (int d : c.dims) {
    if (d < 2 || d > 5) fail(ErrorKind::InvalidInput, "bench dimensions must lie in 2..5");
    for (int f : c.facets) {
      if (f < d + 1) fail(ErrorKind::InvalidInput, "bench facet counts must exceed the dimension");
    }
  }
  const auto tol = tolerance(c);
  Json rows = Json::array();
  std::ostringstream text;
  text << std::setprecision(5) << "# facets  dim  tuples  expected  per-m seconds\n";
  bool counts_ok = true;
  for (int d : c.dims) {
    for (int f : c.facets) {
      const auto p = random_polytope_with_facets(d, f, c.seed);
      SearchOptions opts;
      opts.max_bounces = c.max_bounces;
      opts.workers = c.workers;
      opts.tol = tol;
      const auto report = search_min(p, opts);
      const int max_m = c.max_bounces > 0 ? c.max_bounces : d + 1;
      const auto expected = expected_tuples(f, max_m);
      counts_ok = counts_ok && expected == report.tuples_examined;
      Json row;
      row["facets"] = f;
      row["dim"] = d;
      row["tuples_examined"] = report.tuples_examined;
      row["expected_tuples"] = expected;
      row["best_length"] = report.best ? Json(report.best->length) : Json(nullptr);
      Json per_m = Json::object();
      text << f << "  " << d << "  " << report.tuples_examined << "  " << expected << " ";
      for (const auto& [m, s] : report.per_m) {
        per_m[std::to_string(m)] = {{"tuples", s.tuples}, {"elapsed_s", s.elapsed_s}};
        text << " " << s.elapsed_s;
      }
      text << "\n";
      row["per_m"] = per_m;
      rows.push_back(row);
    }
  }
  if (c.format == "text") {
    emit(c, text.str(), out);
  } else {
    emit(c, rows.dump(2) + "\n", out);
  }
  if (!counts_ok) fail(ErrorKind::NumericalFailure, "tuple counts differ from the closed form");
  return kOk;
}

void add_polytope_options(CLI::App* app, RunConfig& c) {
  app->add_option("--fixture", c.fixture, "builtin polytope, e.g. example_a or regular_simplex(3)");
  app->add_option("--input", c.input, "polytope JSON file");
  app->add_option("--tol-feas", c.tol_feas, "feasibility tolerance");
  app->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "text", "svg"}));
  app->add_option("--output", c.output, "output file (default: standard output)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Shortest closed regular billiard trajectories in convex polytopes"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "search for the shortest regular closed billiard trajectory");
  add_polytope_options(solve, c);
  solve->add_option("--max-bounces", c.max_bounces, "largest number of bounces (default dim + 1)")
      ->check(CLI::Range(2, 64));
  solve->add_option("--workers", c.workers, "worker threads")->check(CLI::Range(1, 1024));

  auto* verify = app.add_subcommand("verify", "check a closed polygonal line against the reflection law");
  add_polytope_options(verify, c);
  verify->add_option("--trajectory", c.trajectory, "trajectory JSON file");
  verify->add_option("--reference", c.reference, "index of a fixture reference trajectory")->check(CLI::NonNegativeNumber);

  auto* inspect = app.add_subcommand("inspect", "summarize a polytope");
  add_polytope_options(inspect, c);
  inspect->add_option("--max-bounces", c.max_bounces, "largest tuple length to count")->check(CLI::Range(2, 64));

  auto* gen = app.add_subcommand("gen", "generate a random polytope");
  gen->add_option("--dim", c.dims, "dimension")->required();
  gen->add_option("--points", c.points, "number of random points");
  gen->add_option("--facets", c.facets, "exact facet count instead of a point count");
  gen->add_option("--seed", c.seed, "random seed");
  gen->add_option("--output", c.output, "output file (default: standard output)");

  auto* bench = app.add_subcommand("bench", "time the search on random polytopes");
  bench->add_option("--dim", c.dims, "dimensions")->required();
  bench->add_option("--facets", c.facets, "facet counts")->required();
  bench->add_option("--seed", c.seed, "random seed");
  bench->add_option("--max-bounces", c.max_bounces, "largest number of bounces (default dim + 1)")
      ->check(CLI::Range(2, 64));
  bench->add_option("--workers", c.workers, "worker threads")->check(CLI::Range(1, 1024));
  bench->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "text"}));
  bench->add_option("--output", c.output, "output file (default: standard output)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (*solve) return cmd_solve(c, out);
    if (*verify) return cmd_verify(c, out);
    if (*inspect) return cmd_inspect(c, out);
    if (*gen) return cmd_gen(c, out);
    if (*bench) return cmd_bench(c, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace polybilliard::cli
