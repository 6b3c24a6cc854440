#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

#include "polybilliard/search.hpp"

namespace polybilliard {

namespace {

constexpr double kLengthTie = 1e-9;
constexpr std::size_t kBatch = 64;

struct Accepted {
  std::uint64_t seq;
  CandidateResult result;
};

// a is preferred over b: shorter, then fewer bounces, then lexicographic tuple.
bool better(const CandidateResult& a, const CandidateResult& b) {
  const double la = a.trajectory->length;
  const double lb = b.trajectory->length;
  if (std::abs(la - lb) > kLengthTie * std::max(1.0, std::max(la, lb))) return la < lb;
  if (a.tuple.size() != b.tuple.size()) return a.tuple.size() < b.tuple.size();
  return a.tuple < b.tuple;
}

struct WorkerState {
  std::map<Stage, std::uint64_t> counts;
  std::vector<Accepted> accepted;
};

}  // namespace

SearchReport search_min(const Polytope& p, const SearchOptions& opts) {
  opts.tol.validate();
  const int max_m = opts.max_bounces > 0 ? opts.max_bounces : p.dim() + 1;
  if (max_m < 2) fail(ErrorKind::InvalidInput, "max_bounces must be at least 2");
  const int workers = std::max(1, opts.workers);

  SearchReport report;
  for (Stage s : kAllStages) report.stage_counts[s] = 0;
  const auto start = std::chrono::steady_clock::now();

  for (int m = 2; m <= std::min(max_m, p.facet_count()); ++m) {
    const auto m_start = std::chrono::steady_clock::now();
    FacetTupleEnumerator enumerator(p.facet_count(), m);
    std::mutex source_mutex;
    std::uint64_t next_seq = 0;
    bool exhausted = false;

    // Hands out the next batch of tuples with their global sequence numbers.
    auto pull = [&](std::vector<FacetTuple>& batch, std::uint64_t& first_seq) {
      std::lock_guard<std::mutex> lock(source_mutex);
      batch.clear();
      first_seq = next_seq;
      FacetTuple t;
      while (!exhausted && batch.size() < kBatch) {
        if (!enumerator.next(t)) {
          exhausted = true;
          break;
        }
        batch.push_back(t);
      }
      next_seq += batch.size();
      return !batch.empty();
    };

    std::vector<WorkerState> states(static_cast<std::size_t>(workers));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    auto run = [&](std::size_t w) {
      try {
        std::vector<FacetTuple> batch;
        std::uint64_t seq = 0;
        while (pull(batch, seq)) {
          for (std::size_t k = 0; k < batch.size(); ++k) {
            auto r = evaluate_tuple(p, batch[k], opts.tol);
            ++states[w].counts[r.stage];
            if (r.stage == Stage::Accepted) states[w].accepted.push_back({seq + k, std::move(r)});
          }
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    };

    if (workers == 1) {
      run(0);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(run, static_cast<std::size_t>(w));
      for (auto& th : pool) th.join();
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }

    std::vector<Accepted> accepted;
    for (auto& st : states) {
      for (const auto& [stage, c] : st.counts) report.stage_counts[stage] += c;
      for (auto& a : st.accepted) accepted.push_back(std::move(a));
    }
    std::sort(accepted.begin(), accepted.end(), [](const Accepted& a, const Accepted& b) { return a.seq < b.seq; });

    BounceStats stats;
    stats.tuples = next_seq;
    const CandidateResult* best_m = nullptr;
    for (const auto& a : accepted) {
      if (!best_m || better(a.result, *best_m)) best_m = &a.result;
    }
    if (best_m) {
      stats.best_length = best_m->trajectory->length;
      stats.best_tuple = best_m->tuple;
      if (!report.best || better(*best_m, CandidateResult{*report.best_tuple, Stage::Accepted, report.best, ""})) {
        report.best = best_m->trajectory;
        report.best_tuple = best_m->tuple;
      }
    }
    stats.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - m_start).count();
    report.tuples_examined += stats.tuples;
    report.per_m[m] = stats;
  }

  report.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.warnings.push_back(
      "only regular trajectories are searched; a shorter minimizer through lower-dimensional faces may exist");
  if (!report.best) report.warnings.push_back("no regular closed billiard trajectory was found");
  return report;
}

}  // namespace polybilliard
