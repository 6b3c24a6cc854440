#include <algorithm>

#include "polybilliard/search.hpp"

namespace polybilliard {

FacetTuple FacetTuple::canonical(std::vector<int> indices) {
  if (!indices.empty()) {
    auto smallest = std::min_element(indices.begin(), indices.end());
    std::rotate(indices.begin(), smallest, indices.end());
  }
  return FacetTuple{std::move(indices)};
}

FacetTupleEnumerator::FacetTupleEnumerator(int facets, int bounces) : f_(facets), m_(bounces) {
  if (m_ < 2 || m_ > f_) done_ = true;
}

// Tuples are sequences (a, b_2..b_m) with distinct b_k > a, visited in
// lexicographic order; the first entry being the minimum makes each the
// canonical representative of its rotation class.
bool FacetTupleEnumerator::next(FacetTuple& out) {
  if (done_) return false;
  if (!started_) {
    started_ = true;
    current_.resize(static_cast<std::size_t>(m_));
    for (int k = 0; k < m_; ++k) current_[static_cast<std::size_t>(k)] = k;
  } else if (!advance()) {
    done_ = true;
    return false;
  }
  out.indices = current_;
  return true;
}

bool FacetTupleEnumerator::advance() {
  auto used = [&](int upto, int value) {
    for (int k = 0; k < upto; ++k) {
      if (current_[static_cast<std::size_t>(k)] == value) return true;
    }
    return false;
  };
  // Smallest values > first entry that are unused among the earlier slots.
  auto fill_from = [&](int pos) {
    for (int k = pos; k < m_; ++k) {
      int v = current_[0] + 1;
      while (used(k, v)) ++v;
      if (v >= f_) return false;
      current_[static_cast<std::size_t>(k)] = v;
    }
    return true;
  };
  for (int pos = m_ - 1; pos >= 1; --pos) {
    for (int v = current_[static_cast<std::size_t>(pos)] + 1; v < f_; ++v) {
      if (used(pos, v)) continue;
      current_[static_cast<std::size_t>(pos)] = v;
      if (fill_from(pos + 1)) return true;
      break;
    }
  }
  // Move the leading (minimum) entry forward.
  while (current_[0] + m_ <= f_ - 1) {
    ++current_[0];
    if (fill_from(1)) return true;
  }
  return false;
}

std::vector<FacetTuple> enumerate_facet_tuples(int facets, int bounces) {
  std::vector<FacetTuple> out;
  FacetTupleEnumerator e(facets, bounces);
  FacetTuple t;
  while (e.next(t)) out.push_back(t);
  return out;
}

std::uint64_t tuple_count(int facets, int bounces) {
  if (bounces < 2 || bounces > facets) return 0;
  std::uint64_t c = 1;
  for (int k = 0; k < bounces; ++k) c = c * static_cast<std::uint64_t>(facets - k) / static_cast<std::uint64_t>(k + 1);
  for (int k = 2; k < bounces; ++k) c *= static_cast<std::uint64_t>(k);
  return c;
}

const char* to_string(Stage s) {
  switch (s) {
    case Stage::RankU: return "rank_U";
    case Stage::KernelMu: return "kernel_mu";
    case Stage::Socp: return "socp";
    case Stage::RankN: return "rank_N";
    case Stage::KernelLambda: return "kernel_lambda";
    case Stage::LpInfeasible: return "lp_infeasible";
    case Stage::LpNonregular: return "lp_nonregular";
    case Stage::Accepted: return "accepted";
  }
  return "unknown";
}

}  // namespace polybilliard
