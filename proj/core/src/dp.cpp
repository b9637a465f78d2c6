#include "parcpt/dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace parcpt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Ties within this slack are never pruned.
double prune_slack(double f) { return 1e-12 * std::max(1.0, std::abs(f)); }

void check_window(const PrefixSums& prefix, DataWindow w) {
  if (w.begin < 0 || w.end > prefix.size() || w.begin >= w.end) {
    throw InvalidInput("data window (" + std::to_string(w.begin) + ", " + std::to_string(w.end) +
                       "] invalid for n = " + std::to_string(prefix.size()));
  }
}

void check_candidates(DataWindow w, std::span<const Index> candidates) {
  Index prev = w.begin;
  for (Index b : candidates) {
    if (b <= prev || b >= w.end) {
      throw InvalidInput("candidate " + std::to_string(b) +
                         " not strictly increasing inside the window (" +
                         std::to_string(w.begin) + ", " + std::to_string(w.end) + ")");
    }
    prev = b;
  }
}

}  // namespace

DpSolver::DpSolver(const PrefixSums& prefix, DataWindow window,
                   std::span<const Index> candidates, double beta, DpOptions options)
    : prefix_(&prefix), beta_(beta), options_(options) {
  check_window(prefix, window);
  check_candidates(window, candidates);
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidInput("penalty must be positive");
  if (options_.min_segment_length < 1) throw InvalidConfig("min_segment_length must be >= 1");
  if (options_.min_segment_length > window.length()) {
    throw InvalidConfig("min_segment_length exceeds the data window");
  }

  index_.reserve(candidates.size() + 2);
  index_.push_back(window.begin);
  index_.insert(index_.end(), candidates.begin(), candidates.end());
  index_.push_back(window.end);

  best_.assign(index_.size(), kInf);
  back_.assign(index_.size(), kNone);
  best_[0] = 0.0;
  live_.push_back(0);
  if (options_.min_segment_length > 1) {
    retire_at_.assign(index_.size(), std::numeric_limits<Index>::max());
  }
}

Index DpSolver::advance() {
  if (finished()) throw InvalidInput("solver already finished");
  const std::size_t pos = next_++;
  const Index s = index_[pos];
  const bool at_end = pos + 1 == index_.size();
  const Index min_seg = options_.min_segment_length;

  if (min_seg > 1) {
    std::erase_if(live_, [&](std::size_t t) { return retire_at_[t] <= s; });
  }

  scratch_.resize(live_.size());
  double best = kInf;
  std::size_t arg = kNone;
  for (std::size_t j = 0; j < live_.size(); ++j) {
    const std::size_t t = live_[j];
    const Index from = index_[t];
    if (s - from < min_seg) {
      scratch_[j] = kInf;
      continue;
    }
    const double v = best_[t] + prefix_->rss(from, s);
    scratch_[j] = v;
    if (v < best) {
      best = v;
      arg = t;
    }
  }

  back_[pos] = arg;
  if (at_end) {
    best_[pos] = best;
    return s;
  }
  best_[pos] = best + beta_;
  if (arg == kNone) return s;  // unreachable under min_segment_length

  if (options_.prune) pelt_prune(pos);
  live_.push_back(pos);
  return s;
}

void DpSolver::pelt_prune(std::size_t pos) {
  const double f = best_[pos];
  const double threshold = f + prune_slack(f);
  const Index min_seg = options_.min_segment_length;
  if (min_seg == 1) {
    std::size_t keep = 0;
    for (std::size_t j = 0; j < live_.size(); ++j) {
      if (scratch_[j] < threshold) live_[keep++] = live_[j];
    }
    live_.resize(keep);
    return;
  }
  // A later s' can only use `pos` once s' - index_[pos] >= min_seg, so t
  // stays available until then.
  const Index retire = index_[pos] + min_seg;
  for (std::size_t j = 0; j < live_.size(); ++j) {
    if (std::isfinite(scratch_[j]) && scratch_[j] >= threshold) {
      retire_at_[live_[j]] = std::min(retire_at_[live_[j]], retire);
    }
  }
}

std::vector<Index> DpSolver::solve() {
  while (!finished()) advance();
  return backtrack();
}

std::vector<Index> DpSolver::live_indices() const {
  std::vector<Index> out;
  out.reserve(live_.size());
  for (std::size_t t : live_) out.push_back(index_[t]);
  return out;
}

std::size_t DpSolver::position_of(Index index) const {
  const auto it = std::lower_bound(index_.begin(), index_.end(), index);
  if (it == index_.end() || *it != index) {
    throw InvalidInput("index " + std::to_string(index) + " is not a solver position");
  }
  return static_cast<std::size_t>(it - index_.begin());
}

double DpSolver::value_at(Index index) const {
  const std::size_t pos = position_of(index);
  if (pos >= next_) throw InvalidInput("index " + std::to_string(index) + " not evaluated yet");
  return best_[pos];
}

std::vector<Index> DpSolver::backtrack() const {
  if (!finished()) throw InvalidInput("solver has not reached the window end");
  std::vector<Index> out;
  std::size_t pos = back_.back();
  while (pos != kNone && pos != 0) {
    out.push_back(index_[pos]);
    pos = back_[pos];
  }
  std::reverse(out.begin(), out.end());
  return out;
}

double penalised_cost(const PrefixSums& prefix, DataWindow window,
                      std::span<const Index> changepoints, double beta) {
  check_window(prefix, window);
  check_candidates(window, changepoints);
  double acc = 0.0;
  Index prev = window.begin;
  for (Index cp : changepoints) {
    acc = acc + prefix.rss(prev, cp) + beta;
    prev = cp;
  }
  return acc + prefix.rss(prev, window.end);
}

Segmentation optimal_partition(const PrefixSums& prefix, std::span<const Index> candidates,
                               double beta, DpOptions options) {
  const DataWindow full{0, prefix.size()};
  DpSolver solver(prefix, full, candidates, beta, options);
  Segmentation out;
  out.changepoints = solver.solve();
  out.penalised_cost = penalised_cost(prefix, full, out.changepoints, beta);
  out.n = prefix.size();
  out.beta = beta;
  return out;
}

Segmentation optimal_partition(const TimeSeries& y, const CandidateSet& candidates, double beta,
                               bool prune) {
  if (candidates.series_length() != y.size()) {
    throw InvalidInput("candidate set built for n = " +
                       std::to_string(candidates.series_length()) + ", series has n = " +
                       std::to_string(y.size()));
  }
  const PrefixSums prefix(y);
  return optimal_partition(prefix, candidates.indices(), beta, DpOptions{prune, 1});
}

Segmentation brute_force_partition(const TimeSeries& y, const CandidateSet& candidates,
                                   double beta, Index min_segment_length) {
  if (candidates.size() > kBruteForceLimit) {
    throw InvalidInput("brute force limited to " + std::to_string(kBruteForceLimit) +
                       " candidates, got " + std::to_string(candidates.size()));
  }
  if (candidates.series_length() != y.size()) {
    throw InvalidInput("candidate set does not match the series length");
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidInput("penalty must be positive");
  const PrefixSums prefix(y);
  const DataWindow full{0, y.size()};
  const auto b = candidates.indices();
  const std::size_t k = b.size();

  Segmentation best;
  best.n = y.size();
  best.beta = beta;
  best.penalised_cost = kInf;
  std::vector<Index> cps;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    cps.clear();
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (std::uint64_t{1} << i)) cps.push_back(b[i]);
    }
    Index prev = 0;
    bool feasible = true;
    for (Index cp : cps) {
      feasible = feasible && cp - prev >= min_segment_length;
      prev = cp;
    }
    if (!feasible || y.size() - prev < min_segment_length) continue;

    const double cost = penalised_cost(prefix, full, cps, beta);
    const bool better =
        cost < best.penalised_cost ||
        (cost == best.penalised_cost &&
         (cps.size() < best.changepoints.size() ||
          (cps.size() == best.changepoints.size() && cps < best.changepoints)));
    if (better) {
      best.penalised_cost = cost;
      best.changepoints = cps;
    }
  }
  if (!std::isfinite(best.penalised_cost)) {
    throw InvalidConfig("no segmentation satisfies min_segment_length");
  }
  return best;
}

}  // namespace parcpt
