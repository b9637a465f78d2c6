#include "parcpt/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <numeric>
#include <optional>
#include <string>
#include <thread>

namespace parcpt {

SplitPlan chunk_split(Index n, Index workers, Index overlap) {
  DetectorConfig cfg;
  cfg.method = Method::chunk;
  cfg.workers = workers;
  cfg.overlap = overlap;
  validate(cfg, n);

  SplitPlan plan{Method::chunk, n, {}};
  plan.workers.reserve(static_cast<std::size_t>(workers));
  const Index width = n / workers;
  for (Index i = 1; i <= workers; ++i) {
    const Index first = i == 1 ? 1 : (i - 1) * width - overlap;
    const Index last = i == workers ? n - 1 : std::min(i * width + overlap, n - 1);
    WorkerAssignment w;
    w.data_first = first;
    w.data_last = last + 1;
    w.candidates.resize(static_cast<std::size_t>(last - first + 1));
    std::iota(w.candidates.begin(), w.candidates.end(), first);
    plan.workers.push_back(std::move(w));
  }
  return plan;
}

Index deal_quota(Index a, Index b, Index c) {
  if (b < 1) throw InvalidConfig("deal quota needs b >= 1");
  const Index r = ((a % b) + b) % b;
  // Largest Q with Q*b < c - r, i.e. Q*b <= c - r - 1.
  const Index room = c - r - 1;
  return room >= 0 ? room / b : -((-room + b - 1) / b);
}

SplitPlan deal_split(Index n, Index workers) {
  DetectorConfig cfg;
  cfg.method = Method::deal;
  cfg.workers = workers;
  validate(cfg, n);

  SplitPlan plan{Method::deal, n, {}};
  plan.workers.reserve(static_cast<std::size_t>(workers));
  for (Index i = 1; i <= workers; ++i) {
    WorkerAssignment w;
    w.data_first = 1;
    w.data_last = n;
    for (Index b = i; b <= n - 1; b += workers) w.candidates.push_back(b);
    plan.workers.push_back(std::move(w));
  }
  return plan;
}

void run_indexed(std::size_t count, unsigned threads,
                 const std::function<void(std::size_t)>& task) {
  if (threads == 0) threads = thread_cap();
  const std::size_t pool = std::min<std::size_t>(threads, count);
  if (pool <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }

  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> helpers;
    helpers.reserve(pool - 1);
    for (std::size_t t = 0; t + 1 < pool; ++t) helpers.emplace_back(drain);
    drain();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

MergeInput run_split_phase(const PrefixSums& prefix, const SplitPlan& plan, double beta,
                           DpOptions options, unsigned threads) {
  if (plan.n != prefix.size()) {
    throw InvalidInput("split plan built for n = " + std::to_string(plan.n) +
                       ", series has n = " + std::to_string(prefix.size()));
  }
  MergeInput out;
  out.per_worker.resize(plan.workers.size());
  run_indexed(plan.workers.size(), threads, [&](std::size_t i) {
    const WorkerAssignment& w = plan.workers[i];
    DpSolver solver(prefix, w.window(), w.candidates, beta, options);
    out.per_worker[i] = solver.solve();
  });

  for (const auto& cps : out.per_worker) {
    out.merged.insert(out.merged.end(), cps.begin(), cps.end());
  }
  std::sort(out.merged.begin(), out.merged.end());
  out.merged.erase(std::unique(out.merged.begin(), out.merged.end()), out.merged.end());
  return out;
}

MergeInput run_split_phase(const TimeSeries& y, const SplitPlan& plan, double beta) {
  const PrefixSums prefix(y);
  return run_split_phase(prefix, plan, beta);
}

Segmentation run_merge_phase(const PrefixSums& prefix, const MergeInput& merged, double beta,
                             DpOptions options) {
  return optimal_partition(prefix, merged.merged, beta, options);
}

Segmentation run_merge_phase(const TimeSeries& y, const MergeInput& merged, double beta) {
  const PrefixSums prefix(y);
  return run_merge_phase(prefix, merged, beta);
}

SplitPlan make_plan(const DetectorConfig& cfg, Index n) {
  validate(cfg, n);
  switch (cfg.method) {
    case Method::chunk:
      return chunk_split(n, cfg.workers, cfg.overlap.value_or(default_overlap(n)));
    case Method::deal:
      return deal_split(n, cfg.workers);
    case Method::pelt:
      break;
  }
  WorkerAssignment all;
  all.data_first = 1;
  all.data_last = n;
  all.candidates.resize(static_cast<std::size_t>(n - 1));
  std::iota(all.candidates.begin(), all.candidates.end(), Index{1});
  return SplitPlan{Method::pelt, n, {std::move(all)}};
}

Segmentation detect(const TimeSeries& input, const DetectorConfig& cfg) {
  const Index n = input.size();
  validate(cfg, n);
  if (cfg.penalty.dimension != input.dim()) {
    throw InvalidConfig("penalty dimension " + std::to_string(cfg.penalty.dimension) +
                        " does not match series dimension " + std::to_string(input.dim()));
  }
  std::optional<TimeSeries> scaled;
  if (cfg.scale_by_noise) scaled = scale_by_noise(input);
  const PrefixSums prefix(scaled ? *scaled : input);
  const double beta = resolve_penalty(cfg.penalty, n);
  const DpOptions options{true, cfg.min_segment_length};

  if (cfg.method == Method::pelt) {
    const CandidateSet all = CandidateSet::full(n);
    return optimal_partition(prefix, all.indices(), beta, options);
  }

  const unsigned cap = thread_cap();
  const unsigned threads = cfg.max_threads == 0 ? cap : std::min(cfg.max_threads, cap);
  const SplitPlan plan = make_plan(cfg, n);
  const MergeInput merged = run_split_phase(prefix, plan, beta, options, threads);
  return run_merge_phase(prefix, merged, beta, options);
}

}  // namespace parcpt
