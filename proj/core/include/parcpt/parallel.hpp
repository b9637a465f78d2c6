#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "parcpt/core.hpp"
#include "parcpt/cost.hpp"
#include "parcpt/dp.hpp"

namespace parcpt {

/// One split-phase task: data window A_i = {data_first..data_last} and
/// candidate set B_i, both in global 1-based coordinates.
struct WorkerAssignment {
  Index data_first = 1;
  Index data_last = 0;
  std::vector<Index> candidates;

  DataWindow window() const { return {data_first - 1, data_last}; }
};

struct SplitPlan {
  Method method = Method::pelt;
  Index n = 0;
  std::vector<WorkerAssignment> workers;
};

/// Contiguous candidate windows of width floor(n/L) with V-point overlap on
/// each interior boundary; B_L is clamped to n-1. Each worker's data window
/// extends one point past its last candidate so every candidate is an
/// interior split and the windows cover {1..n}.
SplitPlan chunk_split(Index n, Index workers, Index overlap);

/// Largest Q with Q*b + (a mod b) < c.
Index deal_quota(Index a, Index b, Index c);

/// Residue classes: B_i = {i, i+L, ..., Q_i(L,n) L + (i mod L)}; every worker
/// sees the full series.
SplitPlan deal_split(Index n, Index workers);

struct MergeInput {
  /// Changepoints returned by each worker, in global coordinates, by worker index.
  std::vector<std::vector<Index>> per_worker;
  /// Sorted, deduplicated union of `per_worker`.
  std::vector<Index> merged;
};

/// Runs `task(i)` for i in [0, count) on up to `threads` OS threads. Results
/// must be written by index. If any task throws, the exception from the
/// lowest failing index is rethrown after all threads join.
void run_indexed(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task);

MergeInput run_split_phase(const PrefixSums& prefix, const SplitPlan& plan, double beta,
                           DpOptions options = {}, unsigned threads = 0);
MergeInput run_split_phase(const TimeSeries& y, const SplitPlan& plan, double beta);

Segmentation run_merge_phase(const PrefixSums& prefix, const MergeInput& merged, double beta,
                             DpOptions options = {});
Segmentation run_merge_phase(const TimeSeries& y, const MergeInput& merged, double beta);

/// The split plan `cfg` implies for a series of length n (pelt: one worker
/// over {1..n-1}).
SplitPlan make_plan(const DetectorConfig& cfg, Index n);

/// pelt: exact search over {1..n-1}. chunk/deal: split, per-worker PELT,
/// then PELT over the union of worker outputs.
Segmentation detect(const TimeSeries& y, const DetectorConfig& cfg);

}  // namespace parcpt
