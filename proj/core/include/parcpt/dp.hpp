#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "parcpt/core.hpp"
#include "parcpt/cost.hpp"

namespace parcpt {

/// Observations y_{begin+1..end} in prefix coordinates. The full series is
/// {0, n}; a Chunk worker sees a sub-window.
struct DataWindow {
  Index begin = 0;
  Index end = 0;

  Index length() const { return end - begin; }
};

struct DpOptions {
  bool prune = true;
  Index min_segment_length = 1;
};

/// Exact penalised-cost recursion over a restricted candidate set:
///
///   F(begin) = 0
///   F(b)     = min_{t live, b - t >= min_seg} F(t) + C(y_{t+1..b}) + beta
///   F(end)   = min_{t live, end - t >= min_seg} F(t) + C(y_{t+1..end})
///
/// Candidates are visited in increasing order. Ties go to the smallest t.
/// With pruning on, t is dropped once F(t) + C(y_{t+1..s}) >= F(s) + slack for
/// some evaluated s; subadditivity of the squared-error cost keeps this exact.
class DpSolver {
 public:
  DpSolver(const PrefixSums& prefix, DataWindow window, std::span<const Index> candidates,
           double beta, DpOptions options = {});

  bool finished() const { return next_ == index_.size(); }

  /// Evaluates F at the next position (a candidate, or finally the window
  /// end), applies pruning, and returns the index that was evaluated.
  Index advance();

  /// Runs to completion and returns the optimal changepoints.
  std::vector<Index> solve();

  /// F at the window end. Valid once finished().
  double optimum() const { return best_.back(); }

  /// Indices currently eligible as the last changepoint (window start included).
  std::vector<Index> live_indices() const;

  /// F at a visited index, +inf when unreachable under min_segment_length.
  double value_at(Index index) const;

  /// Changepoints of the optimal path ending at the window end.
  std::vector<Index> backtrack() const;


 private:
  // Drops every live t that can no longer beat the just-evaluated `pos`.
  // Reads the per-slot values left in scratch_ by advance().
  void pelt_prune(std::size_t pos);
  std::size_t position_of(Index index) const;

  const PrefixSums* prefix_;
  double beta_;
  DpOptions options_;
  std::vector<Index> index_;       // window start, candidates, window end
  std::vector<double> best_;       // F per position
  std::vector<std::size_t> back_;  // argmin predecessor position
  std::vector<std::size_t> live_;  // positions, ascending
  std::vector<Index> retire_at_;   // delayed removal when min_segment_length > 1
  std::vector<double> scratch_;    // F(t) + C(t+1..s) for the current s, per live slot
  std::size_t next_ = 1;
};

/// Penalised cost of `changepoints` on the window: segment costs plus beta per
/// changepoint, accumulated left to right.
double penalised_cost(const PrefixSums& prefix, DataWindow window,
                      std::span<const Index> changepoints, double beta);

/// Exact minimiser over changepoint subsets of `candidates` on the full series.
Segmentation optimal_partition(const PrefixSums& prefix, std::span<const Index> candidates,
                               double beta, DpOptions options = {});
Segmentation optimal_partition(const TimeSeries& y, const CandidateSet& candidates,
                               double beta, bool prune = true);

/// Exhaustive search over all 2^|B| subsets (|B| <= 20). Ties: fewest
/// changepoints, then lexicographically smallest changepoint vector.
Segmentation brute_force_partition(const TimeSeries& y, const CandidateSet& candidates,
                                   double beta, Index min_segment_length = 1);

inline constexpr std::size_t kBruteForceLimit = 20;

}  // namespace parcpt
