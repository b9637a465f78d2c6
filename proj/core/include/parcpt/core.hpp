#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "parcpt/error.hpp"

namespace parcpt {

/// Position in a series. Observations are numbered 1..n; a changepoint tau
/// ends the segment containing y_tau, so valid changepoints lie in [1, n-1].
using Index = std::int64_t;

/// Ordered, finite observations of fixed dimension d >= 1, stored row-major.
/// Immutable once constructed.
class TimeSeries {
 public:
  /// `values` holds n*dim entries, observation-major. Requires n >= 2.
  explicit TimeSeries(std::vector<double> values, std::size_t dim = 1);

  static TimeSeries from_rows(const std::vector<std::vector<double>>& rows);

  Index size() const { return n_; }
  std::size_t dim() const { return dim_; }

  /// 1-based observation `i`, component `k`.
  double at(Index i, std::size_t k = 0) const {
    return values_[static_cast<std::size_t>(i - 1) * dim_ + k];
  }

  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
  std::size_t dim_;
  Index n_;
};

/// Strictly increasing admissible changepoint indices, each in [1, n-1].
class CandidateSet {
 public:
  CandidateSet() = default;
  CandidateSet(std::vector<Index> indices, Index n);

  /// {1, ..., n-1}.
  static CandidateSet full(Index n);

  std::span<const Index> indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  Index series_length() const { return n_; }

 private:
  std::vector<Index> indices_;
  Index n_ = 0;
};

/// Estimated changepoints with the penalised cost they attain: total segment
/// cost plus beta per changepoint (the final segment carries no penalty).
struct Segmentation {
  std::vector<Index> changepoints;
  double penalised_cost = 0.0;
  Index n = 0;
  double beta = 0.0;

  friend bool operator==(const Segmentation&, const Segmentation&) = default;
};

/// Schwarz-type penalty family. Univariate: (2 + epsilon) ln n.
/// Multivariate (dimension d >= 2): (d + 1)(1 + epsilon) ln n.
struct PenaltyRule {
  double epsilon = 0.05;
  std::size_t dimension = 1;
};

double resolve_penalty(const PenaltyRule& rule, Index n);

enum class Method { pelt, chunk, deal };

std::string_view to_string(Method m);
Method parse_method(std::string_view name);

struct DetectorConfig {
  Method method = Method::pelt;
  /// L: number of split-phase workers. Ignored by `pelt`.
  Index workers = 1;
  /// V: Chunk overlap half-width. Unset means ceil((ln n)^2).
  std::optional<Index> overlap;
  PenaltyRule penalty;
  Index min_segment_length = 1;
  /// Divide each dimension by a MAD-of-differences noise estimate first.
  bool scale_by_noise = false;
  /// Cap on OS threads used by the split phase; 0 means `thread_cap()`.
  unsigned max_threads = 0;
};

/// ceil((ln n)^2).
Index default_overlap(Index n);

/// Hardware parallelism, capped by the PARCPT_THREADS environment variable.
unsigned thread_cap();

/// Workers L = number of hardware threads (at least 1).
Index default_workers();

/// Throws InvalidConfig when `cfg` cannot run on a series of length n.
void validate(const DetectorConfig& cfg, Index n);

/// Non-fatal configuration notes (e.g. Deal with fewer than ceil(ln n) workers).
std::vector<std::string> advisories(const DetectorConfig& cfg, Index n);

/// Per-dimension noise sd estimate: MAD of first differences / (0.6745 * sqrt 2).
std::vector<double> estimate_noise_sd(const TimeSeries& y);

/// `y` with each dimension divided by its noise estimate (dimensions with a
/// zero estimate are left unscaled).
TimeSeries scale_by_noise(const TimeSeries& y);

}  // namespace parcpt
