#pragma once

#include <cstddef>
#include <vector>

#include "parcpt/core.hpp"

namespace parcpt {

/// Per-dimension cumulative sums and sums of squares, cum[0] = cum_sq[0] = 0.
/// Gives O(1) squared-error segment costs after O(n d) setup.
class PrefixSums {
 public:
  explicit PrefixSums(const TimeSeries& y);

  Index size() const { return n_; }
  std::size_t dim() const { return dim_; }

  /// Sum of y_1..y_t in dimension k.
  double cum(Index t, std::size_t k = 0) const { return cum_[offset(t, k)]; }
  double cum_sq(Index t, std::size_t k = 0) const { return cum_sq_[offset(t, k)]; }

  /// Residual sum of squares of y_{lo+1..hi} about its mean, summed over
  /// dimensions. Prefix coordinates, lo < hi; no bounds checks.
  double rss(Index lo, Index hi) const {
    const double len = static_cast<double>(hi - lo);
    if (dim_ == 1) return rss_one(cum_.data(), cum_sq_.data(), lo, hi, len);
    double total = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      const std::size_t base = k * stride();
      total += rss_one(cum_.data() + base, cum_sq_.data() + base, lo, hi, len);
    }
    return total;
  }

 private:
  std::size_t stride() const { return static_cast<std::size_t>(n_) + 1; }
  std::size_t offset(Index t, std::size_t k) const {
    return k * stride() + static_cast<std::size_t>(t);
  }

  static double rss_one(const double* cum, const double* cum_sq, Index lo, Index hi,
                        double len) {
    const double s = cum[hi] - cum[lo];
    const double sq = cum_sq[hi] - cum_sq[lo];
    const double v = sq - s * s / len;
    // Cancellation floor: anything below 1e-9 of the raw square mass is zero.
    return v > 1e-9 * sq ? v : 0.0;
  }

  std::vector<double> cum_;
  std::vector<double> cum_sq_;
  std::size_t dim_;
  Index n_;
};

inline PrefixSums build_prefix(const TimeSeries& y) { return PrefixSums(y); }

/// Squared-error cost of y_{s..t} (1-based, inclusive). Throws InvalidInput
/// unless 1 <= s <= t <= n.
double segment_cost(const PrefixSums& p, Index s, Index t);

}  // namespace parcpt
