#pragma once

// Test-only reference computations. Nothing here touches prefix sums or the
// DP engine, so they can check both.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "parcpt/core.hpp"

namespace oracle {

using parcpt::Index;

// Two-pass squared error of y_{s..t}, 1-based inclusive, summed over dimensions.
inline double direct_rss(const parcpt::TimeSeries& y, Index s, Index t) {
  double total = 0.0;
  for (std::size_t k = 0; k < y.dim(); ++k) {
    double mean = 0.0;
    for (Index i = s; i <= t; ++i) mean += y.at(i, k);
    mean /= static_cast<double>(t - s + 1);
    for (Index i = s; i <= t; ++i) {
      const double r = y.at(i, k) - mean;
      total += r * r;
    }
  }
  return total;
}

inline double direct_penalised_cost(const parcpt::TimeSeries& y, const std::vector<Index>& cps,
                                    double beta) {
  double total = 0.0;
  Index prev = 0;
  for (Index cp : cps) {
    total += direct_rss(y, prev + 1, cp) + beta;
    prev = cp;
  }
  return total + direct_rss(y, prev + 1, y.size());
}

struct Best {
  std::vector<Index> changepoints;
  double cost = std::numeric_limits<double>::infinity();
};

// Exhaustive minimiser with direct costs. Returns the argmin cost and every
// subset within `tie_tol` of it so callers can reason about near-ties.
inline Best enumerate(const parcpt::TimeSeries& y, const std::vector<Index>& candidates,
                      double beta) {
  Best best;
  const std::size_t k = candidates.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    std::vector<Index> cps;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (std::uint64_t{1} << i)) cps.push_back(candidates[i]);
    }
    const double c = direct_penalised_cost(y, cps, beta);
    if (c < best.cost) best = {cps, c};
  }
  return best;
}

inline parcpt::TimeSeries gaussian_series(std::mt19937_64& rng, Index n, std::size_t dim = 1,
                                          double sd = 1.0) {
  std::normal_distribution<double> z(0.0, sd);
  std::vector<double> v(static_cast<std::size_t>(n) * dim);
  for (double& x : v) x = z(rng);
  return parcpt::TimeSeries(std::move(v), dim);
}

// Gaussian noise around a random step mean.
inline parcpt::TimeSeries step_series(std::mt19937_64& rng, Index n, int changes, double jump) {
  std::uniform_int_distribution<Index> where(1, n - 1);
  std::vector<Index> taus;
  for (int i = 0; i < changes; ++i) taus.push_back(where(rng));
  std::sort(taus.begin(), taus.end());
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(n));
  double mean = 0.0;
  std::size_t next = 0;
  for (Index i = 1; i <= n; ++i) {
    while (next < taus.size() && i > taus[next]) {
      mean += (next % 2 == 0) ? jump : -jump;
      ++next;
    }
    v[static_cast<std::size_t>(i - 1)] = mean + z(rng);
  }
  return parcpt::TimeSeries(std::move(v), 1);
}

inline std::vector<Index> random_subset(std::mt19937_64& rng, Index n, std::size_t max_size) {
  std::vector<Index> all;
  for (Index i = 1; i < n; ++i) all.push_back(i);
  std::shuffle(all.begin(), all.end(), rng);
  std::uniform_int_distribution<std::size_t> count(0, std::min(max_size, all.size()));
  all.resize(count(rng));
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace oracle
