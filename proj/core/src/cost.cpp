#include "parcpt/cost.hpp"

#include <string>

namespace parcpt {

PrefixSums::PrefixSums(const TimeSeries& y) : dim_(y.dim()), n_(y.size()) {
  const std::size_t stride = static_cast<std::size_t>(n_) + 1;
  cum_.assign(stride * dim_, 0.0);
  cum_sq_.assign(stride * dim_, 0.0);
  for (std::size_t k = 0; k < dim_; ++k) {
    double* c = cum_.data() + k * stride;
    double* c2 = cum_sq_.data() + k * stride;
    for (Index t = 1; t <= n_; ++t) {
      const double v = y.at(t, k);
      c[t] = c[t - 1] + v;
      c2[t] = c2[t - 1] + v * v;
    }
  }
}

double segment_cost(const PrefixSums& p, Index s, Index t) {
  if (s < 1 || t > p.size() || s > t) {
    throw InvalidInput("segment [" + std::to_string(s) + ", " + std::to_string(t) +
                       "] invalid for n = " + std::to_string(p.size()));
  }
  return p.rss(s - 1, t);
}

}  // namespace parcpt
