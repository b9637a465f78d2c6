#include "parcpt/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

namespace parcpt {

TimeSeries::TimeSeries(std::vector<double> values, std::size_t dim)
    : values_(std::move(values)), dim_(dim), n_(0) {
  if (dim_ == 0) throw InvalidInput("time series dimension must be at least 1");
  if (values_.size() % dim_ != 0) {
    throw InvalidInput("time series has " + std::to_string(values_.size()) +
                       " values, not a multiple of dimension " + std::to_string(dim_));
  }
  n_ = static_cast<Index>(values_.size() / dim_);
  if (n_ < 2) throw InvalidInput("time series needs at least 2 observations");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw InvalidInput("non-finite value at observation " + std::to_string(i / dim_ + 1));
    }
  }
}

TimeSeries TimeSeries::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw InvalidInput("time series needs at least 2 observations");
  const std::size_t dim = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) {
      throw InvalidInput("observation " + std::to_string(i + 1) + " has dimension " +
                         std::to_string(rows[i].size()) + ", expected " + std::to_string(dim));
    }
    flat.insert(flat.end(), rows[i].begin(), rows[i].end());
  }
  return TimeSeries(std::move(flat), dim);
}

CandidateSet::CandidateSet(std::vector<Index> indices, Index n)
    : indices_(std::move(indices)), n_(n) {
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    const Index b = indices_[i];
    if (b < 1 || b > n - 1) {
      throw InvalidInput("candidate " + std::to_string(b) + " outside [1, " +
                         std::to_string(n - 1) + "]");
    }
    if (i > 0 && b <= indices_[i - 1]) {
      throw InvalidInput("candidates must be strictly increasing");
    }
  }
}

CandidateSet CandidateSet::full(Index n) {
  std::vector<Index> all;
  if (n > 1) {
    all.resize(static_cast<std::size_t>(n - 1));
    for (Index i = 0; i < n - 1; ++i) all[static_cast<std::size_t>(i)] = i + 1;
  }
  CandidateSet out;
  out.indices_ = std::move(all);
  out.n_ = n;
  return out;
}

double resolve_penalty(const PenaltyRule& rule, Index n) {
  if (n < 2) throw InvalidInput("penalty needs n >= 2");
  if (rule.dimension < 1) throw InvalidConfig("penalty dimension must be at least 1");
  if (!(rule.epsilon >= 0.0)) throw InvalidConfig("penalty epsilon must be non-negative");
  const double log_n = std::log(static_cast<double>(n));
  if (rule.dimension == 1) return (2.0 + rule.epsilon) * log_n;
  return static_cast<double>(rule.dimension + 1) * (1.0 + rule.epsilon) * log_n;
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::pelt: return "pelt";
    case Method::chunk: return "chunk";
    case Method::deal: return "deal";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "pelt") return Method::pelt;
  if (name == "chunk") return Method::chunk;
  if (name == "deal") return Method::deal;
  throw InvalidConfig("unknown method '" + std::string(name) + "'");
}

Index default_overlap(Index n) {
  const double l = std::log(static_cast<double>(n));
  return static_cast<Index>(std::ceil(l * l));
}

unsigned thread_cap() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PARCPT_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) return static_cast<unsigned>(cap);
  }
  return hw;
}

Index default_workers() {
  return static_cast<Index>(std::max(1u, std::thread::hardware_concurrency()));
}

void validate(const DetectorConfig& cfg, Index n) {
  if (n < 2) throw InvalidConfig("series needs at least 2 observations");
  if (cfg.workers < 1) throw InvalidConfig("workers must be at least 1");
  if (cfg.min_segment_length < 1) throw InvalidConfig("min_segment_length must be at least 1");
  if (cfg.min_segment_length > n) {
    throw InvalidConfig("min_segment_length exceeds the series length");
  }
  if (!(cfg.penalty.epsilon >= 0.0)) throw InvalidConfig("epsilon must be non-negative");
  if (cfg.penalty.dimension < 1) throw InvalidConfig("penalty dimension must be at least 1");

  switch (cfg.method) {
    case Method::pelt:
      break;
    case Method::chunk: {
      const Index overlap = cfg.overlap.value_or(default_overlap(n));
      if (overlap < 0) throw InvalidConfig("overlap must be non-negative");
      if (cfg.workers == 1) break;
      const Index width = n / cfg.workers;
      if (width < 1) throw InvalidConfig("more chunk workers than observations");
      if (width + overlap >= n) {
        throw InvalidConfig("chunk window floor(n/L)+V = " + std::to_string(width + overlap) +
                            " does not fit in n = " + std::to_string(n));
      }
      if (overlap >= width) {
        throw InvalidConfig("chunk overlap V = " + std::to_string(overlap) +
                            " must be smaller than floor(n/L) = " + std::to_string(width));
      }
      if (cfg.workers >= 3 && 2 * overlap >= width) {
        throw InvalidConfig("chunk overlaps intersect: 2V = " + std::to_string(2 * overlap) +
                            " >= floor(n/L) = " + std::to_string(width));
      }
      break;
    }
    case Method::deal:
      if (cfg.workers > n - 1) {
        throw InvalidConfig("deal needs L <= n-1 (L = " + std::to_string(cfg.workers) +
                            ", n = " + std::to_string(n) + ")");
      }
      break;
  }
}

std::vector<std::string> advisories(const DetectorConfig& cfg, Index n) {
  std::vector<std::string> notes;
  if (cfg.method == Method::deal && n >= 2) {
    const auto floor_workers =
        static_cast<Index>(std::ceil(std::log(static_cast<double>(n))));
    if (cfg.workers > 1 && cfg.workers < floor_workers) {
      notes.push_back("deal with L = " + std::to_string(cfg.workers) +
                      " is below ceil(ln n) = " + std::to_string(floor_workers) +
                      "; the location-error guarantee assumes L >= ceil((ln n)^(1+a))");
    }
  }
  return notes;
}

namespace {

double median_of(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> estimate_noise_sd(const TimeSeries& y) {
  const auto n = static_cast<std::size_t>(y.size());
  std::vector<double> out(y.dim());
  std::vector<double> diff(n - 1);
  for (std::size_t k = 0; k < y.dim(); ++k) {
    for (std::size_t i = 1; i < n; ++i) {
      diff[i - 1] = y.at(static_cast<Index>(i + 1), k) - y.at(static_cast<Index>(i), k);
    }
    const double centre = median_of(diff);
    std::vector<double> dev(diff.size());
    std::transform(diff.begin(), diff.end(), dev.begin(),
                   [centre](double d) { return std::abs(d - centre); });
    // 1.4826 makes the MAD consistent for a Gaussian; differences carry 2 sigma^2.
    out[k] = 1.4826 * median_of(std::move(dev)) / std::sqrt(2.0);
  }
  return out;
}

TimeSeries scale_by_noise(const TimeSeries& y) {
  const std::vector<double> sd = estimate_noise_sd(y);
  std::vector<double> values(y.values().begin(), y.values().end());
  const std::size_t d = y.dim();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double s = sd[i % d];
    if (s > 0.0) values[i] /= s;
  }
  return TimeSeries(std::move(values), d);
}

}  // namespace parcpt
