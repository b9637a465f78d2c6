#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "parcpt/core.hpp"

namespace parcpt {

enum class ScenarioId { A, B, C, D, E };

std::string_view to_string(ScenarioId id);
ScenarioId parse_scenario(std::string_view name);

/// Number of true changes: A 2, B 3, C 6, D 9, E 14.
std::size_t change_count(ScenarioId id);

/// Piecewise-constant Gaussian mean-shift design. Means alternate between 0
/// and delta_mu so every adjacent gap is exactly delta_mu.
struct ScenarioSpec {
  ScenarioId id = ScenarioId::A;
  std::vector<double> proportions;  // theta_1 < ... < theta_m in (0, 1)
  std::vector<double> means;        // mu_1 .. mu_{m+1}
  double delta_mu = 1.0;
  double noise_sd = 1.0;
};

/// Evenly spaced proportions theta_i = i/(m+1) unless `proportions` is given.
ScenarioSpec make_scenario(ScenarioId id, double delta_mu, double noise_sd = 1.0,
                           std::optional<std::vector<double>> proportions = std::nullopt);

/// tau_i = floor(theta_i n). Throws InvalidConfig when two coincide or fall
/// outside (0, n).
std::vector<Index> true_changepoints(const ScenarioSpec& spec, Index n);

struct SimulatedSeries {
  TimeSeries series;
  std::vector<Index> changepoints;
};

SimulatedSeries generate_series(const ScenarioSpec& spec, Index n, std::uint64_t seed);

/// Accuracy against the truth with closeness threshold h = ceil(ln n): an
/// estimate is a false alarm when farther than h from every true change; a
/// true change is detected when some estimate lies within h, and its location
/// error is the distance to the nearest estimate.
struct Accuracy {
  Index false_alarms = 0;
  Index missed = 0;
  Index detected = 0;
  Index total_location_error = 0;
  Index max_location_error = 0;

  /// NaN when nothing was detected.
  double avg_location_error() const;
};

Index closeness_threshold(Index n);

Accuracy score(std::span<const Index> truth, std::span<const Index> estimate, Index n);

/// penalised_cost(estimate) - penalised_cost(baseline). Throws InvalidInput
/// unless both belong to `y` and share a penalty.
double relative_cost(const TimeSeries& y, const Segmentation& estimate,
                     const Segmentation& baseline);

struct MetricReport {
  Accuracy accuracy;
  Index estimated = 0;
  double penalised_cost = 0.0;
  double relative_cost = 0.0;
  double wall_time = 0.0;        // seconds, median of the timing repeats
  double speedup_vs_pelt = 0.0;  // pelt wall time / this wall time
};

struct MethodSetup {
  Method method = Method::pelt;
  Index workers = 1;
  std::optional<Index> overlap;  // unset: ceil((ln n)^2)

  std::string label() const;
};

struct BenchOptions {
  ScenarioSpec scenario;
  Index n = 1000;
  std::vector<MethodSetup> setups;
  Index reps = 1;
  std::uint64_t seed = 1;
  double epsilon = 0.05;
  Index min_segment_length = 1;
  /// Measure wall time. Replicates then run one at a time; otherwise they are
  /// spread over up to `threads` threads.
  bool timing = false;
  int timing_repeats = 3;
  unsigned threads = 0;  // 0: thread_cap()
};

struct BenchRow {
  MethodSetup setup;
  Index overlap = 0;  // resolved V for chunk, 0 otherwise
  Index rep = 0;
  Index true_count = 0;
  MetricReport report;
  std::string error;  // non-empty when this rep failed
};

/// Per-replicate metrics for each setup on identical data. Serial PELT is
/// always run as the baseline for relative cost and speedup. Data generation
/// is outside the timed region. A failing setup is recorded, not rethrown.
std::vector<BenchRow> bench(const BenchOptions& options);

/// Replicate key for `rep` under `seed`.
std::uint64_t replicate_seed(std::uint64_t seed, Index rep);

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
  std::size_t count = 0;
};

struct BenchSummary {
  MethodSetup setup;
  Index overlap = 0;
  std::size_t reps_ok = 0;
  std::size_t failures = 0;
  Moments false_alarms;
  Moments missed;
  /// Pooled over every detected true change across replicates.
  double avg_location_error = 0.0;
  Index max_location_error = 0;
  std::size_t detected = 0;
  Moments relative_cost;
  Moments estimated;
  Moments wall_time;
  Moments speedup;
};

/// Groups rows by setup, in first-appearance order.
std::vector<BenchSummary> summarize(const std::vector<BenchRow>& rows);

}  // namespace parcpt
