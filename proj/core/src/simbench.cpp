#include "parcpt/simbench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "parcpt/parallel.hpp"
#include "parcpt/random.hpp"

namespace parcpt {

std::string_view to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::A: return "A";
    case ScenarioId::B: return "B";
    case ScenarioId::C: return "C";
    case ScenarioId::D: return "D";
    case ScenarioId::E: return "E";
  }
  return "?";
}

ScenarioId parse_scenario(std::string_view name) {
  if (name == "A") return ScenarioId::A;
  if (name == "B") return ScenarioId::B;
  if (name == "C") return ScenarioId::C;
  if (name == "D") return ScenarioId::D;
  if (name == "E") return ScenarioId::E;
  throw InvalidConfig("unknown scenario '" + std::string(name) + "' (expected A..E)");
}

std::size_t change_count(ScenarioId id) {
  switch (id) {
    case ScenarioId::A: return 2;
    case ScenarioId::B: return 3;
    case ScenarioId::C: return 6;
    case ScenarioId::D: return 9;
    case ScenarioId::E: return 14;
  }
  return 0;
}

ScenarioSpec make_scenario(ScenarioId id, double delta_mu, double noise_sd,
                           std::optional<std::vector<double>> proportions) {
  if (!(delta_mu >= 0.0) || !std::isfinite(delta_mu)) {
    throw InvalidConfig("delta_mu must be finite and non-negative");
  }
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) {
    throw InvalidConfig("noise_sd must be finite and non-negative");
  }
  ScenarioSpec spec;
  spec.id = id;
  spec.delta_mu = delta_mu;
  spec.noise_sd = noise_sd;
  if (proportions) {
    spec.proportions = std::move(*proportions);
    for (std::size_t i = 0; i < spec.proportions.size(); ++i) {
      const double p = spec.proportions[i];
      if (!(p > 0.0 && p < 1.0) || (i > 0 && p <= spec.proportions[i - 1])) {
        throw InvalidConfig("proportions must be strictly increasing in (0, 1)");
      }
    }
  } else {
    const std::size_t m = change_count(id);
    for (std::size_t i = 1; i <= m; ++i) {
      spec.proportions.push_back(static_cast<double>(i) / static_cast<double>(m + 1));
    }
  }
  for (std::size_t k = 0; k <= spec.proportions.size(); ++k) {
    spec.means.push_back(k % 2 == 0 ? 0.0 : delta_mu);
  }
  return spec;
}

std::vector<Index> true_changepoints(const ScenarioSpec& spec, Index n) {
  std::vector<Index> out;
  out.reserve(spec.proportions.size());
  for (double theta : spec.proportions) {
    const auto tau = static_cast<Index>(std::floor(theta * static_cast<double>(n)));
    if (tau <= 0 || tau >= n || (!out.empty() && tau <= out.back())) {
      throw InvalidConfig("n = " + std::to_string(n) +
                          " is too short: scenario changepoints collapse");
    }
    out.push_back(tau);
  }
  return out;
}

SimulatedSeries generate_series(const ScenarioSpec& spec, Index n, std::uint64_t seed) {
  if (spec.means.size() != spec.proportions.size() + 1) {
    throw InvalidConfig("scenario needs one more mean than changepoints");
  }
  std::vector<Index> taus = true_changepoints(spec, n);
  auto engine = StreamKey(seed).engine();
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> values(static_cast<std::size_t>(n));
  std::size_t segment = 0;
  for (Index i = 1; i <= n; ++i) {
    while (segment < taus.size() && i > taus[segment]) ++segment;
    values[static_cast<std::size_t>(i - 1)] = spec.means[segment] + spec.noise_sd * noise(engine);
  }
  return SimulatedSeries{TimeSeries(std::move(values), 1), std::move(taus)};
}

double Accuracy::avg_location_error() const {
  if (detected == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(total_location_error) / static_cast<double>(detected);
}

Index closeness_threshold(Index n) {
  return static_cast<Index>(std::ceil(std::log(static_cast<double>(n))));
}

namespace {

Index nearest_distance(Index x, std::span<const Index> sorted) {
  Index best = std::numeric_limits<Index>::max();
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
  if (it != sorted.end()) best = *it - x;
  if (it != sorted.begin()) best = std::min(best, x - *std::prev(it));
  return best;
}

}  // namespace

Accuracy score(std::span<const Index> truth, std::span<const Index> estimate, Index n) {
  const Index h = closeness_threshold(n);
  Accuracy acc;
  for (Index e : estimate) {
    if (nearest_distance(e, truth) > h) ++acc.false_alarms;
  }
  for (Index t : truth) {
    const Index d = nearest_distance(t, estimate);
    if (d > h) {
      ++acc.missed;
      continue;
    }
    ++acc.detected;
    acc.total_location_error += d;
    acc.max_location_error = std::max(acc.max_location_error, d);
  }
  return acc;
}

double relative_cost(const TimeSeries& y, const Segmentation& estimate,
                     const Segmentation& baseline) {
  if (estimate.n != y.size() || baseline.n != y.size()) {
    throw InvalidInput("segmentations do not belong to a series of length " +
                       std::to_string(y.size()));
  }
  if (estimate.beta != baseline.beta) {
    throw InvalidInput("segmentations were fitted with different penalties");
  }
  return estimate.penalised_cost - baseline.penalised_cost;
}

std::string MethodSetup::label() const {
  if (method == Method::pelt) return "pelt";
  return std::string(to_string(method)) + std::to_string(workers);
}

std::uint64_t replicate_seed(std::uint64_t seed, Index rep) {
  return StreamKey(seed).split(static_cast<std::uint64_t>(rep)).value();
}

namespace {

struct TimedRun {
  Segmentation result;
  double seconds = 0.0;
};

TimedRun run_timed(const TimeSeries& y, const DetectorConfig& cfg, int repeats) {
  using clock = std::chrono::steady_clock;
  TimedRun out;
  std::vector<double> times;
  for (int r = 0; r < std::max(1, repeats); ++r) {
    const auto start = clock::now();
    out.result = detect(y, cfg);
    times.push_back(std::chrono::duration<double>(clock::now() - start).count());
  }
  std::sort(times.begin(), times.end());
  out.seconds = times[times.size() / 2];
  return out;
}

DetectorConfig config_for(const MethodSetup& setup, const BenchOptions& options, bool timing) {
  DetectorConfig cfg;
  cfg.method = setup.method;
  cfg.workers = setup.method == Method::pelt ? 1 : setup.workers;
  cfg.overlap = setup.overlap;
  cfg.penalty = PenaltyRule{options.epsilon, 1};
  cfg.min_segment_length = options.min_segment_length;
  cfg.max_threads = timing ? 0 : 1;
  return cfg;
}

std::vector<BenchRow> bench_replicate(const BenchOptions& options, Index rep) {
  const SimulatedSeries data =
      generate_series(options.scenario, options.n, replicate_seed(options.seed, rep));
  const int repeats = options.timing ? options.timing_repeats : 1;

  std::vector<BenchRow> rows;
  rows.reserve(options.setups.size());
  for (const MethodSetup& setup : options.setups) {
    BenchRow row;
    row.setup = setup;
    row.rep = rep;
    row.true_count = static_cast<Index>(data.changepoints.size());
    if (setup.method == Method::chunk) {
      row.overlap = setup.overlap.value_or(default_overlap(options.n));
    }
    rows.push_back(std::move(row));
  }

  TimedRun baseline;
  try {
    baseline = run_timed(data.series, config_for({Method::pelt, 1, {}}, options, options.timing),
                         repeats);
  } catch (const std::exception& e) {
    for (auto& row : rows) row.error = std::string("baseline: ") + e.what();
    return rows;
  }

  for (BenchRow& row : rows) {
    try {
      const TimedRun run =
          row.setup.method == Method::pelt
              ? baseline
              : run_timed(data.series, config_for(row.setup, options, options.timing), repeats);
      MetricReport& r = row.report;
      r.accuracy = score(data.changepoints, run.result.changepoints, options.n);
      r.estimated = static_cast<Index>(run.result.changepoints.size());
      r.penalised_cost = run.result.penalised_cost;
      r.relative_cost = relative_cost(data.series, run.result, baseline.result);
      if (options.timing) {
        r.wall_time = run.seconds;
        r.speedup_vs_pelt = run.seconds > 0.0 ? baseline.seconds / run.seconds : 0.0;
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  }
  return rows;
}

Moments moments_of(const std::vector<double>& xs) {
  Moments m;
  m.count = xs.size();
  if (xs.empty()) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return m;
}

}  // namespace

std::vector<BenchRow> bench(const BenchOptions& options) {
  if (options.reps < 1) throw InvalidConfig("reps must be at least 1");
  if (options.setups.empty()) throw InvalidConfig("no methods to run");
  true_changepoints(options.scenario, options.n);

  std::vector<std::vector<BenchRow>> per_rep(static_cast<std::size_t>(options.reps));
  const unsigned threads = options.timing ? 1u : options.threads;
  run_indexed(per_rep.size(), threads, [&](std::size_t rep) {
    per_rep[rep] = bench_replicate(options, static_cast<Index>(rep));
  });

  std::vector<BenchRow> rows;
  for (auto& batch : per_rep) {
    for (auto& row : batch) rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<BenchSummary> summarize(const std::vector<BenchRow>& rows) {
  struct Group {
    BenchSummary summary;
    std::vector<double> fa, missed, rel, est, time, speed;
    Index total_error = 0;
  };
  std::vector<Group> groups;
  for (const BenchRow& row : rows) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return g.summary.setup.method == row.setup.method &&
             g.summary.setup.workers == row.setup.workers && g.summary.overlap == row.overlap;
    });
    if (it == groups.end()) {
      Group g;
      g.summary.setup = row.setup;
      g.summary.overlap = row.overlap;
      groups.push_back(std::move(g));
      it = std::prev(groups.end());
    }
    BenchSummary& s = it->summary;
    if (!row.error.empty()) {
      ++s.failures;
      continue;
    }
    ++s.reps_ok;
    const MetricReport& r = row.report;
    it->fa.push_back(static_cast<double>(r.accuracy.false_alarms));
    it->missed.push_back(static_cast<double>(r.accuracy.missed));
    it->rel.push_back(r.relative_cost);
    it->est.push_back(static_cast<double>(r.estimated));
    it->time.push_back(r.wall_time);
    it->speed.push_back(r.speedup_vs_pelt);
    it->total_error += r.accuracy.total_location_error;
    s.detected += static_cast<std::size_t>(r.accuracy.detected);
    s.max_location_error = std::max(s.max_location_error, r.accuracy.max_location_error);
  }

  std::vector<BenchSummary> out;
  out.reserve(groups.size());
  for (Group& g : groups) {
    BenchSummary s = g.summary;
    s.false_alarms = moments_of(g.fa);
    s.missed = moments_of(g.missed);
    s.relative_cost = moments_of(g.rel);
    s.estimated = moments_of(g.est);
    s.wall_time = moments_of(g.time);
    s.speedup = moments_of(g.speed);
    s.avg_location_error = s.detected == 0 ? std::numeric_limits<double>::quiet_NaN()
                                           : static_cast<double>(g.total_error) /
                                                 static_cast<double>(s.detected);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace parcpt
