#include <benchmark/benchmark.h>

#include <map>

#include "parcpt/cost.hpp"
#include "parcpt/parallel.hpp"
#include "parcpt/simbench.hpp"

using namespace parcpt;

namespace {

const TimeSeries& scenario_c(Index n) {
  static std::map<Index, TimeSeries> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, generate_series(make_scenario(ScenarioId::C, 1.0), n, 11).series).first;
  }
  return it->second;
}

void run_detect(benchmark::State& state, Method method) {
  const Index n = state.range(0);
  const TimeSeries& y = scenario_c(n);
  DetectorConfig cfg;
  cfg.method = method;
  cfg.workers = method == Method::pelt ? 1 : state.range(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(detect(y, cfg));
  }
  state.SetComplexityN(n);
}

void BM_Pelt(benchmark::State& state) { run_detect(state, Method::pelt); }
void BM_Chunk(benchmark::State& state) { run_detect(state, Method::chunk); }
void BM_Deal(benchmark::State& state) { run_detect(state, Method::deal); }

void BM_SegmentCost(benchmark::State& state) {
  const TimeSeries& y = scenario_c(10000);
  const PrefixSums p = build_prefix(y);
  Index s = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(p.rss(s - 1, s + 500));
    s = s % 9000 + 1;
  }
}

}  // namespace

BENCHMARK(BM_Pelt)->Arg(1000)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Chunk)
    ->ArgsProduct({{1000, 10000, 100000}, {2, 4, 8}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Deal)
    ->ArgsProduct({{1000, 10000, 100000}, {2, 4, 8}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SegmentCost);

BENCHMARK_MAIN();
