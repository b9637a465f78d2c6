#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "parcpt/dp.hpp"

using namespace parcpt;

namespace {

const TimeSeries kStep({0, 0, 0, 0, 10, 10, 10, 10});

CandidateSet range_set(Index lo, Index hi, Index n) {
  std::vector<Index> v;
  for (Index i = lo; i <= hi; ++i) v.push_back(i);
  return CandidateSet(std::move(v), n);
}

bool contains(const std::vector<Index>& v, Index x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

TEST_CASE("optimal_partition examples") {
  SUBCASE("constant series") {
    const TimeSeries zeros(std::vector<double>(10, 0.0));
    const auto seg = optimal_partition(zeros, CandidateSet::full(10), 2.0 * std::log(10.0));
    CHECK(seg.changepoints.empty());
    CHECK(seg.penalised_cost == 0.0);
  }
  SUBCASE("step, full candidates") {
    const auto seg = optimal_partition(kStep, range_set(1, 7, 8), 1.0);
    CHECK(seg.changepoints == std::vector<Index>{4});
    CHECK(seg.penalised_cost == 1.0);
    CHECK(seg.n == 8);
    CHECK(seg.beta == 1.0);
  }
  SUBCASE("step, single off-centre candidate") {
    const auto seg = optimal_partition(kStep, CandidateSet({2}, 8), 1.0);
    CHECK(seg.changepoints == std::vector<Index>{2});
    // C(y_1:2) = 0; C(y_3:8) = 2 (20/3)^2 + 4 (10/3)^2 = 400/3.
    CHECK(seg.penalised_cost == doctest::Approx(400.0 / 3.0 + 1.0).epsilon(1e-12));
    CHECK(seg.penalised_cost == doctest::Approx(oracle::direct_penalised_cost(kStep, {2}, 1.0)));
  }
  SUBCASE("penalty dominates") {
    const auto seg = optimal_partition(TimeSeries({0, 5, 0, 5}), CandidateSet({1, 2, 3}, 4), 100.0);
    CHECK(seg.changepoints.empty());
    CHECK(seg.penalised_cost == 25.0);
  }
  SUBCASE("empty candidate set") {
    const auto seg = optimal_partition(kStep, CandidateSet({}, 8), 1.0);
    CHECK(seg.changepoints.empty());
    CHECK(seg.penalised_cost == 200.0);
  }
}

TEST_CASE("optimal_partition input errors") {
  CHECK_THROWS_AS(optimal_partition(kStep, CandidateSet({2}, 9), 1.0), InvalidInput);
  CHECK_THROWS_AS(optimal_partition(kStep, CandidateSet({2}, 8), 0.0), InvalidInput);
  CHECK_THROWS_AS(optimal_partition(kStep, CandidateSet({2}, 8), -1.0), InvalidInput);
  const PrefixSums p(kStep);
  const std::vector<Index> bad = {3, 2};
  CHECK_THROWS_AS(optimal_partition(p, bad, 1.0), InvalidInput);
  const std::vector<Index> outside = {8};
  CHECK_THROWS_AS(optimal_partition(p, outside, 1.0), InvalidInput);
  CHECK_THROWS_AS(DpSolver(p, DataWindow{3, 2}, {}, 1.0), InvalidInput);
  CHECK_THROWS_AS(DpSolver(p, DataWindow{0, 9}, {}, 1.0), InvalidInput);
  CHECK_THROWS_AS(DpSolver(p, DataWindow{0, 8}, {}, 1.0, DpOptions{true, 9}), InvalidConfig);
}

TEST_CASE("brute_force_partition examples") {
  SUBCASE("no candidates") {
    const auto seg = brute_force_partition(kStep, CandidateSet({}, 8), 1.0);
    CHECK(seg.changepoints.empty());
    CHECK(seg.penalised_cost == 200.0);
  }
  SUBCASE("step") {
    const auto seg = brute_force_partition(kStep, range_set(1, 7, 8), 1.0);
    CHECK(seg.changepoints == std::vector<Index>{4});
    CHECK(seg.penalised_cost == 1.0);
  }
  SUBCASE("two changes") {
    const TimeSeries y({1, 1, 9, 9, 1, 1});
    const auto seg = brute_force_partition(y, range_set(1, 5, 6), 0.5);
    CHECK(seg.changepoints == std::vector<Index>{2, 4});
    CHECK(seg.penalised_cost == 1.0);
  }
  SUBCASE("tie break prefers fewer changepoints") {
    const TimeSeries zeros(std::vector<double>(6, 0.0));
    CHECK(brute_force_partition(zeros, range_set(1, 5, 6), 0.5).changepoints.empty());
  }
  SUBCASE("refuses large candidate sets") {
    std::mt19937_64 rng(1);
    const auto y = oracle::gaussian_series(rng, 30);
    CHECK_THROWS_AS(brute_force_partition(y, CandidateSet::full(30), 1.0), InvalidInput);
    CHECK_NOTHROW(brute_force_partition(y, range_set(1, 20, 30), 1.0));
  }
}

TEST_CASE("brute force agrees with direct-summation enumeration") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 3 + trial % 10;
    const auto y = oracle::step_series(rng, n, 2, 3.0);
    const auto b = oracle::random_subset(rng, n, 8);
    const double beta = trial % 2 ? 0.5 : 2.0 * std::log(static_cast<double>(n));
    const auto ref = oracle::enumerate(y, b, beta);
    const auto seg = brute_force_partition(y, CandidateSet(b, n), beta);
    CHECK(seg.penalised_cost == doctest::Approx(ref.cost).epsilon(1e-9));
    CHECK(seg.changepoints == ref.changepoints);
  }
}

TEST_CASE("pelt pruning trace") {
  SUBCASE("constant series prunes nothing") {
    const TimeSeries y(std::vector<double>(6, 2.5));
    const PrefixSums p(y);
    const auto all = CandidateSet::full(6);
    DpSolver solver(p, DataWindow{0, 6}, all.indices(), 1.0);
    CHECK(solver.advance() == 1);
    CHECK(solver.live_indices() == std::vector<Index>{0, 1});
    while (solver.live_indices().size() < 6) solver.advance();
    CHECK(solver.live_indices() == std::vector<Index>{0, 1, 2, 3, 4, 5});
  }
  SUBCASE("step series prunes t = 1 by s = 6") {
    const PrefixSums p(kStep);
    const auto all = CandidateSet::full(8);
    DpSolver solver(p, DataWindow{0, 8}, all.indices(), 1.0);
    bool pruned = false;
    while (!solver.finished()) {
      const Index s = solver.advance();
      if (s < 8 && !contains(solver.live_indices(), 1)) {
        CHECK(s <= 6);
        pruned = true;
        break;
      }
    }
    CHECK(pruned);
  }
  SUBCASE("F values follow the recursion") {
    const PrefixSums p(kStep);
    const auto all = CandidateSet::full(8);
    DpSolver solver(p, DataWindow{0, 8}, all.indices(), 1.0, DpOptions{false, 1});
    solver.solve();
    CHECK(solver.value_at(0) == 0.0);
    CHECK(solver.value_at(1) == 1.0);
    CHECK(solver.value_at(4) == 1.0);
    CHECK(solver.value_at(5) == 2.0);
    CHECK(solver.optimum() == 1.0);
    CHECK(solver.backtrack() == std::vector<Index>{4});
  }
}

TEST_CASE("pruning never changes the answer") {
  std::mt19937_64 rng(2024);
  const double beta = 2.0 * std::log(50.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto y = trial % 2 ? oracle::gaussian_series(rng, 50) : oracle::step_series(rng, 50, 3, 2.0);
    const auto all = CandidateSet::full(50);
    const auto on = optimal_partition(y, all, beta, true);
    const auto off = optimal_partition(y, all, beta, false);
    CHECK(on == off);
  }
}

TEST_CASE("oracle equivalence on small instances") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    std::uniform_int_distribution<Index> len(2, 12);
    const Index n = len(rng);
    const auto y = oracle::step_series(rng, n, 2, 1.5);
    const auto b = oracle::random_subset(rng, n, 10);
    const CandidateSet cands(b, n);
    for (double beta : {0.5, 2.0 * std::log(static_cast<double>(n))}) {
      const auto brute = brute_force_partition(y, cands, beta);
      for (bool prune : {true, false}) {
        const auto seg = optimal_partition(y, cands, beta, prune);
        CHECK(seg.penalised_cost == doctest::Approx(brute.penalised_cost).epsilon(1e-9));
        CHECK(seg.changepoints == brute.changepoints);
      }
    }
  }
}

TEST_CASE("min segment length matches constrained brute force") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<Index> len(4, 14);
    const Index n = len(rng);
    const auto y = oracle::step_series(rng, n, 3, 2.0);
    const auto b = oracle::random_subset(rng, n, 12);
    const Index min_seg = 1 + trial % 4;
    if (min_seg > n) continue;
    const double beta = trial % 3 ? 0.5 : 2.0;
    const auto brute = brute_force_partition(y, CandidateSet(b, n), beta, min_seg);
    const PrefixSums p(y);
    for (bool prune : {true, false}) {
      const auto seg = optimal_partition(p, b, beta, DpOptions{prune, min_seg});
      CHECK(seg.penalised_cost == doctest::Approx(brute.penalised_cost).epsilon(1e-9));
      CHECK(seg.changepoints == brute.changepoints);
      Index prev = 0;
      for (Index cp : seg.changepoints) {
        CHECK(cp - prev >= min_seg);
        prev = cp;
      }
      CHECK(n - prev >= min_seg);
    }
  }
}

TEST_CASE("restriction, recomputability and monotonicity") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = 80;
    const auto y = oracle::step_series(rng, n, 4, 1.0 + trial % 3);
    const double beta = 2.0 * std::log(static_cast<double>(n));
    const auto small = oracle::random_subset(rng, n, 30);
    // A superset of `small`.
    auto large = small;
    for (Index extra : oracle::random_subset(rng, n, 30)) large.push_back(extra);
    std::sort(large.begin(), large.end());
    large.erase(std::unique(large.begin(), large.end()), large.end());

    const auto a = optimal_partition(y, CandidateSet(small, n), beta);
    const auto b = optimal_partition(y, CandidateSet(large, n), beta);
    for (Index cp : a.changepoints) CHECK(contains(small, cp));
    CHECK(b.penalised_cost <= a.penalised_cost + 1e-9);
    CHECK(a.penalised_cost ==
          doctest::Approx(oracle::direct_penalised_cost(y, a.changepoints, beta)).epsilon(1e-9));

    std::size_t prev_count = n;
    for (double scale : {0.1, 0.5, 1.0, 2.0, 5.0, 20.0, 100.0}) {
      const auto s = optimal_partition(y, CandidateSet::full(n), scale * beta);
      CHECK(s.changepoints.size() <= prev_count);
      prev_count = s.changepoints.size();
    }
  }
}

TEST_CASE("sub-window solve equals solving the copied window") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const auto y = oracle::step_series(rng, 120, 5, 3.0);
    const Index lo = 20 + trial, hi = 90 + trial;
    std::vector<double> window;
    for (Index i = lo + 1; i <= hi; ++i) window.push_back(y.at(i));
    const TimeSeries local(window);
    const auto local_seg = optimal_partition(local, CandidateSet::full(hi - lo), 4.0);

    const PrefixSums p(y);
    std::vector<Index> cands;
    for (Index i = lo + 1; i < hi; ++i) cands.push_back(i);
    DpSolver solver(p, DataWindow{lo, hi}, cands, 4.0);
    auto global = solver.solve();
    for (Index& cp : global) cp -= lo;
    CHECK(global == local_seg.changepoints);
    CHECK(solver.optimum() == doctest::Approx(local_seg.penalised_cost).epsilon(1e-9));
  }
}

TEST_CASE("multivariate cost enters the recursion") {
  const auto y = TimeSeries::from_rows({{0, 0}, {0, 0}, {0, 0}, {5, -5}, {5, -5}, {5, -5}});
  const auto seg = optimal_partition(y, CandidateSet::full(6), 3.0);
  CHECK(seg.changepoints == std::vector<Index>{3});
  CHECK(seg.penalised_cost == 3.0);
}
