#include <gtest/gtest.h>

#include <random>

#include "peakrate/baselines.hpp"
#include "peakrate/exact.hpp"
#include "peakrate/generator.hpp"
#include "peakrate/oracle.hpp"
#include "peakrate/rtwpa.hpp"
#include "support/oracles.hpp"

using namespace peakrate;
using peakrate::testing::make_scenario;

namespace {

Scenario rigid_chain() { return make_scenario(12, {{{2, 3, 1, 1}, {3, 3, 1, 1}, {1, 3, 1, std::nullopt}}}); }

Scenario overfull() { return make_scenario(5, {{{1, 3, 2, std::nullopt}, {1, 3, 1, std::nullopt}}}); }

}  // namespace

TEST(Rng, DerivedSeedsAreStable) {
  // Frozen values pin the documented generator and seed derivation.
  SplitMix64 g(0);
  EXPECT_EQ(g(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(g(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(derive_seed(0, {}), 0U);
  EXPECT_NE(derive_seed(1, 2), derive_seed(2, 1));
}

TEST(Rng, UniformIntStaysInRange) {
  SplitMix64 g(99);
  std::vector<int> counts(5, 0);
  for (int k = 0; k < 50000; ++k) {
    const int v = uniform_int(g, 3, 7);
    ASSERT_GE(v, 3);
    ASSERT_LE(v, 7);
    ++counts[static_cast<std::size_t>(v - 3)];
  }
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
  EXPECT_EQ(uniform_int(g, 4, 4), 4);
}

TEST(Rtwpa, SingletonWindowsGiveTheUniqueSchedule) {
  const Scenario s = rigid_chain();
  for (std::uint64_t seed : {0ULL, 1ULL, 12345ULL}) {
    for (std::uint64_t n : {1ULL, 7ULL, 100ULL}) {
      const auto r = solve_rtwpa(s, {n, seed});
      EXPECT_EQ(r.schedule, (Schedule{{{1, 5, 9}}}));
    }
  }
}

TEST(Rtwpa, InfeasibleRegardlessOfSeed) {
  for (std::uint64_t seed : {0ULL, 3ULL, 99ULL}) {
    try {
      solve_rtwpa(overfull(), {10, seed});
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::Infeasible);
    }
  }
}

TEST(Rtwpa, ScenarioAReachesOptimum) {
  const auto r = solve_rtwpa(peakrate::testing::scenario_a(), {1000, 0});
  EXPECT_EQ(r.peak, brute_force_optimal(peakrate::testing::scenario_a()).best_peak);
  EXPECT_EQ(r.method, Method::Rtwpa);
  EXPECT_EQ(r.iterations, 1000U);
  EXPECT_EQ(r.seed, 0U);
}

TEST(Rtwpa, RejectsZeroIterations) { EXPECT_THROW(solve_rtwpa(peakrate::testing::scenario_a(), {0, 0}), Error); }

TEST(Rtwpa, SchedulesAreValidAndDominatedByExact) {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 300; ++k) {
    const Scenario s = peakrate::testing::fuzz_scenario(rng);
    if (!is_feasible(s)) {
      EXPECT_THROW(solve_rtwpa(s, {5, rng()}), Error);
      continue;
    }
    const auto r = solve_rtwpa(s, {50, rng()});
    ASSERT_TRUE(validate_schedule(s, r.schedule).empty());
    EXPECT_EQ(r.peak, traffic_profile(s, r.schedule).peak);
    EXPECT_GE(r.peak, solve_exact(s).peak);
  }
}

TEST(Rtwpa, BestOfNIsNonincreasingInN) {
  GenParams p;
  p.robots = 8;
  p.tasks_per_robot = 3;
  p.seed = 4;
  const Scenario s = generate(p);
  for (std::uint64_t seed : {0ULL, 17ULL, 4242ULL}) {
    Rate previous = std::numeric_limits<Rate>::infinity();
    for (std::uint64_t n : {1ULL, 2ULL, 5ULL, 10ULL, 50ULL, 200ULL, 1000ULL}) {
      const Rate peak = solve_rtwpa(s, {n, seed}).peak;
      EXPECT_LE(peak, previous);
      previous = peak;
    }
  }
}

TEST(Rtwpa, NestedRunsShareTheirPrefix) {
  // The best of 10 passes is found again by the first 10 passes of 40, so a
  // 40-pass run only ever replaces it with something strictly better.
  GenParams p;
  p.robots = 6;
  p.tasks_per_robot = 2;
  p.seed = 8;
  const Scenario s = generate(p);
  const auto shorter = solve_rtwpa(s, {10, 5});
  const auto longer = solve_rtwpa(s, {40, 5});
  if (longer.peak == shorter.peak) {
    EXPECT_EQ(longer.schedule, shorter.schedule);
  }
  EXPECT_LE(longer.peak, shorter.peak);
}

TEST(Rtwpa, Reproducible) {
  GenParams p;
  p.robots = 10;
  p.tasks_per_robot = 3;
  p.seed = 2;
  const Scenario s = generate(p);
  const auto a = solve_rtwpa(s, {300, 9});
  const auto b = solve_rtwpa(s, {300, 9});
  EXPECT_EQ(a.schedule, b.schedule);
  EXPECT_EQ(a.peak, b.peak);
}
