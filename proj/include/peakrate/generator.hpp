#pragma once

// Seeded scenario generator and bundled example scenarios.
//
// Sampling uses SplitMix64(params.seed) in a fixed order: robot-major, then
// task; per task rate, duration, gap_max. A draw that is infeasible is
// discarded and the stream continues, up to kMaxGenerationAttempts draws.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "peakrate/model.hpp"
#include "peakrate/rng.hpp"

namespace peakrate {

struct IntRange {
  int lo = 0;
  int hi = 0;
};

struct GenParams {
  int period = 15;
  int robots = 2;
  int tasks_per_robot = 1;
  IntRange rate_range{1, 4};
  IntRange duration_range{1, 3};
  int gap_min = 1;
  IntRange gap_max_range{3, 5};
  std::uint64_t seed = 0;
  bool continuous_rates = false;  // uniform real rates in [lo, hi) instead of integers
};

inline constexpr int kMaxGenerationAttempts = 1000;

inline void check_params(const GenParams& p) {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::InvalidInput, m); };
  if (p.period < 1) fail("period must be >= 1");
  if (p.robots < 1 || p.tasks_per_robot < 1) fail("robots and tasks per robot must be >= 1");
  for (const IntRange& r : {p.rate_range, p.duration_range, p.gap_max_range})
    if (r.lo > r.hi) fail("range low exceeds high");
  if (p.rate_range.lo < 0) fail("rates must be >= 0");
  if (p.duration_range.lo < 1) fail("durations must be >= 1");
  if (p.gap_min < 0) fail("gap_min must be >= 0");
  if (p.gap_max_range.lo < p.gap_min) fail("gap_max range must start at or above gap_min");
}

inline Scenario generate(const GenParams& p) {
  check_params(p);
  SplitMix64 gen(p.seed);
  for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    Scenario s;
    s.period = p.period;
    s.robots.resize(static_cast<std::size_t>(p.robots));
    for (Robot& robot : s.robots) {
      robot.tasks.resize(static_cast<std::size_t>(p.tasks_per_robot));
      for (TaskSpec& t : robot.tasks) {
        t.rate = p.continuous_rates
                     ? p.rate_range.lo + (p.rate_range.hi - p.rate_range.lo) * uniform_unit(gen)
                     : static_cast<Rate>(uniform_int(gen, p.rate_range.lo, p.rate_range.hi));
        t.duration = uniform_int(gen, p.duration_range.lo, p.duration_range.hi);
        t.gap_min = p.gap_min;
        t.gap_max = uniform_int(gen, p.gap_max_range.lo, p.gap_max_range.hi);
      }
    }
    if (is_feasible(s)) return s;
  }
  const long long worst = static_cast<long long>(p.tasks_per_robot) * (p.duration_range.lo + p.gap_min);
  throw Error(ErrorKind::InfeasibleParams,
              "no feasible draw in " + std::to_string(kMaxGenerationAttempts) +
                  " attempts; smallest per-robot demand sum(d + gap_min) = " + std::to_string(worst) +
                  " vs period " + std::to_string(p.period));
}

// Welder/palletiser pair at 1-second slots over a 60 s cycle.
//
// Welder: QA (65 Mbps) and weld (0.65 Mbps) passes of 10 s each, back to
// back, starting with the QA pass of the previous junction. Zero gaps make
// its chain rigid. Palletiser: one 5 s packing move at 65 Mbps whose start
// may float over the first 40 s (gap_min 16 before the cycle ends).
// Constant monitoring traffic is left out; it shifts every profile equally.
//
// Packing during a QA pass peaks at 130; during a weld pass at 65.65.
inline Scenario welding_palletiser() {
  Scenario s;
  s.period = 60;
  Robot welder;
  for (int pass = 0; pass < 3; ++pass) {
    welder.tasks.push_back({65.0, 10, 0, 0});  // QA
    welder.tasks.push_back({0.65, 10, 0, 0});  // weld
  }
  Robot palletiser;
  palletiser.tasks.push_back({65.0, 5, 16, std::nullopt});
  s.robots = {welder, palletiser};
  return s;
}

inline std::vector<std::string_view> bundled_example_names() { return {"welding_palletiser"}; }

inline Scenario bundled_example(std::string_view name) {
  if (name == "welding_palletiser") return welding_palletiser();
  throw Error(ErrorKind::UnknownExample, "no bundled example named '" + std::string(name) + "'");
}

}  // namespace peakrate
