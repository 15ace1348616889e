#pragma once

// Randomized Time Window Preservation Algorithm.
//
// Each pass walks every robot's chain in order, computes the admissible
// window of the next task from its predecessor's finish and the room left
// before the end of the period, and draws the start uniformly from it. The
// best of N passes (lowest peak, earliest pass on ties) is returned.
//
// Pass p draws from SplitMix64(derive_seed(seed, p)), so the first N passes
// of a longer run are exactly the passes of a shorter one.

#include <cstdint>
#include <string>
#include <vector>

#include "peakrate/model.hpp"
#include "peakrate/report.hpp"
#include "peakrate/rng.hpp"

namespace peakrate {

struct RtwpaConfig {
  std::uint64_t iterations = 1000;
  std::uint64_t seed = 0;
};

namespace detail {

// Fills `starts` (already shaped) and `load` (size T) for one pass and
// returns its peak. Throws Infeasible on the first empty window.
template <typename Gen>
Rate rtwpa_pass(const std::vector<RobotChain>& chains, Gen& gen, std::vector<std::vector<Slot>>& starts,
                std::vector<Rate>& load) {
  std::fill(load.begin(), load.end(), 0.0);
  for (std::size_t i = 0; i < chains.size(); ++i) {
    Slot finish = 0;
    for (std::size_t j = 0; j < chains[i].size(); ++j) {
      const ChainStep& step = chains[i][j];
      const TimeWindow w = window_for(step, finish);
      if (w.empty())
        throw Error(ErrorKind::Infeasible, "robot " + std::to_string(i) + " task " + std::to_string(j) + ": es " +
                                               std::to_string(w.es) + " > ls " + std::to_string(w.ls));
      const Slot start = uniform_int(gen, w.es, w.ls);
      starts[i][j] = start;
      finish = finish_slot(start, step.duration);
      for (Slot t = start; t <= finish; ++t) load[static_cast<std::size_t>(t - 1)] += step.rate;
    }
  }
  Rate peak = 0.0;
  for (Rate v : load) peak = std::max(peak, v);
  return peak;
}

inline Schedule shaped_schedule(const Scenario& s) {
  Schedule sched;
  sched.starts.reserve(s.robots.size());
  for (const auto& r : s.robots) sched.starts.emplace_back(r.tasks.size(), 0);
  return sched;
}

}  // namespace detail

inline SolveReport solve_rtwpa(const Scenario& s, const RtwpaConfig& config) {
  validate_scenario(s);
  if (config.iterations < 1) throw Error(ErrorKind::InvalidInput, "iterations must be >= 1");
  const Stopwatch clock;
  const auto chains = build_chains(s);
  Schedule current = detail::shaped_schedule(s);
  std::vector<Rate> load(static_cast<std::size_t>(s.period));

  SolveReport report;
  report.method = Method::Rtwpa;
  report.seed = config.seed;
  report.iterations = config.iterations;
  for (std::uint64_t pass = 0; pass < config.iterations; ++pass) {
    SplitMix64 gen(derive_seed(config.seed, pass));
    const Rate z = detail::rtwpa_pass(chains, gen, current.starts, load);
    if (pass == 0 || peak_less(z, report.peak)) {
      report.peak = z;
      report.schedule = current;
    }
  }
  report.runtime = clock.elapsed();
  return report;
}

}  // namespace peakrate
