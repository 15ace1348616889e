#pragma once

// Uncoordinated reference schedulers.
//
// solve_random is one RTWPA pass: every robot places each task uniformly at
// random inside its window with no regard for the others. It draws the same
// stream as pass 0 of solve_rtwpa with the same seed.
// solve_asap starts every task as early as its window allows.

#include <cstdint>

#include "peakrate/model.hpp"
#include "peakrate/report.hpp"
#include "peakrate/rtwpa.hpp"

namespace peakrate {

inline SolveReport solve_random(const Scenario& s, std::uint64_t seed) {
  SolveReport report = solve_rtwpa(s, RtwpaConfig{1, seed});
  report.method = Method::Random;
  report.iterations.reset();
  return report;
}

inline SolveReport solve_asap(const Scenario& s) {
  validate_scenario(s);
  const Stopwatch clock;
  SolveReport report;
  report.method = Method::Asap;
  report.schedule = detail::shaped_schedule(s);
  for (std::size_t i = 0; i < s.robots.size(); ++i) {
    const RobotChain chain = build_chain(s, i);
    Slot finish = 0;
    for (std::size_t j = 0; j < chain.size(); ++j) {
      const TimeWindow w = window_for(chain[j], finish);
      if (w.empty())
        throw Error(ErrorKind::Infeasible, "robot " + std::to_string(i) + " task " + std::to_string(j) +
                                               " has an empty window");
      report.schedule.starts[i][j] = w.es;
      finish = finish_slot(w.es, chain[j].duration);
    }
  }
  report.peak = traffic_profile(s, report.schedule).peak;
  report.runtime = clock.elapsed();
  return report;
}

}  // namespace peakrate
