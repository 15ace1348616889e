#pragma once

// Exhaustive reference minimizer. Enumerates every start vector reachable by
// chaining windows (every valid schedule is reachable this way), checks each
// leaf against validate_schedule, and keeps the lowest peak. Leaves are
// visited in lexicographic order of the flattened start vector (robot-major,
// then task, then slot) and only strict improvements replace the incumbent,
// so ties resolve to the lexicographically smallest optimum.

#include <cstdint>
#include <string>
#include <vector>

#include "peakrate/model.hpp"
#include "peakrate/rtwpa.hpp"

namespace peakrate {

inline constexpr double kDefaultOracleCap = 1e7;

struct OracleResult {
  Schedule best_schedule;
  Rate best_peak = 0.0;
  std::uint64_t schedules_enumerated = 0;  // complete start vectors visited
  std::uint64_t feasible_count = 0;        // of those, how many validate cleanly
};

// Upper bound on the number of leaves: each task's window is widest when
// every predecessor starts as early as possible.
inline double oracle_size_estimate(const Scenario& s) {
  double product = 1.0;
  for (const RobotChain& chain : build_chains(s)) {
    Slot finish = 0;
    for (const ChainStep& step : chain) {
      const TimeWindow w = window_for(step, finish);
      if (w.empty()) return 0.0;
      product *= w.width();
      finish = finish_slot(w.es, step.duration);
    }
  }
  return product;
}

namespace detail {

class OracleSearch {
 public:
  explicit OracleSearch(const Scenario& s)
      : scenario_(s), chains_(build_chains(s)), current_(shaped_schedule(s)),
        load_(static_cast<std::size_t>(s.period), 0.0) {}

  OracleResult run() {
    descend(0, 0, 0, 0.0);
    return std::move(result_);
  }

 private:
  void descend(std::size_t robot, std::size_t task, Slot finish_prev, Rate partial_peak) {
    if (robot == chains_.size()) {
      leaf(partial_peak);
      return;
    }
    if (task == chains_[robot].size()) {
      descend(robot + 1, 0, 0, partial_peak);
      return;
    }
    const ChainStep& step = chains_[robot][task];
    const TimeWindow w = window_for(step, finish_prev);
    for (Slot start = w.es; start <= w.ls; ++start) {
      const Slot finish = finish_slot(start, step.duration);
      Rate peak = partial_peak;
      for (Slot t = start; t <= finish; ++t) {
        Rate& cell = load_[static_cast<std::size_t>(t - 1)];
        cell += step.rate;
        peak = std::max(peak, cell);
      }
      current_.starts[robot][task] = start;
      descend(robot, task + 1, finish, peak);
      for (Slot t = start; t <= finish; ++t) load_[static_cast<std::size_t>(t - 1)] -= step.rate;
    }
  }

  void leaf(Rate peak) {
    ++result_.schedules_enumerated;
    if (!validate_schedule(scenario_, current_).empty()) return;
    ++result_.feasible_count;
    if (result_.feasible_count == 1 || peak_less(peak, result_.best_peak)) {
      result_.best_peak = peak;
      result_.best_schedule = current_;
    }
  }

  const Scenario& scenario_;
  std::vector<RobotChain> chains_;
  Schedule current_;
  std::vector<Rate> load_;
  OracleResult result_;
};

}  // namespace detail

inline OracleResult brute_force_optimal(const Scenario& s, double cap = kDefaultOracleCap) {
  validate_scenario(s);
  const double estimate = oracle_size_estimate(s);
  if (estimate > cap)
    throw Error(ErrorKind::CapExceeded, "estimated " + std::to_string(estimate) + " leaves exceeds cap " +
                                            std::to_string(cap));
  OracleResult result = detail::OracleSearch(s).run();
  if (result.feasible_count == 0) throw Error(ErrorKind::Infeasible, "no valid schedule exists");
  // The incremental peak can drift from a fresh sum for fractional rates.
  result.best_peak = traffic_profile(s, result.best_schedule).peak;
  return result;
}

}  // namespace peakrate
