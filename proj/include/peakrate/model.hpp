#pragma once

// Domain model for periodic robot traffic scheduling.
//
// Time is discretized into slots 1..T (1-based everywhere a slot appears).
// Robots and tasks are addressed by 0-based indices. Each robot runs an
// ordered chain of tasks once per period; task j occupies slots
// [start, start + duration - 1] at a constant rate. Gap bounds constrain the
// idle slots between a task's finish and its successor's start, and the last
// task's gap_min is the minimum idle time before the end of the period.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "peakrate/error.hpp"

namespace peakrate {

using Slot = int;
using Rate = double;

struct TaskSpec {
  Rate rate = 0.0;
  int duration = 1;
  int gap_min = 0;
  std::optional<int> gap_max;  // nullopt = unbounded; ignored on a robot's last task

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

// A robot's task chain. When `cycle` is set (and shorter than the scenario
// period) the chain is a concatenation of period/cycle replicas, replica c
// being confined to slots [c*cycle + 1, (c+1)*cycle]. Produced by
// harmonize_periods; plain scenarios leave it empty.
struct Robot {
  std::vector<TaskSpec> tasks;
  std::optional<int> cycle;

  friend bool operator==(const Robot&, const Robot&) = default;
};

struct Scenario {
  int period = 1;
  std::vector<Robot> robots;

  std::size_t task_count() const {
    std::size_t n = 0;
    for (const auto& r : robots) n += r.tasks.size();
    return n;
  }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct TimeWindow {
  Slot es = 1;
  Slot ls = 1;

  bool empty() const { return es > ls; }
  int width() const { return empty() ? 0 : ls - es + 1; }

  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

// starts[i][j] is the 1-based start slot of task j of robot i. Occupancy is
// always derived from starts and durations.
struct Schedule {
  std::vector<std::vector<Slot>> starts;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

struct TrafficProfile {
  std::vector<Rate> per_slot;  // per_slot[t - 1] is the aggregate rate of slot t
  Rate peak = 0.0;
};

// ---------------------------------------------------------------------------
// Peak comparison. Integer-valued rates sum exactly in double precision, so a
// relative tolerance of 1e-9 only matters for genuinely fractional rates.

inline constexpr double kPeakRelTol = 1e-9;

inline double peak_tolerance(Rate reference) {
  return kPeakRelTol * std::max(1.0, std::abs(reference));
}

inline bool peak_less(Rate a, Rate b) { return a < b - peak_tolerance(b); }
inline bool peak_equal(Rate a, Rate b) { return std::abs(a - b) <= peak_tolerance(std::max(std::abs(a), std::abs(b))); }
inline bool peak_less_equal(Rate a, Rate b) { return !peak_less(b, a); }

// ---------------------------------------------------------------------------
// Scenario checks

inline void validate_scenario(const Scenario& s) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidInput, msg); };
  if (s.period < 1) fail("period must be >= 1");
  if (s.robots.empty()) fail("scenario has no robots");
  for (std::size_t i = 0; i < s.robots.size(); ++i) {
    const Robot& robot = s.robots[i];
    const std::string where = "robot " + std::to_string(i);
    if (robot.tasks.empty()) fail(where + " has no tasks");
    if (robot.cycle) {
      const int c = *robot.cycle;
      if (c < 1 || s.period % c != 0) fail(where + ": cycle must divide the period");
      const auto replicas = static_cast<std::size_t>(s.period / c);
      if (robot.tasks.size() % replicas != 0)
        fail(where + ": task count is not a multiple of the replica count");
    }
    for (std::size_t j = 0; j < robot.tasks.size(); ++j) {
      const TaskSpec& t = robot.tasks[j];
      const std::string at = where + " task " + std::to_string(j);
      if (!std::isfinite(t.rate) || t.rate < 0.0) fail(at + ": rate must be finite and >= 0");
      if (t.duration < 1) fail(at + ": duration must be >= 1");
      if (t.gap_min < 0) fail(at + ": gap_min must be >= 0");
      if (t.gap_max && *t.gap_max < t.gap_min) fail(at + ": gap_max < gap_min");
    }
  }
}

inline void check_shape(const Scenario& s, const Schedule& schedule) {
  bool ok = schedule.starts.size() == s.robots.size();
  for (std::size_t i = 0; ok && i < s.robots.size(); ++i)
    ok = schedule.starts[i].size() == s.robots[i].tasks.size();
  if (!ok) throw Error(ErrorKind::ShapeMismatch, "schedule does not match the scenario's task layout");
}

// ---------------------------------------------------------------------------
// Time-window algebra

constexpr Slot finish_slot(Slot start, int duration) { return start + duration - 1; }

constexpr Slot earliest_start_next(Slot finish_prev, int gap_min) { return finish_prev + gap_min + 1; }

constexpr Slot latest_start_by_gap(Slot finish_prev, int gap_max) { return finish_prev + gap_max + 1; }

// Slot range that task `task` of robot `robot` must stay within: the whole
// period for plain robots, its replica's cycle for harmonized ones.
struct CycleSpan {
  Slot lo = 1;
  Slot hi = 1;
  bool first_in_cycle = false;
  bool last_in_cycle = false;
};

inline CycleSpan cycle_span(const Scenario& s, std::size_t robot, std::size_t task) {
  const Robot& r = s.robots[robot];
  const std::size_t n = r.tasks.size();
  if (!r.cycle || *r.cycle >= s.period) return {1, s.period, task == 0, task + 1 == n};
  const int c = *r.cycle;
  const std::size_t per_replica = n / static_cast<std::size_t>(s.period / c);
  const auto replica = static_cast<int>(task / per_replica);
  const std::size_t pos = task % per_replica;
  return {replica * c + 1, (replica + 1) * c, pos == 0, pos + 1 == per_replica};
}

// Latest start for `task` that still leaves room for the task itself, every
// later task of its cycle, and the trailing minimum gaps.
inline Slot latest_start_by_period(const Scenario& s, std::size_t robot, std::size_t task) {
  const Robot& r = s.robots[robot];
  const CycleSpan span = cycle_span(s, robot, task);
  long long demand = 0;
  for (std::size_t k = task; k < r.tasks.size(); ++k) {
    demand += r.tasks[k].gap_min + r.tasks[k].duration;
    if (cycle_span(s, robot, k).last_in_cycle) break;
  }
  return static_cast<Slot>(span.hi - demand + 1);
}

// Precomputed window ingredients for one task of a chain.
struct ChainStep {
  Slot latest_by_period = 1;
  Slot release = 1;               // lower bound on the start independent of the predecessor
  bool has_predecessor = false;   // false only for the chain's first task
  bool gap_bounded = false;       // predecessor's gap_max applies
  int gap_min_prev = 0;
  int gap_max_prev = 0;
  int duration = 1;
  Rate rate = 0.0;
};

using RobotChain = std::vector<ChainStep>;

inline RobotChain build_chain(const Scenario& s, std::size_t robot) {
  const Robot& r = s.robots[robot];
  RobotChain chain(r.tasks.size());
  for (std::size_t j = 0; j < r.tasks.size(); ++j) {
    ChainStep& step = chain[j];
    const CycleSpan span = cycle_span(s, robot, j);
    step.latest_by_period = latest_start_by_period(s, robot, j);
    step.release = span.lo;
    step.duration = r.tasks[j].duration;
    step.rate = r.tasks[j].rate;
    if (j > 0) {
      const TaskSpec& prev = r.tasks[j - 1];
      step.has_predecessor = true;
      step.gap_min_prev = prev.gap_min;
      // The gap between replicas is governed by the cycle bounds alone.
      step.gap_bounded = prev.gap_max.has_value() && !span.first_in_cycle;
      step.gap_max_prev = prev.gap_max.value_or(0);
    }
  }
  return chain;
}

inline std::vector<RobotChain> build_chains(const Scenario& s) {
  std::vector<RobotChain> chains;
  chains.reserve(s.robots.size());
  for (std::size_t i = 0; i < s.robots.size(); ++i) chains.push_back(build_chain(s, i));
  return chains;
}

// Window for a chain step given the predecessor's finish (ignored for the
// first step). May be empty; callers decide whether that is an error.
inline TimeWindow window_for(const ChainStep& step, Slot finish_prev) {
  if (!step.has_predecessor) return {step.release, step.latest_by_period};
  TimeWindow w;
  w.es = std::max(earliest_start_next(finish_prev, step.gap_min_prev), step.release);
  w.ls = step.latest_by_period;
  if (step.gap_bounded) w.ls = std::min(w.ls, latest_start_by_gap(finish_prev, step.gap_max_prev));
  return w;
}

// Admissible start slots of `task` given the predecessor's finish
// (`finish_prev` must be empty exactly when task == 0).
inline TimeWindow compute_window(const Scenario& s, std::size_t robot, std::size_t task,
                                 std::optional<Slot> finish_prev) {
  if (robot >= s.robots.size() || task >= s.robots[robot].tasks.size())
    throw Error(ErrorKind::InvalidInput, "task index out of range");
  if (finish_prev.has_value() == (task == 0))
    throw Error(ErrorKind::InvalidInput, "finish_prev must be given for every task but the first");
  const RobotChain chain = build_chain(s, robot);
  const TimeWindow w = window_for(chain[task], finish_prev.value_or(0));
  if (w.empty())
    throw Error(ErrorKind::WindowEmpty, "robot " + std::to_string(robot) + " task " + std::to_string(task) +
                                            ": es " + std::to_string(w.es) + " > ls " + std::to_string(w.ls));
  return w;
}

// ---------------------------------------------------------------------------
// Validation

enum class Rule {
  StartBeforeOne,
  FinishAfterPeriod,
  GapBelowMin,
  GapAboveMax,
  EndOfPeriodGap,  // last task of a chain (or cycle): finish + gap_min must not pass the end
  CycleStart,      // harmonized replica started before its cycle
};

constexpr std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::StartBeforeOne: return "start_before_one";
    case Rule::FinishAfterPeriod: return "finish_after_period";
    case Rule::GapBelowMin: return "gap_below_min";
    case Rule::GapAboveMax: return "gap_above_max";
    case Rule::EndOfPeriodGap: return "end_of_period_gap";
    case Rule::CycleStart: return "cycle_start";
  }
  return "unknown";
}

struct Violation {
  std::size_t robot = 0;
  std::size_t task = 0;
  Rule rule = Rule::StartBeforeOne;
  std::string detail;
};

inline std::vector<Violation> validate_schedule(const Scenario& s, const Schedule& schedule) {
  check_shape(s, schedule);
  std::vector<Violation> out;
  auto add = [&](std::size_t i, std::size_t j, Rule rule, std::string detail) {
    out.push_back({i, j, rule, std::move(detail)});
  };
  for (std::size_t i = 0; i < s.robots.size(); ++i) {
    const auto& tasks = s.robots[i].tasks;
    const auto& starts = schedule.starts[i];
    for (std::size_t j = 0; j < tasks.size(); ++j) {
      const Slot start = starts[j];
      const Slot finish = finish_slot(start, tasks[j].duration);
      const CycleSpan span = cycle_span(s, i, j);
      if (start < 1) add(i, j, Rule::StartBeforeOne, "start " + std::to_string(start) + " < 1");
      if (finish > s.period)
        add(i, j, Rule::FinishAfterPeriod,
            "finish " + std::to_string(finish) + " > period " + std::to_string(s.period));
      if (span.first_in_cycle && span.lo > 1 && start < span.lo)
        add(i, j, Rule::CycleStart, "start " + std::to_string(start) + " < cycle start " + std::to_string(span.lo));
      if (j + 1 < tasks.size() && !cycle_span(s, i, j + 1).first_in_cycle) {
        const int gap = starts[j + 1] - finish - 1;
        if (gap < tasks[j].gap_min)
          add(i, j, Rule::GapBelowMin,
              "gap " + std::to_string(gap) + " < gap_min " + std::to_string(tasks[j].gap_min));
        if (tasks[j].gap_max && gap > *tasks[j].gap_max)
          add(i, j, Rule::GapAboveMax,
              "gap " + std::to_string(gap) + " > gap_max " + std::to_string(*tasks[j].gap_max));
      }
      if (span.last_in_cycle && finish + tasks[j].gap_min > span.hi)
        add(i, j, Rule::EndOfPeriodGap,
            "finish " + std::to_string(finish) + " + gap_min " + std::to_string(tasks[j].gap_min) + " = " +
                std::to_string(finish + tasks[j].gap_min) + " > " + std::to_string(span.hi));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Traffic

// Occupancy outside [1, T] is clipped so profiles of invalid schedules stay
// defined for diagnostics.
inline TrafficProfile traffic_profile(const Scenario& s, const Schedule& schedule) {
  check_shape(s, schedule);
  TrafficProfile p;
  p.per_slot.assign(static_cast<std::size_t>(s.period), 0.0);
  for (std::size_t i = 0; i < s.robots.size(); ++i) {
    const auto& tasks = s.robots[i].tasks;
    for (std::size_t j = 0; j < tasks.size(); ++j) {
      const Slot lo = std::max(1, schedule.starts[i][j]);
      const Slot hi = std::min(s.period, finish_slot(schedule.starts[i][j], tasks[j].duration));
      for (Slot t = lo; t <= hi; ++t) p.per_slot[static_cast<std::size_t>(t - 1)] += tasks[j].rate;
    }
  }
  p.peak = p.per_slot.empty() ? 0.0 : *std::max_element(p.per_slot.begin(), p.per_slot.end());
  return p;
}

inline Rate total_volume(const Scenario& s) {
  Rate v = 0.0;
  for (const auto& r : s.robots)
    for (const auto& t : r.tasks) v += t.rate * t.duration;
  return v;
}

inline Rate max_rate(const Scenario& s) {
  Rate m = 0.0;
  for (const auto& r : s.robots)
    for (const auto& t : r.tasks) m = std::max(m, t.rate);
  return m;
}

inline bool integer_rates(const Scenario& s) {
  for (const auto& r : s.robots)
    for (const auto& t : r.tasks)
      if (t.rate != std::floor(t.rate)) return false;
  return true;
}

// Percent of peak reduction relative to a baseline.
inline double popr(Rate baseline_peak, Rate method_peak) {
  if (baseline_peak == 0.0) throw Error(ErrorKind::DivisionByZero, "baseline peak is zero");
  return 100.0 * (baseline_peak - method_peak) / baseline_peak;
}

// True iff every robot's chain admits at least one placement. Placing every
// task at its earliest start is a witness whenever any placement exists.
inline bool is_feasible(const Scenario& s) {
  for (std::size_t i = 0; i < s.robots.size(); ++i) {
    const RobotChain chain = build_chain(s, i);
    Slot finish = 0;
    for (const ChainStep& step : chain) {
      const TimeWindow w = window_for(step, finish);
      if (w.empty()) return false;
      finish = finish_slot(w.es, step.duration);
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Period harmonization

inline constexpr int kDefaultPeriodCap = 100000;

// Merges scenarios with different periods into one whose period is the lcm
// of all periods. Each robot's chain is replicated period/T_i times and every
// replica stays inside its own native cycle.
inline Scenario harmonize_periods(const std::vector<Scenario>& instances, int period_cap = kDefaultPeriodCap) {
  if (instances.empty()) throw Error(ErrorKind::InvalidInput, "no instances to harmonize");
  long long period = 1;
  for (const Scenario& s : instances) {
    validate_scenario(s);
    period = std::lcm(period, static_cast<long long>(s.period));
    if (period > period_cap)
      throw Error(ErrorKind::Overflow, "lcm of periods exceeds cap " + std::to_string(period_cap));
  }
  Scenario out;
  out.period = static_cast<int>(period);
  for (const Scenario& s : instances) {
    const int copies = out.period / s.period;
    for (const Robot& r : s.robots) {
      Robot merged;
      for (int c = 0; c < copies; ++c) merged.tasks.insert(merged.tasks.end(), r.tasks.begin(), r.tasks.end());
      const int native = r.cycle.value_or(s.period);
      if (native < out.period) merged.cycle = native;
      out.robots.push_back(std::move(merged));
    }
  }
  return out;
}

}  // namespace peakrate
