#pragma once

// Experiment sweeps over generated scenarios.
//
// For every (robots, tasks) cell and scenario id s the scenario is generated
// with seed derive_seed(master, {I, J, s}); every requested method then runs
// on that same scenario. RTWPA and random draws use
// derive_seed(master, {I, J, s, 1}) and derive_seed(master, {I, J, s, 2}).
// Units of work may run on several threads; rows are always assembled in
// (cell order, scenario id, method order) so output does not depend on it.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "peakrate/generator.hpp"
#include "peakrate/io.hpp"
#include "peakrate/solve.hpp"

namespace peakrate {

struct Cell {
  int robots = 0;
  int tasks = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

inline std::vector<Cell> cell_grid(const std::vector<int>& robot_counts, const std::vector<int>& task_counts) {
  std::vector<Cell> cells;
  for (int j : task_counts)
    for (int i : robot_counts) cells.push_back({i, j});
  return cells;
}

struct ProfileRequest {
  Cell cell;
  int scenario_id = 1;
};

struct BenchConfig {
  std::vector<Cell> cells = cell_grid({2, 4, 6, 8, 10}, {1, 2, 3});
  int scenarios_per_cell = 100;
  std::vector<Method> methods = {Method::Exact, Method::Rtwpa, Method::Random};
  std::uint64_t master_seed = 0;
  std::optional<Millis> exact_time_limit = Millis(120'000);
  Method baseline = Method::Random;
  std::uint64_t rtwpa_iterations = 1000;
  GenParams generator;  // robots, tasks and seed are overwritten per scenario
  unsigned workers = 1;
  std::vector<ProfileRequest> profiles;
  std::function<void(std::size_t done, std::size_t total)> progress;
};

struct BenchRow {
  int robots = 0;
  int tasks = 0;
  int scenario_id = 0;
  Method method = Method::Exact;
  Rate peak = 0.0;
  double runtime_ms = 0.0;
  bool proved_optimal = false;
};

struct ProfileDump {
  ProfileRequest request;
  std::string csv;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::vector<ProfileDump> profiles;
};

inline std::uint64_t scenario_seed(std::uint64_t master, Cell c, int s) {
  return derive_seed(master, {static_cast<std::uint64_t>(c.robots), static_cast<std::uint64_t>(c.tasks),
                              static_cast<std::uint64_t>(s)});
}

inline std::uint64_t method_seed(std::uint64_t master, Cell c, int s, Method m) {
  return derive_seed(scenario_seed(master, c, s), m == Method::Random ? 2 : 1);
}

inline Scenario bench_scenario(const BenchConfig& config, Cell c, int s) {
  GenParams p = config.generator;
  p.robots = c.robots;
  p.tasks_per_robot = c.tasks;
  p.seed = scenario_seed(config.master_seed, c, s);
  return generate(p);
}

// CSV with a slot column and one column per report, named by method tag.
inline std::string dump_profiles(const Scenario& s, const std::vector<SolveReport>& reports) {
  std::vector<TrafficProfile> profiles;
  std::string out = "slot";
  for (const SolveReport& r : reports) {
    profiles.push_back(traffic_profile(s, r.schedule));
    out += ",";
    out += to_string(r.method);
  }
  out += "\n";
  for (Slot t = 1; t <= s.period; ++t) {
    out += std::to_string(t);
    for (const TrafficProfile& p : profiles) out += "," + format_number(p.per_slot[static_cast<std::size_t>(t - 1)]);
    out += "\n";
  }
  return out;
}

inline BenchResult run_experiment(const BenchConfig& config) {
  if (config.scenarios_per_cell < 1) throw Error(ErrorKind::InvalidInput, "scenarios_per_cell must be >= 1");
  if (config.methods.empty()) throw Error(ErrorKind::InvalidInput, "no methods requested");

  struct Unit {
    Cell cell;
    int scenario_id;
  };
  std::vector<Unit> units;
  for (const Cell& c : config.cells)
    for (int s = 1; s <= config.scenarios_per_cell; ++s) units.push_back({c, s});

  const std::size_t per_unit = config.methods.size();
  std::vector<BenchRow> rows(units.size() * per_unit);
  std::map<std::size_t, std::string> dumps;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex guard;
  std::exception_ptr failure;

  auto wants_profile = [&](const Unit& u) {
    return std::any_of(config.profiles.begin(), config.profiles.end(), [&](const ProfileRequest& r) {
      return r.cell == u.cell && r.scenario_id == u.scenario_id;
    });
  };

  auto run_unit = [&](std::size_t k) {
    const Unit& u = units[k];
    const std::string where = "I=" + std::to_string(u.cell.robots) + " J=" + std::to_string(u.cell.tasks) +
                              " s=" + std::to_string(u.scenario_id);
    try {
      const Scenario scenario = bench_scenario(config, u.cell, u.scenario_id);
      std::vector<SolveReport> reports;
      for (std::size_t m = 0; m < per_unit; ++m) {
        const Method method = config.methods[m];
        SolveOptions opt;
        opt.iterations = config.rtwpa_iterations;
        opt.seed = method_seed(config.master_seed, u.cell, u.scenario_id, method);
        opt.time_limit = config.exact_time_limit;
        SolveReport r = solve(scenario, method, opt);
        rows[k * per_unit + m] = {u.cell.robots, u.cell.tasks, u.scenario_id, method, r.peak, r.runtime.count(),
                                  r.proved_optimal};
        reports.push_back(std::move(r));
      }
      if (wants_profile(u)) {
        std::string csv = dump_profiles(scenario, reports);
        const std::lock_guard lock(guard);
        dumps[k] = std::move(csv);
      }
    } catch (const Error& e) {
      const std::lock_guard lock(guard);
      if (!failure) failure = std::make_exception_ptr(Error(e.kind(), where + ": " + e.what()));
    }
  };

  auto worker = [&] {
    for (;;) {
      {
        const std::lock_guard lock(guard);
        if (failure) return;
      }
      const std::size_t k = next.fetch_add(1);
      if (k >= units.size()) return;
      run_unit(k);
      const std::size_t finished = ++done;
      if (config.progress) {
        const std::lock_guard lock(guard);
        config.progress(finished, units.size());
      }
    }
  };

  const unsigned n = std::max(1U, config.workers);
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  BenchResult result;
  result.rows = std::move(rows);
  for (auto& [k, csv] : dumps) result.profiles.push_back({{units[k].cell, units[k].scenario_id}, std::move(csv)});
  return result;
}

struct SummaryRow {
  int robots = 0;
  int tasks = 0;
  Method method = Method::Exact;
  double mean_peak = 0.0;
  double mean_popr = 0.0;
  double mean_runtime_ms = 0.0;
  std::size_t scenarios = 0;
  std::size_t unproved = 0;  // exact rows without an optimality proof
};

// Per (cell, method) means. PoPR is taken per scenario against the baseline's
// peak on the same scenario, then averaged.
inline std::vector<SummaryRow> summarize(const std::vector<BenchRow>& rows, Method baseline) {
  std::map<std::tuple<int, int, int>, Rate> base;
  std::vector<Method> method_order;
  std::vector<Cell> cell_order;
  for (const BenchRow& r : rows) {
    if (r.method == baseline) base[{r.robots, r.tasks, r.scenario_id}] = r.peak;
    if (std::find(method_order.begin(), method_order.end(), r.method) == method_order.end())
      method_order.push_back(r.method);
    const Cell c{r.robots, r.tasks};
    if (std::find(cell_order.begin(), cell_order.end(), c) == cell_order.end()) cell_order.push_back(c);
  }

  std::map<std::pair<Cell, Method>, SummaryRow> acc;
  for (const BenchRow& r : rows) {
    const auto it = base.find({r.robots, r.tasks, r.scenario_id});
    if (it == base.end())
      throw Error(ErrorKind::MissingBaseline, "no " + std::string(to_string(baseline)) + " row for I=" +
                                                  std::to_string(r.robots) + " J=" + std::to_string(r.tasks) +
                                                  " s=" + std::to_string(r.scenario_id));
    SummaryRow& sr = acc[{Cell{r.robots, r.tasks}, r.method}];
    sr.robots = r.robots;
    sr.tasks = r.tasks;
    sr.method = r.method;
    sr.mean_peak += r.peak;
    sr.mean_popr += r.method == baseline ? 0.0 : popr(it->second, r.peak);
    sr.mean_runtime_ms += r.runtime_ms;
    ++sr.scenarios;
    if (r.method == Method::Exact && !r.proved_optimal) ++sr.unproved;
  }

  std::vector<SummaryRow> out;
  for (const Cell& c : cell_order) {
    for (Method m : method_order) {
      const auto it = acc.find({c, m});
      if (it == acc.end()) continue;
      SummaryRow sr = it->second;
      const auto n = static_cast<double>(sr.scenarios);
      sr.mean_peak /= n;
      sr.mean_popr /= n;
      sr.mean_runtime_ms /= n;
      out.push_back(sr);
    }
  }
  return out;
}

inline std::string rows_csv(const std::vector<BenchRow>& rows, bool with_timing = true) {
  std::string out = "robots,tasks,scenario_id,method,peak,runtime_ms,proved_optimal\n";
  for (const BenchRow& r : rows) {
    out += std::to_string(r.robots) + "," + std::to_string(r.tasks) + "," + std::to_string(r.scenario_id) + "," +
           std::string(to_string(r.method)) + "," + format_number(r.peak) + "," +
           format_number(with_timing ? r.runtime_ms : 0.0) + "," + (r.proved_optimal ? "true" : "false") + "\n";
  }
  return out;
}

inline std::string summary_csv(const std::vector<SummaryRow>& summary, bool with_timing = true) {
  std::string out = "robots,tasks,method,mean_peak,mean_popr,mean_runtime_ms\n";
  for (const SummaryRow& r : summary) {
    out += std::to_string(r.robots) + "," + std::to_string(r.tasks) + "," + std::string(to_string(r.method)) + "," +
           format_number(r.mean_peak) + "," + format_number(r.mean_popr) + "," +
           format_number(with_timing ? r.mean_runtime_ms : 0.0) + "\n";
  }
  return out;
}

}  // namespace peakrate
