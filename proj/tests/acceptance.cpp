// Acceptance run: one PASS/FAIL/SKIP line per criterion, exit 1 on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "peakrate/bench.hpp"
#include "peakrate/io.hpp"
#include "peakrate/lp_export.hpp"
#include "support/oracles.hpp"
#include "support/process.hpp"

using namespace peakrate;
namespace pt = peakrate::testing;

namespace {

enum class Outcome { Pass, Fail, Skip };

struct Verdict {
  Outcome outcome = Outcome::Pass;
  std::string detail;
};

std::string fmt(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Verdict oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(0xACCE551);
  pt::FuzzShape shape;
  shape.robots_lo = 2;
  shape.robots_hi = 3;
  shape.tasks_lo = 1;
  shape.tasks_hi = 2;
  shape.period_lo = 6;
  shape.period_hi = 10;
  int compared = 0, mismatches = 0;
  while (compared < 250) {
    const Scenario s = pt::fuzz_scenario(rng, shape);
    if (!is_feasible(s)) continue;
    const Rate exact = solve_exact(s).peak;
    const Rate oracle = brute_force_optimal(s).best_peak;
    if (exact != oracle) ++mismatches;
    ++compared;
  }
  const double secs = seconds_since(t0);
  Verdict v;
  v.outcome = mismatches == 0 && secs < 60 ? Outcome::Pass : Outcome::Fail;
  v.detail = std::to_string(compared) + " instances, " + std::to_string(mismatches) + " mismatches, " + fmt(secs) +
             " s (limit 60 s)";
  return v;
}

Verdict lp_round_trip() {
  if (!pt::highs_available()) return {Outcome::Skip, "no external MILP solver (python3 highspy) found"};
  pt::TempDir dir;
  std::mt19937_64 rng(0x1B);
  pt::FuzzShape shape;
  shape.robots_lo = 2;
  shape.period_lo = 6;
  shape.period_hi = 10;
  int compared = 0, mismatches = 0;
  double worst = 0.0;
  while (compared < 20) {
    const Scenario s = pt::fuzz_scenario(rng, shape);
    if (!is_feasible(s)) continue;
    const std::string path = (dir / ("m" + std::to_string(compared) + ".lp")).string();
    write_text(path, export_lp(s));
    const auto lp = pt::solve_lp_file(path);
    const Rate exact = solve_exact(s).peak;
    const double err = lp.status == "optimal" ? std::abs(lp.objective - exact) : INFINITY;
    worst = std::max(worst, err);
    if (!(err <= 1e-6)) ++mismatches;
    ++compared;
  }
  return {mismatches == 0 ? Outcome::Pass : Outcome::Fail,
          std::to_string(compared) + " instances via HiGHS, max |objective - exact| = " + fmt(worst, 9)};
}

// PoPR of each method row against the random row of the same scenario.
struct SweepStats {
  std::map<std::pair<Cell, Method>, std::vector<double>> popr;  // proved rows only for exact
  std::map<Cell, std::size_t> exact_unproved;
  std::map<Cell, std::size_t> exact_total;
};

SweepStats sweep_stats(const std::vector<BenchRow>& rows) {
  std::map<std::tuple<int, int, int>, Rate> base;
  for (const BenchRow& r : rows)
    if (r.method == Method::Random) base[{r.robots, r.tasks, r.scenario_id}] = r.peak;
  SweepStats st;
  for (const BenchRow& r : rows) {
    const Cell c{r.robots, r.tasks};
    if (r.method == Method::Exact) {
      ++st.exact_total[c];
      if (!r.proved_optimal) {
        ++st.exact_unproved[c];
        continue;
      }
    }
    st.popr[{c, r.method}].push_back(popr(base.at({r.robots, r.tasks, r.scenario_id}), r.peak));
  }
  return st;
}

double mean(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

Verdict popr_at_six(const SweepStats& st) {
  const double target[] = {44.2, 51.1, 45.7};
  Verdict v;
  bool ok = true;
  for (int j = 1; j <= 3; ++j) {
    const Cell c{6, j};
    const auto it = st.popr.find({c, Method::Exact});
    const double m = it == st.popr.end() ? NAN : mean(it->second);
    const std::size_t unproved = st.exact_unproved.count(c) ? st.exact_unproved.at(c) : 0;
    const std::size_t total = st.exact_total.count(c) ? st.exact_total.at(c) : 0;
    const bool cell_ok = std::abs(m - target[j - 1]) <= 8.0 && total > 0 && unproved * 10 < total;
    ok = ok && cell_ok;
    v.detail += "J=" + std::to_string(j) + ": " + fmt(m) + "% (target " + fmt(target[j - 1], 1) + " +/- 8, " +
                std::to_string(unproved) + "/" + std::to_string(total) + " unproved)" + (j < 3 ? "; " : "");
  }
  v.outcome = ok ? Outcome::Pass : Outcome::Fail;
  return v;
}

Verdict aggregate_claims(const SweepStats& st, const std::vector<Cell>& cells) {
  std::vector<double> exact_all, rtwpa_all;
  double max_cell = -INFINITY;
  for (const Cell& c : cells) {
    const auto& e = st.popr.at({c, Method::Exact});
    const auto& r = st.popr.at({c, Method::Rtwpa});
    exact_all.insert(exact_all.end(), e.begin(), e.end());
    rtwpa_all.insert(rtwpa_all.end(), r.begin(), r.end());
    max_cell = std::max(max_cell, mean(e));
  }
  const double me = mean(exact_all), mr = mean(rtwpa_all);
  const bool ok = std::abs(me - 40.0) <= 10.0 && std::abs(mr - 30.0) <= 10.0 && max_cell >= 45.0;
  return {ok ? Outcome::Pass : Outcome::Fail, "exact " + fmt(me) + "% (40 +/- 10), rtwpa " + fmt(mr) +
                                                  "% (30 +/- 10), max cell-mean exact " + fmt(max_cell) +
                                                  "% (>= 45)"};
}

Verdict dominance_and_validity() {
  std::mt19937_64 rng(0xD0D0);
  int checked = 0, failures = 0;
  std::string first_failure;
  auto fail = [&](const std::string& what) {
    if (failures++ == 0) first_failure = what + " at instance " + std::to_string(checked);
  };
  while (checked < 1000) {
    GenParams p;
    p.robots = std::uniform_int_distribution<int>(1, 6)(rng);
    p.tasks_per_robot = std::uniform_int_distribution<int>(1, 3)(rng);
    p.period = std::uniform_int_distribution<int>(8, 15)(rng);
    p.gap_min = std::uniform_int_distribution<int>(0, 2)(rng);
    p.gap_max_range = {p.gap_min, p.gap_min + std::uniform_int_distribution<int>(0, 4)(rng)};
    p.continuous_rates = checked % 4 == 3;
    p.seed = rng();
    Scenario s;
    try {
      s = generate(p);
    } catch (const Error&) {
      continue;
    }
    const std::uint64_t seed = rng();
    const SolveReport exact = solve_exact(s);
    const SolveReport few = solve_rtwpa(s, {20, seed});
    const SolveReport many = solve_rtwpa(s, {200, seed});
    const SolveReport random = solve_random(s, seed);
    const SolveReport asap = solve_asap(s);
    for (const SolveReport* r : {&exact, &few, &many, &random, &asap})
      if (!validate_schedule(s, r->schedule).empty()) fail(std::string(to_string(r->method)) + " invalid");
    if (!exact.proved_optimal) fail("exact unproved");
    if (!peak_less_equal(exact.peak, many.peak)) fail("exact > rtwpa");
    if (!peak_less_equal(many.peak, few.peak)) fail("rtwpa(200) > rtwpa(20)");
    if (!peak_less_equal(exact.peak, random.peak) || !peak_less_equal(exact.peak, asap.peak)) fail("exact > baseline");
    if (!peak_less_equal(volume_lower_bound(s), exact.peak) || !peak_less_equal(max_rate(s), exact.peak))
      fail("exact below a lower bound");
    ++checked;
  }
  return {failures == 0 ? Outcome::Pass : Outcome::Fail,
          std::to_string(checked) + " feasible instances, " + std::to_string(failures) + " failures" +
              (failures ? " (first: " + first_failure + ")" : "")};
}

Verdict feasibility_characterization() {
  std::mt19937_64 rng(0xFEA5);
  pt::FuzzShape shape;
  shape.robots_hi = 3;
  shape.tasks_hi = 3;
  shape.period_lo = 3;
  shape.period_hi = 9;
  shape.gap_min_hi = 3;
  int feasible = 0, infeasible = 0, disagreements = 0;
  for (int k = 0; k < 500; ++k) {
    const Scenario s = pt::fuzz_scenario(rng, shape);
    bool oracle_found = true;
    try {
      brute_force_optimal(s);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Infeasible) throw;
      oracle_found = false;
    }
    bool rtwpa_infeasible = false;
    try {
      solve_rtwpa(s, {10, static_cast<std::uint64_t>(k)});
    } catch (const Error& e) {
      rtwpa_infeasible = e.kind() == ErrorKind::Infeasible;
    }
    const bool f = is_feasible(s);
    (f ? feasible : infeasible)++;
    if (f != oracle_found || rtwpa_infeasible == f) ++disagreements;
  }
  const bool ok = disagreements == 0 && feasible > 0 && infeasible > 0;
  return {ok ? Outcome::Pass : Outcome::Fail, std::to_string(feasible) + " feasible / " + std::to_string(infeasible) +
                                                  " infeasible, " + std::to_string(disagreements) + " disagreements"};
}

double spread(const TrafficProfile& p) {
  const auto [lo, hi] = std::minmax_element(p.per_slot.begin(), p.per_slot.end());
  return *hi - *lo;
}

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += std::log(x[k]);
    my += std::log(y[k]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (std::log(x[k]) - mx) * (std::log(y[k]) - my);
    sxx += (std::log(x[k]) - mx) * (std::log(x[k]) - mx);
  }
  return sxy / sxx;
}

Verdict steadiness_and_scaling() {
  BenchConfig config;
  int steadier = 0;
  const int n = 100;
  for (int s = 1; s <= n; ++s) {
    const Scenario sc = bench_scenario(config, {10, 3}, s);
    ExactOptions eo;
    eo.time_limit = Millis(120'000);
    const SolveReport exact = solve_exact(sc, eo);
    const SolveReport random = solve_random(sc, method_seed(config.master_seed, {10, 3}, s, Method::Random));
    if (peak_less_equal(spread(traffic_profile(sc, exact.schedule)), spread(traffic_profile(sc, random.schedule))))
      ++steadier;
  }

  // RTWPA runtime against N*I*J: best of three repetitions per point.
  std::vector<double> work, runtime;
  for (const Cell c : {Cell{4, 1}, Cell{6, 2}, Cell{10, 3}}) {
    const Scenario sc = bench_scenario(config, c, 1);
    for (std::uint64_t iters : {250ULL, 1000ULL, 4000ULL}) {
      double best = INFINITY;
      for (int rep = 0; rep < 3; ++rep) {
        const auto t0 = std::chrono::steady_clock::now();
        volatile Rate sink = solve_rtwpa(sc, {iters, 7}).peak;
        (void)sink;
        best = std::min(best, seconds_since(t0));
      }
      work.push_back(static_cast<double>(iters) * c.robots * c.tasks);
      runtime.push_back(best);
    }
  }
  const double slope = loglog_slope(work, runtime);
  const bool ok = steadier * 10 >= n * 9 && std::abs(slope - 1.0) <= 0.3;
  return {ok ? Outcome::Pass : Outcome::Fail, "exact spread <= random spread in " + std::to_string(steadier) + "/" +
                                                  std::to_string(n) + " (>= 90%), rtwpa log-log slope " +
                                                  fmt(slope, 3) + " (1.0 +/- 0.3)"};
}

Verdict cli_determinism() {
  pt::TempDir dir;
  const std::string cli = PEAKRATE_CLI;
  const std::vector<std::pair<std::string, std::vector<std::string>>> runs = {
      {"generate --robots 6 --tasks 2 --seed 99 --quiet --out {}/scenario.json", {"scenario.json"}},
      {"generate --robots 4 --tasks 3 --seed 5 --continuous-rates --quiet --out {}/cont.json", {"cont.json"}},
      {"generate --example welding_palletiser --quiet --out {}/ex.json", {"ex.json"}},
  };
  const std::vector<std::pair<std::string, std::vector<std::string>>> dependent = {
      {"solve --scenario {}/scenario.json --method exact --quiet --out {}/exact.json --profile-out {}/exact.csv",
       {"exact.json", "exact.csv"}},
      {"solve --scenario {}/scenario.json --method rtwpa --seed 3 --quiet --out {}/rtwpa.json", {"rtwpa.json"}},
      {"solve --scenario {}/cont.json --method random --seed 3 --quiet --out {}/random.json", {"random.json"}},
      {"solve --scenario {}/ex.json --method oracle --quiet --out {}/oracle.json", {"oracle.json"}},
      {"validate --scenario {}/scenario.json --schedule {}/rtwpa.json --quiet --profile-out {}/val.csv", {"val.csv"}},
      {"export-lp --scenario {}/scenario.json --quiet --out {}/model.lp", {"model.lp"}},
      {"bench --cells 2:1,6:2 --scenarios-per-cell 4 --seed 11 --iterations 100 --profiles 6:2:3 --no-timing "
       "--quiet --out-dir {}/bench",
       {"bench/rows.csv", "bench/summary.csv", "bench/profile_6_2_3.csv"}},
  };
  auto expand = [](std::string cmd, const std::string& root) {
    for (std::size_t pos; (pos = cmd.find("{}")) != std::string::npos;) cmd.replace(pos, 2, root);
    return cmd;
  };
  std::vector<std::string> files;
  for (const std::string run : {"a", "b"}) {
    const std::string root = (dir / run).string();
    std::filesystem::create_directories(root);
    for (const auto* group : {&runs, &dependent})
      for (const auto& [cmd, outs] : *group) {
        const auto r = pt::run_command(cli + " " + expand(cmd, root) + " 2>&1");
        if (r.exit_code != 0) return {Outcome::Fail, "command failed: " + cmd + ": " + r.out};
        if (run == "a") files.insert(files.end(), outs.begin(), outs.end());
      }
  }
  int differing = 0;
  for (const std::string& f : files)
    if (pt::slurp(dir / "a" / f) != pt::slurp(dir / "b" / f) || pt::slurp(dir / "a" / f).empty()) ++differing;
  return {differing == 0 ? Outcome::Pass : Outcome::Fail,
          std::to_string(files.size()) + " output files compared, " + std::to_string(differing) + " differ"};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const Verdict& v) {
    const char* tag = v.outcome == Outcome::Pass ? "PASS" : v.outcome == Outcome::Fail ? "FAIL" : "SKIP";
    if (v.outcome == Outcome::Fail) ++failures;
    std::cout << tag << " " << id << " " << name << ": " << v.detail << std::endl;
  };

  report(1, "oracle-equivalence", oracle_equivalence());
  report(2, "lp-round-trip", lp_round_trip());

  BenchConfig sweep;  // full default grid, 100 scenarios per cell, baseline random
  sweep.workers = std::max(1U, std::thread::hardware_concurrency());
  const auto t0 = std::chrono::steady_clock::now();
  const BenchResult result = run_experiment(sweep);
  std::cout << "     full sweep: " << result.rows.size() << " rows in " << fmt(seconds_since(t0), 1) << " s"
            << std::endl;
  const SweepStats st = sweep_stats(result.rows);
  report(3, "popr-at-six-robots", popr_at_six(st));
  report(4, "aggregate-popr", aggregate_claims(st, sweep.cells));

  report(5, "dominance-and-validity", dominance_and_validity());
  report(6, "feasibility-characterization", feasibility_characterization());
  report(7, "profile-steadiness-and-scaling", steadiness_and_scaling());
  report(8, "cli-determinism", cli_determinism());
  return failures == 0 ? 0 : 1;
}
