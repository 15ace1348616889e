// peakrate: command-line front end.
//
// Exit codes: 0 success, 1 other failure, 2 invalid input (parse error,
// unknown flag, shape mismatch, schedule violations), 3 infeasible scenario,
// 4 exact solve stopped by its time limit under --require-optimal.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "peakrate/bench.hpp"
#include "peakrate/generator.hpp"
#include "peakrate/io.hpp"
#include "peakrate/lp_export.hpp"
#include "peakrate/solve.hpp"

namespace {

using namespace peakrate;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNotProved = 4;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput:
    case ErrorKind::ShapeMismatch:
    case ErrorKind::UnknownExample:
      return kExitInvalid;
    case ErrorKind::Infeasible:
    case ErrorKind::WindowEmpty:
    case ErrorKind::InfeasibleParams:
      return kExitInfeasible;
    default:
      return kExitFailure;
  }
}

// "2:1,4:3" -> cells
std::vector<Cell> parse_cells(const std::string& text) {
  std::vector<Cell> cells;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    Cell c;
    char colon = 0;
    std::stringstream one(item);
    if (!(one >> c.robots >> colon >> c.tasks) || colon != ':' || !one.eof() || c.robots < 1 || c.tasks < 1)
      throw Error(ErrorKind::InvalidInput, "bad cell '" + item + "', expected I:J");
    cells.push_back(c);
  }
  if (cells.empty()) throw Error(ErrorKind::InvalidInput, "no cells given");
  return cells;
}

std::vector<ProfileRequest> parse_profile_requests(const std::string& text) {
  std::vector<ProfileRequest> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    ProfileRequest r;
    char c1 = 0;
    char c2 = 0;
    std::stringstream one(item);
    if (!(one >> r.cell.robots >> c1 >> r.cell.tasks >> c2 >> r.scenario_id) || c1 != ':' || c2 != ':' || !one.eof())
      throw Error(ErrorKind::InvalidInput, "bad profile request '" + item + "', expected I:J:S");
    out.push_back(r);
  }
  return out;
}

std::vector<Method> parse_methods(const std::string& text) {
  std::vector<Method> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_method(item));
  if (out.empty()) throw Error(ErrorKind::InvalidInput, "no methods given");
  return out;
}

std::string summary_line(const SolveReport& r) {
  std::string line = "method=" + std::string(to_string(r.method)) + " peak=" + format_number(r.peak) +
                     " proved_optimal=" + (r.proved_optimal ? "true" : "false") +
                     " runtime_ms=" + format_number(r.runtime.count()) + " nodes=" + std::to_string(r.nodes_explored);
  if (r.seed) line += " seed=" + std::to_string(*r.seed);
  if (r.iterations) line += " iterations=" + std::to_string(*r.iterations);
  return line;
}

struct GenerateArgs {
  int robots = 0;
  int tasks = 0;
  int period = 15;
  std::uint64_t seed = 0;
  bool continuous = false;
  std::string example;
  std::string out;
};

struct SolveArgs {
  std::string scenario;
  std::string method = "exact";
  double time_limit = 0.0;
  std::uint64_t iterations = 1000;
  std::uint64_t seed = 0;
  double cap = kDefaultOracleCap;
  std::string out;
  std::string profile_out;
  bool require_optimal = false;
};

struct ValidateArgs {
  std::string scenario;
  std::string schedule;
  std::string profile_out;
};

struct ExportArgs {
  std::string scenario;
  std::string out;
};

struct BenchArgs {
  std::string cells;
  int scenarios = 100;
  std::string methods = "exact,rtwpa,random";
  std::string baseline = "random";
  std::uint64_t seed = 0;
  double exact_time_limit = 120.0;
  std::uint64_t iterations = 1000;
  unsigned workers = 1;
  std::string profiles;
  bool no_timing = false;
  std::string out_dir;
};

int run_generate(const GenerateArgs& a, bool quiet) {
  Scenario s;
  if (!a.example.empty()) {
    s = bundled_example(a.example);
  } else {
    if (a.robots < 1 || a.tasks < 1) throw Error(ErrorKind::InvalidInput, "--robots and --tasks are required");
    GenParams p;
    p.robots = a.robots;
    p.tasks_per_robot = a.tasks;
    p.period = a.period;
    p.seed = a.seed;
    p.continuous_rates = a.continuous;
    s = generate(p);
  }
  const std::string text = scenario_text(s);
  if (a.out.empty()) {
    std::cout << text;
  } else {
    write_text(a.out, text);
    if (!quiet)
      std::cout << "robots=" << s.robots.size() << " tasks=" << s.task_count() << " period=" << s.period
                << " out=" << a.out << "\n";
  }
  return kExitOk;
}

int run_solve(const SolveArgs& a, bool quiet) {
  const Scenario s = read_scenario(a.scenario);
  SolveOptions opt;
  opt.iterations = a.iterations;
  opt.seed = a.seed;
  opt.oracle_cap = a.cap;
  if (a.time_limit > 0) opt.time_limit = Millis(a.time_limit * 1000.0);
  const SolveReport r = solve(s, parse_method(a.method), opt);
  if (!a.out.empty()) write_text(a.out, schedule_text(r.schedule));
  if (!a.profile_out.empty()) write_text(a.profile_out, profile_csv(traffic_profile(s, r.schedule)));
  if (!quiet) std::cout << summary_line(r) << "\n";
  if (a.require_optimal && !r.proved_optimal) {
    std::cerr << "no optimality proof within the time limit\n";
    return kExitNotProved;
  }
  return kExitOk;
}

int run_validate(const ValidateArgs& a, bool quiet) {
  const Scenario s = read_scenario(a.scenario);
  const Schedule sched = read_schedule(a.schedule);
  const auto violations = validate_schedule(s, sched);
  const TrafficProfile profile = traffic_profile(s, sched);
  if (!a.profile_out.empty()) write_text(a.profile_out, profile_csv(profile));
  for (const Violation& v : violations)
    std::cout << "violation robot=" << v.robot + 1 << " task=" << v.task + 1 << " rule=" << to_string(v.rule)
              << " detail=\"" << v.detail << "\"\n";
  if (!violations.empty()) return kExitInvalid;
  if (!quiet) std::cout << "valid=true peak=" << format_number(profile.peak) << "\n";
  return kExitOk;
}

int run_export(const ExportArgs& a, bool quiet) {
  const Scenario s = read_scenario(a.scenario);
  write_text(a.out, export_lp(s));
  if (!quiet) std::cout << "variables=" << lp_variable_count(s) << " out=" << a.out << "\n";
  return kExitOk;
}

int run_bench(const BenchArgs& a, bool quiet) {
  BenchConfig config;
  if (!a.cells.empty()) config.cells = parse_cells(a.cells);
  config.scenarios_per_cell = a.scenarios;
  config.methods = parse_methods(a.methods);
  config.baseline = parse_method(a.baseline);
  config.master_seed = a.seed;
  config.exact_time_limit = a.exact_time_limit > 0 ? std::optional<Millis>(Millis(a.exact_time_limit * 1000.0))
                                                   : std::nullopt;
  config.rtwpa_iterations = a.iterations;
  config.workers = a.workers;
  if (!a.profiles.empty()) config.profiles = parse_profile_requests(a.profiles);
  if (std::find(config.methods.begin(), config.methods.end(), config.baseline) == config.methods.end())
    throw Error(ErrorKind::InvalidInput, "baseline method must be among --methods");
  if (!quiet)
    config.progress = [](std::size_t done, std::size_t total) {
      if (done % 50 == 0 || done == total) std::cerr << "\r" << done << "/" << total << std::flush;
      if (done == total) std::cerr << "\n";
    };

  const BenchResult result = run_experiment(config);
  const auto summary = summarize(result.rows, config.baseline);

  const std::filesystem::path dir(a.out_dir);
  std::filesystem::create_directories(dir);
  const bool timing = !a.no_timing;
  write_text((dir / "rows.csv").string(), rows_csv(result.rows, timing));
  write_text((dir / "summary.csv").string(), summary_csv(summary, timing));
  for (const ProfileDump& p : result.profiles) {
    const std::string name = "profile_" + std::to_string(p.request.cell.robots) + "_" +
                             std::to_string(p.request.cell.tasks) + "_" + std::to_string(p.request.scenario_id) +
                             ".csv";
    write_text((dir / name).string(), p.csv);
  }
  if (!quiet)
    for (const SummaryRow& r : summary)
      std::cout << "robots=" << r.robots << " tasks=" << r.tasks << " method=" << to_string(r.method)
                << " mean_peak=" << format_number(r.mean_peak) << " mean_popr=" << format_number(r.mean_popr)
                << " unproved=" << r.unproved << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Peak-rate scheduling of periodic robot traffic"};
  app.require_subcommand(1);
  bool quiet = false;

  GenerateArgs gen;
  auto* generate_cmd = app.add_subcommand("generate", "Generate a random or bundled scenario");
  generate_cmd->add_option("--robots", gen.robots, "Number of robots");
  generate_cmd->add_option("--tasks", gen.tasks, "Tasks per robot");
  generate_cmd->add_option("--period", gen.period, "Period T in slots")->capture_default_str();
  generate_cmd->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  generate_cmd->add_flag("--continuous-rates", gen.continuous, "Draw real-valued rates");
  generate_cmd->add_option("--example", gen.example, "Bundled example name (welding_palletiser)");
  generate_cmd->add_option("--out", gen.out, "Scenario file to write (stdout if omitted)");
  generate_cmd->add_flag("--quiet", quiet);

  SolveArgs sol;
  auto* solve_cmd = app.add_subcommand("solve", "Schedule a scenario");
  solve_cmd->add_option("--scenario", sol.scenario, "Scenario file")->required();
  solve_cmd->add_option("--method", sol.method, "exact | rtwpa | random | asap | oracle")->capture_default_str();
  solve_cmd->add_option("--time-limit", sol.time_limit, "Exact solver limit in seconds (0 = none)");
  solve_cmd->add_option("--iterations", sol.iterations, "RTWPA passes")->capture_default_str();
  solve_cmd->add_option("--seed", sol.seed, "Seed for rtwpa/random")->capture_default_str();
  solve_cmd->add_option("--cap", sol.cap, "Oracle enumeration cap");
  solve_cmd->add_option("--out", sol.out, "Schedule file to write");
  solve_cmd->add_option("--profile-out", sol.profile_out, "Per-slot profile CSV to write");
  solve_cmd->add_flag("--require-optimal", sol.require_optimal, "Exit 4 without an optimality proof");
  solve_cmd->add_flag("--quiet", quiet);

  ValidateArgs val;
  auto* validate_cmd = app.add_subcommand("validate", "Check a schedule against a scenario");
  validate_cmd->add_option("--scenario", val.scenario, "Scenario file")->required();
  validate_cmd->add_option("--schedule", val.schedule, "Schedule file")->required();
  validate_cmd->add_option("--profile-out", val.profile_out, "Per-slot profile CSV to write");
  validate_cmd->add_flag("--quiet", quiet);

  ExportArgs exp;
  auto* export_cmd = app.add_subcommand("export-lp", "Write the integer program in LP format");
  export_cmd->add_option("--scenario", exp.scenario, "Scenario file")->required();
  export_cmd->add_option("--out", exp.out, "LP file to write")->required();
  export_cmd->add_flag("--quiet", quiet);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run an experiment sweep");
  bench_cmd->add_option("--cells", bench.cells, "Comma-separated I:J cells (default: full grid)");
  bench_cmd->add_option("--scenarios-per-cell", bench.scenarios, "Scenarios per cell")->capture_default_str();
  bench_cmd->add_option("--methods", bench.methods, "Comma-separated methods")->capture_default_str();
  bench_cmd->add_option("--baseline", bench.baseline, "PoPR baseline method")->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Master seed")->capture_default_str();
  bench_cmd->add_option("--exact-time-limit", bench.exact_time_limit, "Seconds per exact solve (0 = none)")
      ->capture_default_str();
  bench_cmd->add_option("--iterations", bench.iterations, "RTWPA passes")->capture_default_str();
  bench_cmd->add_option("--workers", bench.workers, "Worker threads")->capture_default_str();
  bench_cmd->add_option("--profiles", bench.profiles, "Comma-separated I:J:S instances to dump");
  bench_cmd->add_flag("--no-timing", bench.no_timing, "Write runtimes as 0 for byte-stable output");
  bench_cmd->add_option("--out-dir", bench.out_dir, "Output directory")->required();
  bench_cmd->add_flag("--quiet", quiet);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (generate_cmd->parsed()) return run_generate(gen, quiet);
    if (solve_cmd->parsed()) return run_solve(sol, quiet);
    if (validate_cmd->parsed()) return run_validate(val, quiet);
    if (export_cmd->parsed()) return run_export(exp, quiet);
    if (bench_cmd->parsed()) return run_bench(bench, quiet);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
