#pragma once

// Single entry point over every scheduling method.

#include <cstdint>
#include <optional>

#include "peakrate/baselines.hpp"
#include "peakrate/exact.hpp"
#include "peakrate/oracle.hpp"
#include "peakrate/rtwpa.hpp"

namespace peakrate {

struct SolveOptions {
  std::uint64_t iterations = 1000;  // rtwpa
  std::uint64_t seed = 0;           // rtwpa, random
  std::optional<Millis> time_limit;  // exact
  double oracle_cap = kDefaultOracleCap;
};

inline SolveReport solve(const Scenario& s, Method method, const SolveOptions& opt = {}) {
  switch (method) {
    case Method::Exact: {
      ExactOptions eo;
      eo.time_limit = opt.time_limit;
      return solve_exact(s, eo);
    }
    case Method::Rtwpa: return solve_rtwpa(s, RtwpaConfig{opt.iterations, opt.seed});
    case Method::Random: return solve_random(s, opt.seed);
    case Method::Asap: return solve_asap(s);
    case Method::Oracle: {
      const Stopwatch clock;
      OracleResult o = brute_force_optimal(s, opt.oracle_cap);
      SolveReport r;
      r.method = Method::Oracle;
      r.schedule = std::move(o.best_schedule);
      r.peak = o.best_peak;
      r.proved_optimal = true;
      r.nodes_explored = o.schedules_enumerated;
      r.runtime = clock.elapsed();
      return r;
    }
  }
  throw Error(ErrorKind::InvalidInput, "unhandled method");
}

}  // namespace peakrate
