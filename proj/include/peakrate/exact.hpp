#pragma once

// Exact minimizer of the peak aggregate rate.
//
// Each robot's chain is one decision variable whose domain is the list of all
// start vectors reachable through its windows (its "placements"). The search
// looks for a schedule strictly below the incumbent peak:
//
//   * the incumbent is warm-started by RTWPA and tightened on every leaf;
//   * after each assignment every unassigned robot's domain is filtered to
//     placements that fit under the limit on top of the current load;
//   * the compulsory part of each unassigned robot (slots every remaining
//     placement occupies) is added to the load and checked against the limit;
//   * the next robot is the one with the fewest remaining placements
//     (heavier traffic first on ties), and its placements are tried by
//     ascending resulting partial peak, then enumeration order;
//   * the search stops early once the incumbent meets the lower bound.
//
// When a robot has too many placements to tabulate, a plain task-by-task
// depth-first search over windows with incumbent pruning is used instead.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <vector>

#include "peakrate/model.hpp"
#include "peakrate/report.hpp"
#include "peakrate/rtwpa.hpp"

namespace peakrate {

struct IncumbentEvent {
  Rate peak = 0.0;
  std::uint64_t nodes = 0;
  Millis elapsed{0};
};

struct ExactOptions {
  std::optional<Millis> time_limit;
  std::function<void(const IncumbentEvent&)> on_incumbent;
  std::uint64_t warm_start_iterations = 100;
  std::uint64_t warm_start_seed = 0x5EED;
  std::size_t max_placements = 2'000'000;  // across all robots; beyond this the task-level search is used
};

inline Rate volume_lower_bound(const Scenario& s) {
  return std::max(max_rate(s), total_volume(s) / static_cast<double>(s.period));
}

namespace detail {

// Lower bound used to stop the search. With integer rates every peak is an
// integer, so the fractional volume bound rounds up.
inline Rate stopping_bound(const Scenario& s) {
  const Rate lb = volume_lower_bound(s);
  return integer_rates(s) ? std::ceil(lb - peak_tolerance(lb)) : lb;
}

struct PlacementTable {
  std::size_t tasks = 0;
  std::vector<Slot> starts;  // placement p occupies starts[p*tasks .. p*tasks+tasks)

  std::size_t size() const { return tasks == 0 ? 0 : starts.size() / tasks; }
  const Slot* placement(std::size_t p) const { return starts.data() + p * tasks; }
};

// Enumerates a chain's placements in lexicographic order. Returns false if
// more than `budget` placements exist.
inline bool enumerate_placements(const RobotChain& chain, std::size_t budget, PlacementTable& out) {
  out.tasks = chain.size();
  out.starts.clear();
  std::vector<Slot> current(chain.size());
  std::size_t count = 0;
  bool within = true;
  std::function<void(std::size_t, Slot)> rec = [&](std::size_t j, Slot finish_prev) {
    if (!within) return;
    if (j == chain.size()) {
      if (++count > budget) {
        within = false;
        return;
      }
      out.starts.insert(out.starts.end(), current.begin(), current.end());
      return;
    }
    const TimeWindow w = window_for(chain[j], finish_prev);
    for (Slot s = w.es; s <= w.ls && within; ++s) {
      current[j] = s;
      rec(j + 1, finish_slot(s, chain[j].duration));
    }
  };
  rec(0, 0);
  return within;
}

class ExactSearchBase {
 protected:
  ExactSearchBase(const Scenario& s, const ExactOptions& opt)
      : scenario_(s), options_(opt), chains_(build_chains(s)), bound_(stopping_bound(s)),
        integral_(integer_rates(s)), total_volume_(total_volume(s)) {}

  bool out_of_time() {
    if (aborted_) return true;
    if (options_.time_limit && clock_.elapsed() >= *options_.time_limit) aborted_ = true;
    return aborted_;
  }

  bool at_bound() const { return peak_less_equal(incumbent_peak_, bound_); }

  // Strictly-better threshold: a candidate load must stay below this.
  Rate limit() const { return incumbent_peak_ - peak_tolerance(incumbent_peak_); }

  // Largest per-slot load an improving schedule may have.
  Rate capacity() const { return integral_ ? incumbent_peak_ - 1.0 : limit(); }

  void set_incumbent(Rate peak, const Schedule& schedule) {
    incumbent_peak_ = peak;
    incumbent_ = schedule;
    if (options_.on_incumbent) options_.on_incumbent({peak, nodes_, clock_.elapsed()});
  }

  const Scenario& scenario_;
  const ExactOptions& options_;
  std::vector<RobotChain> chains_;
  Rate bound_;
  bool integral_;
  Rate total_volume_;
  Stopwatch clock_;
  bool aborted_ = false;
  std::uint64_t nodes_ = 0;
  Rate incumbent_peak_ = 0.0;
  Schedule incumbent_;
};

class PlacementSearch : private ExactSearchBase {
 public:
  PlacementSearch(const Scenario& s, const ExactOptions& opt, std::vector<PlacementTable> tables)
      : ExactSearchBase(s, opt), tables_(std::move(tables)) {
    const std::size_t n = chains_.size();
    const auto slots = static_cast<std::size_t>(s.period);
    load_.assign(slots, 0.0);
    compulsory_.assign(slots, 0.0);
    reachable_.assign(slots, 0.0);
    robot_reach_.assign(slots, 0.0);
    assigned_.assign(n, kUnassigned);
    volume_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (const ChainStep& st : chains_[i]) volume_[i] += st.rate * st.duration;
    levels_.resize(n + 1, std::vector<std::vector<std::uint32_t>>(n));
    for (std::size_t i = 0; i < n; ++i) {
      levels_[0][i].resize(tables_[i].size());
      std::iota(levels_[0][i].begin(), levels_[0][i].end(), 0U);
    }
  }

  SolveReport run(Rate warm_peak, const Schedule& warm) {
    bound_ = std::max(bound_, root_bound());
    set_incumbent(warm_peak, warm);
    if (!at_bound()) descend(0);
    return finish();
  }

 private:
  static constexpr std::uint32_t kUnassigned = 0xFFFFFFFFU;

  // Peak floor from the full domains: the heaviest compulsory slot, and the
  // smallest level c with sum_t min(c, reachable_t) >= total volume.
  Rate root_bound() {
    std::fill(compulsory_.begin(), compulsory_.end(), 0.0);
    std::fill(reachable_.begin(), reachable_.end(), 0.0);
    for (std::size_t i = 0; i < chains_.size(); ++i) accumulate_spans(i, levels_[0][i]);
    Rate floor = *std::max_element(compulsory_.begin(), compulsory_.end());
    std::vector<Rate> reach = reachable_;
    std::sort(reach.begin(), reach.end());
    // Water-filling: slots below the level contribute their full reach.
    Rate below = 0.0;
    Rate level = 0.0;
    for (std::size_t k = 0; k < reach.size(); ++k) {
      const auto above = static_cast<double>(reach.size() - k);
      level = (total_volume_ - below) / above;
      if (level <= reach[k]) break;
      below += reach[k];
    }
    if (integral_) level = std::ceil(level - peak_tolerance(level));
    return std::max(floor, level);
  }

  SolveReport finish() {
    SolveReport r;
    r.method = Method::Exact;
    r.schedule = incumbent_;
    r.peak = traffic_profile(scenario_, incumbent_).peak;
    r.proved_optimal = !aborted_;
    r.nodes_explored = nodes_;
    return r;
  }

  bool fits(std::size_t robot, std::uint32_t p, Rate lim) const {
    const Slot* st = tables_[robot].placement(p);
    const RobotChain& chain = chains_[robot];
    for (std::size_t j = 0; j < chain.size(); ++j) {
      const Rate rate = chain[j].rate;
      for (Slot t = st[j], f = finish_slot(st[j], chain[j].duration); t <= f; ++t)
        if (!(load_[static_cast<std::size_t>(t - 1)] + rate < lim)) return false;
    }
    return true;
  }

  Rate resulting_peak(std::size_t robot, std::uint32_t p) const {
    Rate peak = 0.0;
    const Slot* st = tables_[robot].placement(p);
    const RobotChain& chain = chains_[robot];
    for (std::size_t j = 0; j < chain.size(); ++j)
      for (Slot t = st[j], f = finish_slot(st[j], chain[j].duration); t <= f; ++t)
        peak = std::max(peak, load_[static_cast<std::size_t>(t - 1)] + chain[j].rate);
    return peak;
  }

  void apply(std::size_t robot, std::uint32_t p, double sign) {
    const Slot* st = tables_[robot].placement(p);
    const RobotChain& chain = chains_[robot];
    for (std::size_t j = 0; j < chain.size(); ++j)
      for (Slot t = st[j], f = finish_slot(st[j], chain[j].duration); t <= f; ++t)
        load_[static_cast<std::size_t>(t - 1)] += sign * chain[j].rate;
  }

  // Filters the next level's domains, then checks two necessary conditions
  // for beating the incumbent:
  //   * load plus every unassigned robot's compulsory part stays below the
  //     limit in every slot;
  //   * the total volume still fits when each slot is filled to at most
  //     min(capacity, load + most any unassigned robot could add there).
  bool propagate(std::size_t depth) {
    const Rate lim = limit();
    const auto& cur = levels_[depth];
    auto& next = levels_[depth + 1];
    std::fill(compulsory_.begin(), compulsory_.end(), 0.0);
    std::fill(reachable_.begin(), reachable_.end(), 0.0);
    for (std::size_t i = 0; i < chains_.size(); ++i) {
      if (assigned_[i] != kUnassigned) continue;
      auto& dom = next[i];
      dom.clear();
      for (std::uint32_t p : cur[i])
        if (fits(i, p, lim)) dom.push_back(p);
      if (dom.empty()) return false;
      accumulate_spans(i, dom);
    }
    const Rate cap = capacity();
    Rate room = 0.0;
    for (std::size_t t = 0; t < load_.size(); ++t) {
      if (compulsory_[t] > 0.0 && !(load_[t] + compulsory_[t] < lim)) return false;
      room += std::min(cap, load_[t] + reachable_[t]);
    }
    return room >= total_volume_ - peak_tolerance(total_volume_);
  }

  // Adds robot i's compulsory part and per-slot reachable rate given its
  // remaining placements. Task j surely covers [latest start, earliest
  // finish] and can only touch [earliest start, latest finish].
  void accumulate_spans(std::size_t i, const std::vector<std::uint32_t>& dom) {
    const PlacementTable& table = tables_[i];
    std::fill(robot_reach_.begin(), robot_reach_.end(), 0.0);
    for (std::size_t j = 0; j < chains_[i].size(); ++j) {
      Slot lo = table.placement(dom.front())[j];
      Slot hi = lo;
      for (std::uint32_t p : dom) {
        const Slot s = table.placement(p)[j];
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
      const int d = chains_[i][j].duration;
      const Rate rate = chains_[i][j].rate;
      for (Slot t = hi, f = finish_slot(lo, d); t <= f; ++t) compulsory_[static_cast<std::size_t>(t - 1)] += rate;
      for (Slot t = lo, f = finish_slot(hi, d); t <= f; ++t) {
        Rate& cell = robot_reach_[static_cast<std::size_t>(t - 1)];
        cell = std::max(cell, rate);
      }
    }
    for (std::size_t t = 0; t < reachable_.size(); ++t) reachable_[t] += robot_reach_[t];
  }

  void descend(std::size_t depth) {
    const auto& domains = levels_[depth];
    std::size_t pick = chains_.size();
    for (std::size_t i = 0; i < chains_.size(); ++i) {
      if (assigned_[i] != kUnassigned) continue;
      if (pick == chains_.size() || domains[i].size() < domains[pick].size() ||
          (domains[i].size() == domains[pick].size() && volume_[i] > volume_[pick]))
        pick = i;
    }
    if (pick == chains_.size()) {
      leaf();
      return;
    }

    struct Candidate {
      Rate peak;
      std::uint32_t placement;
    };
    std::vector<Candidate> order;
    order.reserve(domains[pick].size());
    for (std::uint32_t p : domains[pick]) order.push_back({resulting_peak(pick, p), p});
    std::stable_sort(order.begin(), order.end(), [](const Candidate& a, const Candidate& b) {
      return a.peak < b.peak;
    });

    for (const Candidate& c : order) {
      if (out_of_time() || at_bound()) return;
      // Candidates are sorted by resulting peak, and the incumbent may have
      // improved since this domain was filtered.
      if (!(c.peak < limit())) break;
      ++nodes_;
      assigned_[pick] = c.placement;
      apply(pick, c.placement, 1.0);
      if (propagate(depth)) descend(depth + 1);
      apply(pick, c.placement, -1.0);
      assigned_[pick] = kUnassigned;
    }
  }

  void leaf() {
    Schedule s;
    s.starts.resize(chains_.size());
    for (std::size_t i = 0; i < chains_.size(); ++i) {
      const Slot* st = tables_[i].placement(assigned_[i]);
      s.starts[i].assign(st, st + chains_[i].size());
    }
    set_incumbent(traffic_profile(scenario_, s).peak, s);
  }

  std::vector<PlacementTable> tables_;
  std::vector<Rate> load_;
  std::vector<Rate> compulsory_;
  std::vector<Rate> reachable_;
  std::vector<Rate> robot_reach_;
  std::vector<std::uint32_t> assigned_;
  std::vector<Rate> volume_;
  std::vector<std::vector<std::vector<std::uint32_t>>> levels_;  // [depth][robot] -> filtered domain
};

// Task-by-task search for chains too long to tabulate. Robots are taken in
// descending traffic volume, tasks in chain order, and start slots by
// ascending resulting partial peak.
class TaskSearch : private ExactSearchBase {
 public:
  TaskSearch(const Scenario& s, const ExactOptions& opt)
      : ExactSearchBase(s, opt), load_(static_cast<std::size_t>(s.period), 0.0), current_(shaped_schedule(s)) {
    order_.resize(chains_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::vector<Rate> vol(chains_.size(), 0.0);
    for (std::size_t i = 0; i < chains_.size(); ++i)
      for (const ChainStep& st : chains_[i]) vol[i] += st.rate * st.duration;
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return vol[a] > vol[b]; });
  }

  SolveReport run(Rate warm_peak, const Schedule& warm) {
    set_incumbent(warm_peak, warm);
    if (!at_bound()) descend(0, 0, 0);
    SolveReport r;
    r.method = Method::Exact;
    r.schedule = incumbent_;
    r.peak = traffic_profile(scenario_, incumbent_).peak;
    r.proved_optimal = !aborted_;
    r.nodes_explored = nodes_;
    return r;
  }

 private:
  void descend(std::size_t k, std::size_t task, Slot finish_prev) {
    if (k == order_.size()) {
      set_incumbent(traffic_profile(scenario_, current_).peak, current_);
      return;
    }
    const std::size_t robot = order_[k];
    if (task == chains_[robot].size()) {
      descend(k + 1, 0, 0);
      return;
    }
    const ChainStep& step = chains_[robot][task];
    const TimeWindow w = window_for(step, finish_prev);
    std::vector<std::pair<Rate, Slot>> cand;
    for (Slot s = w.es; s <= w.ls; ++s) {
      Rate peak = 0.0;
      for (Slot t = s; t <= finish_slot(s, step.duration); ++t)
        peak = std::max(peak, load_[static_cast<std::size_t>(t - 1)] + step.rate);
      cand.emplace_back(peak, s);
    }
    std::stable_sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [peak, s] : cand) {
      if (out_of_time() || at_bound()) return;
      if (!(peak < limit())) break;
      ++nodes_;
      const Slot f = finish_slot(s, step.duration);
      for (Slot t = s; t <= f; ++t) load_[static_cast<std::size_t>(t - 1)] += step.rate;
      current_.starts[robot][task] = s;
      descend(k, task + 1, f);
      for (Slot t = s; t <= f; ++t) load_[static_cast<std::size_t>(t - 1)] -= step.rate;
    }
  }

  std::vector<Rate> load_;
  Schedule current_;
  std::vector<std::size_t> order_;
};

}  // namespace detail

inline SolveReport solve_exact(const Scenario& s, const ExactOptions& options = {}) {
  validate_scenario(s);
  if (!is_feasible(s)) throw Error(ErrorKind::Infeasible, "some robot's chain does not fit in the period");
  const Stopwatch clock;
  const SolveReport warm = solve_rtwpa(s, RtwpaConfig{options.warm_start_iterations, options.warm_start_seed});

  std::vector<detail::PlacementTable> tables(s.robots.size());
  std::size_t budget = options.max_placements;
  bool tabulated = true;
  for (std::size_t i = 0; i < s.robots.size() && tabulated; ++i) {
    tabulated = detail::enumerate_placements(build_chain(s, i), budget, tables[i]);
    budget -= std::min(budget, tables[i].size());
  }

  SolveReport report = tabulated ? detail::PlacementSearch(s, options, std::move(tables)).run(warm.peak, warm.schedule)
                                 : detail::TaskSearch(s, options).run(warm.peak, warm.schedule);
  report.runtime = clock.elapsed();
  return report;
}

}  // namespace peakrate
