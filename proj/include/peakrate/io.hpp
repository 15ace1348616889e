#pragma once

// File formats.
//
// Scenario (JSON):
//   { "period": 15,
//     "robots": [ { "tasks": [ { "rate": 3.0, "duration": 2, "gap_min": 1, "gap_max": 4 } ] } ] }
// "gap_max" may be omitted (unbounded). A robot may carry "cycle": C when its
// chain is a concatenation of period/C replicas (see harmonize_periods).
//
// Schedule (JSON): { "starts": [[1, 6, 11], [2, 7, 12]] }, 1-based slots,
// outer index robot, inner index task.
//
// Profile (CSV): header "slot,aggregate_rate", one row per slot 1..T.

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>

#include "json.hpp"
#include "peakrate/model.hpp"

namespace peakrate {

using nlohmann::json;

// Shortest decimal text that round-trips the double.
inline std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

namespace detail {

[[noreturn]] inline void bad_input(const std::string& msg) { throw Error(ErrorKind::InvalidInput, msg); }

inline const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) bad_input(where + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) bad_input(where + ": missing \"" + key + "\"");
  return *it;
}

inline int require_int(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number_integer()) bad_input(where + ": \"" + key + "\" must be an integer");
  return v.get<int>();
}

inline void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || item.key() == k;
    if (!known) bad_input(where + ": unknown key \"" + item.key() + "\"");
  }
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad_input("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    bad_input(where + ": " + e.what());
  }
}

}  // namespace detail

inline Scenario scenario_from_json(const json& doc) {
  Scenario s;
  detail::reject_unknown_keys(doc, {"period", "robots"}, "scenario");
  s.period = detail::require_int(doc, "period", "scenario");
  const json& robots = detail::require(doc, "robots", "scenario");
  if (!robots.is_array()) detail::bad_input("scenario: \"robots\" must be an array");
  for (std::size_t i = 0; i < robots.size(); ++i) {
    const std::string where = "robot " + std::to_string(i);
    const json& r = robots[i];
    detail::reject_unknown_keys(r, {"tasks", "cycle"}, where);
    Robot robot;
    if (r.contains("cycle")) robot.cycle = detail::require_int(r, "cycle", where);
    const json& tasks = detail::require(r, "tasks", where);
    if (!tasks.is_array()) detail::bad_input(where + ": \"tasks\" must be an array");
    for (std::size_t j = 0; j < tasks.size(); ++j) {
      const std::string at = where + " task " + std::to_string(j);
      const json& t = tasks[j];
      detail::reject_unknown_keys(t, {"rate", "duration", "gap_min", "gap_max"}, at);
      TaskSpec spec;
      const json& rate = detail::require(t, "rate", at);
      if (!rate.is_number()) detail::bad_input(at + ": \"rate\" must be a number");
      spec.rate = rate.get<double>();
      spec.duration = detail::require_int(t, "duration", at);
      spec.gap_min = detail::require_int(t, "gap_min", at);
      if (t.contains("gap_max") && !t["gap_max"].is_null()) spec.gap_max = detail::require_int(t, "gap_max", at);
      robot.tasks.push_back(spec);
    }
    s.robots.push_back(std::move(robot));
  }
  validate_scenario(s);
  return s;
}

inline json scenario_to_json(const Scenario& s) {
  json robots = json::array();
  for (const Robot& r : s.robots) {
    json tasks = json::array();
    for (const TaskSpec& t : r.tasks) {
      json task = {{"rate", t.rate}, {"duration", t.duration}, {"gap_min", t.gap_min}};
      if (t.gap_max) task["gap_max"] = *t.gap_max;
      tasks.push_back(std::move(task));
    }
    json robot = {{"tasks", std::move(tasks)}};
    if (r.cycle) robot["cycle"] = *r.cycle;
    robots.push_back(std::move(robot));
  }
  return {{"period", s.period}, {"robots", std::move(robots)}};
}

inline Schedule schedule_from_json(const json& doc) {
  detail::reject_unknown_keys(doc, {"starts"}, "schedule");
  const json& starts = detail::require(doc, "starts", "schedule");
  if (!starts.is_array()) detail::bad_input("schedule: \"starts\" must be an array");
  Schedule sched;
  for (const json& row : starts) {
    if (!row.is_array()) detail::bad_input("schedule: each robot's starts must be an array");
    std::vector<Slot> slots;
    for (const json& v : row) {
      if (!v.is_number_integer()) detail::bad_input("schedule: start slots must be integers");
      slots.push_back(v.get<Slot>());
    }
    sched.starts.push_back(std::move(slots));
  }
  return sched;
}

inline json schedule_to_json(const Schedule& s) { return {{"starts", s.starts}}; }

inline Scenario read_scenario(const std::string& path) {
  return scenario_from_json(detail::parse_json(detail::read_text(path), path));
}

inline Schedule read_schedule(const std::string& path) {
  return schedule_from_json(detail::parse_json(detail::read_text(path), path));
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::InvalidInput, "write failed for " + path);
}

inline std::string scenario_text(const Scenario& s) { return scenario_to_json(s).dump(2) + "\n"; }
inline std::string schedule_text(const Schedule& s) { return schedule_to_json(s).dump() + "\n"; }

inline std::string profile_csv(const TrafficProfile& p) {
  std::string out = "slot,aggregate_rate\n";
  for (std::size_t t = 0; t < p.per_slot.size(); ++t)
    out += std::to_string(t + 1) + "," + format_number(p.per_slot[t]) + "\n";
  return out;
}

}  // namespace peakrate
