#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "peakrate/error.hpp"
#include "peakrate/model.hpp"

namespace peakrate {

enum class Method { Exact, Rtwpa, Asap, Random, Oracle };

constexpr std::string_view to_string(Method m) {
  switch (m) {
    case Method::Exact: return "exact";
    case Method::Rtwpa: return "rtwpa";
    case Method::Asap: return "asap";
    case Method::Random: return "random";
    case Method::Oracle: return "oracle";
  }
  return "unknown";
}

inline Method parse_method(std::string_view name) {
  for (Method m : {Method::Exact, Method::Rtwpa, Method::Asap, Method::Random, Method::Oracle})
    if (to_string(m) == name) return m;
  throw Error(ErrorKind::InvalidInput, "unknown method '" + std::string(name) + "'");
}

using Millis = std::chrono::duration<double, std::milli>;

struct SolveReport {
  Schedule schedule;
  Rate peak = 0.0;
  Method method = Method::Exact;
  bool proved_optimal = false;
  Millis runtime{0};
  std::uint64_t nodes_explored = 0;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> iterations;
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  Millis elapsed() const { return std::chrono::steady_clock::now() - start_; }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace peakrate
