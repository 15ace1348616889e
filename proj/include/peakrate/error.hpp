#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace peakrate {

enum class ErrorKind {
  InvalidInput,      // malformed scenario, params, or file contents
  ShapeMismatch,     // schedule does not cover exactly the scenario's tasks
  WindowEmpty,       // earliest start exceeds latest start for some task
  Infeasible,        // no schedule satisfies the constraints
  CapExceeded,       // brute-force enumeration estimate above the cap
  Overflow,          // harmonized period above the configured cap
  DivisionByZero,    // PoPR against a zero baseline
  InfeasibleParams,  // generator could not draw a feasible scenario
  UnknownExample,
  MissingBaseline,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::WindowEmpty: return "WindowEmpty";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::InfeasibleParams: return "InfeasibleParams";
    case ErrorKind::UnknownExample: return "UnknownExample";
    case ErrorKind::MissingBaseline: return "MissingBaseline";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace peakrate
