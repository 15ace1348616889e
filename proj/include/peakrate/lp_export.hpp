#pragma once

// Writes the time-indexed min-peak model in CPLEX LP text format.
//
// Variables: x_i_j_t = 1 iff task (i,j) starts in slot t; y_i_j_t = 1 iff it
// occupies slot t; z = peak. Indices are 1-based. Rows:
//   peak_t       sum_ij r_ij y_i_j_t - z <= 0
//   gapmin_i_j   sum_t t x_i_j+1_t - sum_t (t + d_ij) x_i_j_t >= g^min_ij
//   gapmax_i_j   same expression <= g^max_ij (bounded gaps only)
//   end_i_j      sum_t (t + d_ij - 1) x_i_j_t <= T - g^min_ij (last task of a chain or cycle)
//   release_i_j  sum_t t x_i_j_t >= cycle start (replicas after the first)
//   link_i_j_t_u y_i_j_u - x_i_j_t >= 0 for u in [t, min(t + d_ij - 1, T)]
//   assign_i_j   sum_t x_i_j_t = 1
//   dur_i_j      sum_t y_i_j_t = d_ij
// Lines are wrapped before 255 characters.

#include <string>

#include "peakrate/io.hpp"
#include "peakrate/model.hpp"

namespace peakrate {

namespace detail {

class LpWriter {
 public:
  static constexpr std::size_t kMaxLine = 255;

  void raw(const std::string& line) {
    flush_line();
    out_ += line;
    out_ += '\n';
  }

  void begin(const std::string& label) {
    flush_line();
    line_ = " " + label + ":";
    first_term_ = true;
  }

  void term(double coef, const std::string& var) {
    if (coef == 0.0) return;
    std::string piece;
    if (coef < 0) {
      piece = " - ";
      coef = -coef;
    } else {
      piece = first_term_ ? " " : " + ";
    }
    if (coef != 1.0) piece += format_number(coef) + " ";
    piece += var;
    append(piece);
    first_term_ = false;
  }

  void end(const std::string& sense, double rhs) {
    if (first_term_) append(" 0 z");
    append(" " + sense + " " + format_number(rhs));
    flush_line();
  }

  void word(const std::string& w) { append(" " + w); }

  std::string take() {
    flush_line();
    return std::move(out_);
  }

 private:
  void append(const std::string& piece) {
    if (line_.size() + piece.size() > kMaxLine - 1) {
      flush_line();
      line_ = "  ";
    }
    line_ += piece;
  }

  void flush_line() {
    if (line_.empty()) return;
    out_ += line_;
    out_ += '\n';
    line_.clear();
  }

  std::string out_;
  std::string line_;
  bool first_term_ = true;
};

inline std::string lp_var(char kind, std::size_t i, std::size_t j, Slot t) {
  return std::string(1, kind) + "_" + std::to_string(i + 1) + "_" + std::to_string(j + 1) + "_" + std::to_string(t);
}

inline std::string lp_label(const char* stem, std::size_t i, std::size_t j) {
  return std::string(stem) + "_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
}

}  // namespace detail

inline std::size_t lp_variable_count(const Scenario& s) {
  return 2 * s.task_count() * static_cast<std::size_t>(s.period) + 1;
}

inline std::string export_lp(const Scenario& s) {
  using detail::lp_label;
  using detail::lp_var;
  const Slot T = s.period;
  detail::LpWriter w;
  w.raw("\\ min-peak robot traffic schedule: " + std::to_string(s.robots.size()) + " robots, " +
        std::to_string(s.task_count()) + " tasks, period " + std::to_string(T));
  w.raw("Minimize");
  w.begin("obj");
  w.term(1.0, "z");
  w.raw("Subject To");

  for (Slot t = 1; t <= T; ++t) {
    w.begin("peak_" + std::to_string(t));
    for (std::size_t i = 0; i < s.robots.size(); ++i)
      for (std::size_t j = 0; j < s.robots[i].tasks.size(); ++j) w.term(s.robots[i].tasks[j].rate, lp_var('y', i, j, t));
    w.term(-1.0, "z");
    w.end("<=", 0);
  }

  for (std::size_t i = 0; i < s.robots.size(); ++i) {
    const auto& tasks = s.robots[i].tasks;
    for (std::size_t j = 0; j < tasks.size(); ++j) {
      const CycleSpan span = cycle_span(s, i, j);
      const int d = tasks[j].duration;
      const bool chained = j + 1 < tasks.size() && !cycle_span(s, i, j + 1).first_in_cycle;
      auto gap_expr = [&] {
        for (Slot t = 1; t <= T; ++t) w.term(t, lp_var('x', i, j + 1, t));
        for (Slot t = 1; t <= T; ++t) w.term(-(t + d), lp_var('x', i, j, t));
      };
      if (chained) {
        w.begin(lp_label("gapmin", i, j));
        gap_expr();
        w.end(">=", tasks[j].gap_min);
        if (tasks[j].gap_max) {
          w.begin(lp_label("gapmax", i, j));
          gap_expr();
          w.end("<=", *tasks[j].gap_max);
        }
      }
      if (span.last_in_cycle) {
        w.begin(lp_label("end", i, j));
        for (Slot t = 1; t <= T; ++t) w.term(t + d - 1, lp_var('x', i, j, t));
        w.end("<=", span.hi - tasks[j].gap_min);
      }
      if (span.first_in_cycle && span.lo > 1) {
        w.begin(lp_label("release", i, j));
        for (Slot t = 1; t <= T; ++t) w.term(t, lp_var('x', i, j, t));
        w.end(">=", span.lo);
      }
    }
  }

  for (std::size_t i = 0; i < s.robots.size(); ++i) {
    const auto& tasks = s.robots[i].tasks;
    for (std::size_t j = 0; j < tasks.size(); ++j) {
      for (Slot t = 1; t <= T; ++t) {
        for (Slot u = t; u <= std::min(t + tasks[j].duration - 1, T); ++u) {
          w.begin(lp_label("link", i, j) + "_" + std::to_string(t) + "_" + std::to_string(u));
          w.term(1.0, lp_var('y', i, j, u));
          w.term(-1.0, lp_var('x', i, j, t));
          w.end(">=", 0);
        }
      }
      w.begin(lp_label("assign", i, j));
      for (Slot t = 1; t <= T; ++t) w.term(1.0, lp_var('x', i, j, t));
      w.end("=", 1);
      w.begin(lp_label("dur", i, j));
      for (Slot t = 1; t <= T; ++t) w.term(1.0, lp_var('y', i, j, t));
      w.end("=", tasks[j].duration);
    }
  }

  w.raw("Bounds");
  w.raw(" z >= 0");
  w.raw("Binary");
  for (std::size_t i = 0; i < s.robots.size(); ++i)
    for (std::size_t j = 0; j < s.robots[i].tasks.size(); ++j)
      for (char kind : {'x', 'y'})
        for (Slot t = 1; t <= T; ++t) w.word(lp_var(kind, i, j, t));
  w.raw("End");
  return w.take();
}

}  // namespace peakrate
