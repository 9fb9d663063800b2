#pragma once

#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace gridplan::solver {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Artifact-wide numerical tolerances.
inline constexpr double kFeasTol = 1e-6;
inline constexpr double kDualTol = 1e-6;
inline constexpr double kIntTol = 1e-6;

enum class RowSense { LessEqual, Equal, GreaterEqual };

struct Variable {
  std::string name;
  double lb = 0.0;
  double ub = kInf;
  bool integral = false;
  double obj = 0.0;
};

struct Constraint {
  std::string name;
  // (variable index, coefficient), indices into OptModel::vars.
  std::vector<std::pair<int, double>> terms;
  RowSense sense = RowSense::LessEqual;
  double rhs = 0.0;
};

// A linear or mixed-integer linear model, always minimizing.
struct OptModel {
  std::vector<Variable> vars;
  std::vector<Constraint> rows;

  int add_var(std::string name, double lb, double ub, double obj, bool integral = false) {
    vars.push_back({std::move(name), lb, ub, integral, obj});
    return static_cast<int>(vars.size()) - 1;
  }
  int add_row(std::string name, std::vector<std::pair<int, double>> terms, RowSense sense,
              double rhs) {
    rows.push_back({std::move(name), std::move(terms), sense, rhs});
    return static_cast<int>(rows.size()) - 1;
  }

  bool has_integrality() const {
    for (const auto& v : vars)
      if (v.integral) return true;
    return false;
  }

  // Returns a list of structural defects (bad bounds, dangling indices, ...).
  // Empty means well-formed.
  std::vector<std::string> validate() const;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, LimitHit };

const char* to_string(SolveStatus s);

struct SolveOutcome {
  SolveStatus status = SolveStatus::LimitHit;
  double objective = 0.0;
  std::vector<double> x;         // primal values, empty if none available
  std::vector<double> row_dual;  // per-row shadow prices (continuous solves only)
  double best_bound = -kInf;     // integer solves
  double rel_gap = kInf;         // integer solves
  double wall_seconds = 0.0;
  long iterations = 0;

  bool has_primal() const { return !x.empty(); }
};

// Writes the model in LP text format for external inspection.
void write_lp_format(const OptModel& m, std::ostream& os);

}  // namespace gridplan::solver
