#pragma once

#include <cstdint>
#include <vector>

#include "gridplan/solver/model.hpp"

namespace gridplan::solver {

// Variable status in a basis. Indices cover structurals then slacks.
enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper, FreeZero };

struct Basis {
  int n_vars = 0;                     // structural count the indices refer to
  std::vector<int> basic;             // size m: extended index per basis slot
  std::vector<VarStatus> status;      // size n + m
  bool empty() const { return basic.empty(); }
};

struct SimplexOptions {
  double feas_tol = 1e-7;    // accepted bound/row violation at termination
  double opt_tol = 1e-9;     // reduced-cost threshold
  double pivot_tol = 1e-8;   // smallest acceptable pivot magnitude
  int refactor_interval = 120;
  long max_iters = 0;        // 0 = automatic (scales with model size)
};

struct LpResult {
  SolveStatus status = SolveStatus::LimitHit;
  double objective = 0.0;
  std::vector<double> x;        // structural primal values
  std::vector<double> y;        // row duals, sign = d(objective)/d(rhs)
  std::vector<double> redcost;  // structural reduced costs
  long iterations = 0;
};

// Bounded-variable primal revised simplex with an explicit, periodically
// refactorized basis inverse. Phase I minimizes total bound infeasibility of
// the basic solution (long-step ratio test, basics may cross bounds);
// Phase II minimizes the model objective. Deterministic: identical inputs
// take identical pivot sequences.
class SimplexSolver {
 public:
  explicit SimplexSolver(SimplexOptions opt = {}) : opt_(opt) {}

  // lb/ub overrides (size n) replace the model bounds when given; `warm`
  // seeds the starting basis (extended with slacks for rows it predates).
  LpResult solve(const OptModel& m, const double* lb_override = nullptr,
                 const double* ub_override = nullptr, const Basis* warm = nullptr,
                 Basis* basis_out = nullptr) const;

 private:
  SimplexOptions opt_;
};

}  // namespace gridplan::solver
