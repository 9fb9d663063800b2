#pragma once

#include "gridplan/solver/model.hpp"
#include "gridplan/solver/simplex.hpp"

namespace gridplan::solver {

struct MipOptions {
  double gap_tol = 1e-4;        // relative incumbent/bound gap at termination
  double time_limit_s = 600.0;
  double int_tol = kIntTol;
  long max_nodes = 200000;
  SimplexOptions lp;
};

// Best-bound branch and bound over the bounded-simplex LP relaxation.
// Deterministic given identical inputs (node ids break heap ties).
SolveOutcome solve_branch_and_bound(const OptModel& model, const MipOptions& opt);

}  // namespace gridplan::solver
