#pragma once

#include <string>

#include "gridplan/solver/model.hpp"
#include "gridplan/solver/simplex.hpp"

namespace gridplan::solver {

// Solves a purely continuous model. Optimal outcomes carry primal values and
// row duals (shadow prices, d objective / d rhs). Infeasible and unbounded
// come back as statuses, never as exceptions; a malformed model throws
// std::invalid_argument before any solve is attempted.
SolveOutcome solve_lp(const OptModel& model);

// Solves a model with at least one integral variable to the given relative
// gap, subject to the wall-clock limit. On limit-hit the best incumbent and
// bound found so far are reported; without an incumbent the primal vector
// stays empty.
SolveOutcome solve_mip(const OptModel& model, double gap_tol, double time_limit_s);

// Debug dump in LP text format.
void dump_model(const OptModel& model, const std::string& path);

}  // namespace gridplan::solver
