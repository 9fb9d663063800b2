#pragma once

#include "gridplan/solver/model.hpp"
#include "gridplan/solver/simplex.hpp"

namespace gridplan::solver {

// Owns a model that grows rows and changes bounds/objective/rhs between
// solves; re-solves warm from the last basis (new rows enter with their slack
// basic).
class IncrementalLp {
 public:
  explicit IncrementalLp(SimplexOptions opt = {}) : solver_(opt) {}

  OptModel model;

  LpResult solve() {
    LpResult r = solver_.solve(model, nullptr, nullptr, has_basis_ ? &basis_ : nullptr, &basis_);
    has_basis_ = r.status == SolveStatus::Optimal || r.status == SolveStatus::Infeasible;
    return r;
  }

  void reset_basis() { has_basis_ = false; }

 private:
  SimplexSolver solver_;
  Basis basis_;
  bool has_basis_ = false;
};

}  // namespace gridplan::solver
