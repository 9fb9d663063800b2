#include "gridplan/solver/backend.hpp"

#include <chrono>
#include <fstream>
#include <stdexcept>

#include "gridplan/solver/mip.hpp"

namespace gridplan::solver {
namespace {

void reject_if_malformed(const OptModel& model) {
  auto errs = model.validate();
  if (!errs.empty()) {
    std::string msg = "malformed model:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw std::invalid_argument(msg);
  }
}

}  // namespace

SolveOutcome solve_lp(const OptModel& model) {
  reject_if_malformed(model);
  if (model.has_integrality())
    throw std::invalid_argument("solve_lp: model contains integral variables");

  const auto t0 = std::chrono::steady_clock::now();
  SimplexSolver solver;
  LpResult r = solver.solve(model);

  SolveOutcome out;
  out.status = r.status;
  out.iterations = r.iterations;
  if (r.status == SolveStatus::Optimal) {
    out.objective = r.objective;
    out.x = std::move(r.x);
    out.row_dual = std::move(r.y);
  }
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

SolveOutcome solve_mip(const OptModel& model, double gap_tol, double time_limit_s) {
  reject_if_malformed(model);
  if (!model.has_integrality())
    throw std::invalid_argument("solve_mip: model has no integral variables");

  MipOptions opt;
  opt.gap_tol = gap_tol;
  opt.time_limit_s = time_limit_s;
  return solve_branch_and_bound(model, opt);
}

void dump_model(const OptModel& model, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("dump_model: cannot open " + path);
  write_lp_format(model, os);
}

}  // namespace gridplan::solver
