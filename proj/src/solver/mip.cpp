#include "gridplan/solver/mip.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <queue>
#include <stdexcept>
#include <vector>

namespace gridplan::solver {
namespace {

using Clock = std::chrono::steady_clock;

struct Node {
  long id = 0;
  double bound = -kInf;  // parent LP objective, lower bound on the subtree
  std::vector<double> lb, ub;
  std::shared_ptr<Basis> warm;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.id > b.id;
  }
};

int pick_branch_var(const OptModel& m, const std::vector<double>& x, double int_tol) {
  int best = -1;
  double best_frac = int_tol;
  for (int j = 0; j < static_cast<int>(m.vars.size()); ++j) {
    if (!m.vars[j].integral) continue;
    const double f = x[j] - std::floor(x[j]);
    const double dist = std::min(f, 1.0 - f);
    if (dist > best_frac) {
      best_frac = dist;
      best = j;
    }
  }
  return best;
}

}  // namespace

SolveOutcome solve_branch_and_bound(const OptModel& model, const MipOptions& opt) {
  const auto t0 = Clock::now();
  const int n = static_cast<int>(model.vars.size());
  SimplexSolver lp(opt.lp);

  SolveOutcome out;
  out.best_bound = -kInf;
  auto elapsed = [&]() {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  };

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long next_id = 0;

  Node root;
  root.id = next_id++;
  root.lb.resize(n);
  root.ub.resize(n);
  for (int j = 0; j < n; ++j) {
    root.lb[j] = model.vars[j].lb;
    root.ub[j] = model.vars[j].ub;
    if (model.vars[j].integral) {
      // Tighten integer boxes to their integral hull.
      if (root.lb[j] > -kInf) root.lb[j] = std::ceil(root.lb[j] - opt.int_tol);
      if (root.ub[j] < kInf) root.ub[j] = std::floor(root.ub[j] + opt.int_tol);
      if (root.lb[j] > root.ub[j]) {
        out.status = SolveStatus::Infeasible;
        out.wall_seconds = elapsed();
        return out;
      }
    }
  }
  open.push(std::move(root));

  bool have_incumbent = false;
  double incumbent_obj = kInf;
  std::vector<double> incumbent_x;
  long nodes = 0;
  bool hit_limit = false;

  while (!open.empty()) {
    if (elapsed() > opt.time_limit_s || nodes >= opt.max_nodes) {
      hit_limit = true;
      break;
    }
    Node node = open.top();
    open.pop();
    if (have_incumbent && node.bound >= incumbent_obj - 1e-12) continue;

    ++nodes;
    auto child_warm = std::make_shared<Basis>();
    LpResult r = lp.solve(model, node.lb.data(), node.ub.data(), node.warm.get(),
                          child_warm.get());
    out.iterations += r.iterations;
    if (r.status == SolveStatus::Unbounded) {
      // Unbounded relaxation at the root means the MIP itself is unbounded.
      out.status = SolveStatus::Unbounded;
      out.wall_seconds = elapsed();
      return out;
    }
    if (r.status == SolveStatus::LimitHit)
      throw std::runtime_error("branch-and-bound: LP iteration limit hit");
    if (r.status == SolveStatus::Infeasible) continue;
    if (have_incumbent && r.objective >= incumbent_obj - 1e-12) continue;

    const int bv = pick_branch_var(model, r.x, opt.int_tol);
    if (bv < 0) {
      // Integral: snap and record.
      for (int j = 0; j < n; ++j)
        if (model.vars[j].integral) r.x[j] = std::round(r.x[j]);
      if (!have_incumbent || r.objective < incumbent_obj) {
        have_incumbent = true;
        incumbent_obj = r.objective;
        incumbent_x = r.x;
      }
      continue;
    }

    const double xv = r.x[bv];
    Node down, up;
    down.id = next_id++;
    down.bound = r.objective;
    down.lb = node.lb;
    down.ub = node.ub;
    down.ub[bv] = std::floor(xv);
    down.warm = child_warm;
    up.id = next_id++;
    up.bound = r.objective;
    up.lb = node.lb;
    up.ub = node.ub;
    up.lb[bv] = std::ceil(xv);
    up.warm = child_warm;
    if (down.lb[bv] <= down.ub[bv]) open.push(std::move(down));
    if (up.lb[bv] <= up.ub[bv]) open.push(std::move(up));

    if (have_incumbent) {
      double global_bound = incumbent_obj;
      if (!open.empty()) global_bound = std::min(global_bound, open.top().bound);
      const double gap = (incumbent_obj - global_bound) / std::max(1e-10, std::fabs(incumbent_obj));
      if (gap <= opt.gap_tol) break;
    }
  }

  out.wall_seconds = elapsed();
  double global_bound = have_incumbent ? incumbent_obj : kInf;
  if (!open.empty()) global_bound = std::min(global_bound, open.top().bound);
  if (hit_limit && !have_incumbent && open.empty()) global_bound = -kInf;

  if (have_incumbent) {
    out.objective = incumbent_obj;
    out.x = std::move(incumbent_x);
    out.best_bound = open.empty() && !hit_limit ? incumbent_obj : global_bound;
    out.rel_gap =
        (incumbent_obj - out.best_bound) / std::max(1e-10, std::fabs(incumbent_obj));
    if (out.rel_gap < 0) out.rel_gap = 0;
    out.status = (!hit_limit || out.rel_gap <= opt.gap_tol) ? SolveStatus::Optimal
                                                            : SolveStatus::LimitHit;
  } else if (hit_limit) {
    out.status = SolveStatus::LimitHit;
    out.best_bound = global_bound;
  } else {
    out.status = SolveStatus::Infeasible;
  }
  return out;
}

}  // namespace gridplan::solver
