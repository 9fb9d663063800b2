#include "gridplan/solver/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gridplan/linalg/dense.hpp"
#include "gridplan/simd/kernels.hpp"

namespace gridplan::solver {
namespace {

constexpr double kEpsActive = 1e-9;   // bound-violation classification
constexpr double kEpsDegen = 1e-10;   // step length considered degenerate
constexpr double kEpsTie = 1e-9;      // ratio-test tie window

struct SparseCol {
  std::vector<std::pair<int, double>> nz;  // (row, coefficient)
};

// All mutable state of one solve.
struct Work {
  const SimplexOptions& opt;
  int n = 0;  // structurals
  int m = 0;  // rows (= slacks)
  int total = 0;

  std::vector<SparseCol> cols;  // size total
  std::vector<double> lb, ub, cost, rhs;
  std::vector<VarStatus> status;   // size total
  std::vector<int> basic;          // size m
  std::vector<int> basic_pos;      // size total, -1 if nonbasic
  linalg::DenseMatrix inv_basis;   // m x m
  std::vector<double> x_basic;     // size m
  std::vector<double> y;           // size m, duals of the current phase
  std::vector<double> alpha;       // size m, pivot column in the tableau
  std::vector<double> scratch;     // size m

  long iters = 0;
  int pivots_since_refactor = 0;
  long degen_run = 0;
  bool bland = false;
  long bland_left = 0;

  explicit Work(const SimplexOptions& o) : opt(o) {}

  double nb_value(int j) const {
    switch (status[j]) {
      case VarStatus::AtLower: return lb[j];
      case VarStatus::AtUpper: return ub[j];
      default: return 0.0;
    }
  }

  void refactor() {
    linalg::DenseMatrix b_mat(m, m, 0.0);
    for (int slot = 0; slot < m; ++slot)
      for (const auto& [r, v] : cols[basic[slot]].nz) b_mat.at(r, slot) = v;
    linalg::LuFactor lu(std::move(b_mat));
    lu.invert_into(inv_basis);
    recompute_x_basic();
    pivots_since_refactor = 0;
  }

  void recompute_x_basic() {
    std::vector<double> b_adj = rhs;
    for (int j = 0; j < total; ++j) {
      if (basic_pos[j] >= 0) continue;
      const double v = nb_value(j);
      if (v == 0.0) continue;
      for (const auto& [r, c] : cols[j].nz) b_adj[r] -= c * v;
    }
    for (int i = 0; i < m; ++i) x_basic[i] = simd::dot(inv_basis.row(i), b_adj.data(), m);
  }

  // Phase classification of basic values: -1 below lower, +1 above upper.
  int violation_side(int slot, double eps) const {
    const int j = basic[slot];
    const double x = x_basic[slot];
    if (x < lb[j] - eps) return -1;
    if (x > ub[j] + eps) return +1;
    return 0;
  }

  double max_violation() const {
    double worst = 0.0;
    for (int i = 0; i < m; ++i) {
      const int j = basic[i];
      worst = std::max(worst, lb[j] - x_basic[i]);
      worst = std::max(worst, x_basic[i] - ub[j]);
    }
    return worst;
  }

  void compute_duals(int phase) {
    std::fill(y.begin(), y.end(), 0.0);
    for (int i = 0; i < m; ++i) {
      double c;
      if (phase == 1) {
        c = static_cast<double>(violation_side(i, kEpsActive));
      } else {
        c = cost[basic[i]];
      }
      if (c != 0.0) simd::axpy(c, inv_basis.row(i), y.data(), m);
    }
  }

  double reduced_cost(int j, int phase) const {
    double d = (phase == 2) ? cost[j] : 0.0;
    for (const auto& [r, v] : cols[j].nz) d -= y[r] * v;
    return d;
  }

  void compute_alpha(int q) {
    std::fill(alpha.begin(), alpha.end(), 0.0);
    for (const auto& [r, v] : cols[q].nz)
      for (int i = 0; i < m; ++i) alpha[i] += inv_basis.row(i)[r] * v;
  }

  void update_inverse(int r) {
    const double piv = alpha[r];
    double* row_r = inv_basis.row(r);
    for (int i = 0; i < m; ++i) {
      if (i == r) continue;
      const double f = alpha[i] / piv;
      if (f != 0.0) simd::axpy(-f, row_r, inv_basis.row(i), m);
    }
    simd::scale(1.0 / piv, row_r, m);
    ++pivots_since_refactor;
  }
};

struct Candidate {
  int j = -1;
  int dir = 0;  // +1 entering increases, -1 decreases
  double d = 0.0;
};

Candidate price(const Work& w, int phase) {
  Candidate best;
  double best_score = w.opt.opt_tol;
  for (int j = 0; j < w.total; ++j) {
    if (w.basic_pos[j] >= 0) continue;
    if (w.ub[j] - w.lb[j] <= 0.0) continue;  // fixed
    const double d = w.reduced_cost(j, phase);
    int dir = 0;
    switch (w.status[j]) {
      case VarStatus::AtLower:
        if (d < -w.opt.opt_tol) dir = +1;
        break;
      case VarStatus::AtUpper:
        if (d > w.opt.opt_tol) dir = -1;
        break;
      case VarStatus::FreeZero:
        if (d < -w.opt.opt_tol) dir = +1;
        else if (d > w.opt.opt_tol) dir = -1;
        break;
      default:
        break;
    }
    if (dir == 0) continue;
    if (w.bland) return {j, dir, d};  // first eligible index
    const double score = std::fabs(d);
    if (score > best_score) {
      best_score = score;
      best = {j, dir, d};
    }
  }
  return best;
}

struct RatioOutcome {
  bool unbounded = false;
  bool flip = false;
  int leave_slot = -1;
  bool leave_at_upper = false;
  double step = 0.0;
};

// Phase-II ratio test: basics stay inside their bounds.
RatioOutcome ratio_phase2(const Work& w, const Candidate& cand) {
  RatioOutcome out;
  double t_min = kInf;
  for (int i = 0; i < w.m; ++i) {
    const double delta = cand.dir * w.alpha[i];
    if (std::fabs(delta) <= 1e-11) continue;
    const int bj = w.basic[i];
    double t;
    if (delta > 0) {
      if (w.lb[bj] == -kInf) continue;
      t = (w.x_basic[i] - w.lb[bj]) / delta;
    } else {
      if (w.ub[bj] == kInf) continue;
      t = (w.ub[bj] - w.x_basic[i]) / (-delta);
    }
    if (t < 0.0) t = 0.0;
    if (t < t_min) t_min = t;
  }
  // Tie resolution: largest pivot magnitude within the window.
  if (t_min < kInf) {
    double best_piv = 0.0;
    for (int i = 0; i < w.m; ++i) {
      const double delta = cand.dir * w.alpha[i];
      if (std::fabs(delta) <= 1e-11) continue;
      const int bj = w.basic[i];
      double t;
      bool to_upper;
      if (delta > 0) {
        if (w.lb[bj] == -kInf) continue;
        t = (w.x_basic[i] - w.lb[bj]) / delta;
        to_upper = false;
      } else {
        if (w.ub[bj] == kInf) continue;
        t = (w.ub[bj] - w.x_basic[i]) / (-delta);
        to_upper = true;
      }
      if (t < 0.0) t = 0.0;
      if (t > t_min + kEpsTie) continue;
      const double piv = std::fabs(w.alpha[i]);
      const bool better = w.bland ? (out.leave_slot < 0 || i < out.leave_slot) : (piv > best_piv);
      if (better) {
        best_piv = piv;
        out.leave_slot = i;
        out.leave_at_upper = to_upper;
        out.step = t;
      }
    }
  }
  const double own_range = w.ub[cand.j] - w.lb[cand.j];
  if (own_range < (out.leave_slot >= 0 ? out.step : kInf) - 1e-12) {
    out.flip = true;
    out.leave_slot = -1;
    out.step = own_range;
    return out;
  }
  if (out.leave_slot < 0 && !(own_range < kInf)) out.unbounded = true;
  return out;
}

// Phase-I ratio test: long-step walk across bound-crossing breakpoints while
// the total infeasibility keeps decreasing.
RatioOutcome ratio_phase1(Work& w, const Candidate& cand) {
  struct Event {
    double t;
    double slope_add;
    int slot;       // -1 = entering bound flip
    bool at_upper;  // bound reached by the basic
  };
  std::vector<Event> events;
  events.reserve(static_cast<std::size_t>(w.m) + 1);

  for (int i = 0; i < w.m; ++i) {
    const double delta = cand.dir * w.alpha[i];
    if (std::fabs(delta) <= 1e-11) continue;
    const int bj = w.basic[i];
    const double x = w.x_basic[i];
    const double lo = w.lb[bj], hi = w.ub[bj];
    const int side = w.violation_side(i, kEpsActive);
    if (side < 0) {
      if (delta < 0) {  // moving up toward/through the violated lower bound
        events.push_back({(lo - x) / (-delta), -delta, i, false});
        if (hi < kInf) events.push_back({(hi - x) / (-delta), -delta, i, true});
      }
    } else if (side > 0) {
      if (delta > 0) {
        events.push_back({(x - hi) / delta, delta, i, true});
        if (lo > -kInf) events.push_back({(x - lo) / delta, delta, i, false});
      }
    } else {
      if (delta > 0 && lo > -kInf) {
        events.push_back({std::max(0.0, (x - lo) / delta), delta, i, false});
      } else if (delta < 0 && hi < kInf) {
        events.push_back({std::max(0.0, (hi - x) / (-delta)), -delta, i, true});
      }
    }
  }
  const double own_range = w.ub[cand.j] - w.lb[cand.j];
  if (own_range < kInf) events.push_back({own_range, kInf, -1, false});

  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.t != b.t) return a.t < b.t;
    return a.slot < b.slot;
  });

  double slope = cand.dir * cand.d;  // < 0 by eligibility
  RatioOutcome out;
  std::size_t stop = events.size();
  for (std::size_t k = 0; k < events.size(); ++k) {
    slope += events[k].slope_add;
    if (slope >= -1e-10) {
      stop = k;
      break;
    }
  }
  if (stop == events.size())
    throw std::runtime_error("simplex: phase-1 ratio test found no blocking bound");

  const Event& stop_ev = events[stop];
  if (stop_ev.slot < 0) {
    out.flip = true;
    out.step = stop_ev.t;
    return out;
  }
  // Among breakpoints in the stop window pick the stablest pivot.
  out.step = stop_ev.t;
  double best_piv = -1.0;
  for (std::size_t k = 0; k <= stop; ++k) {
    const Event& e = events[k];
    if (e.slot < 0 || e.t < out.step - kEpsTie) continue;
    const double piv = std::fabs(w.alpha[e.slot]);
    const bool better = w.bland ? (out.leave_slot < 0 || e.slot < out.leave_slot) : (piv > best_piv);
    if (better) {
      best_piv = piv;
      out.leave_slot = e.slot;
      out.leave_at_upper = e.at_upper;
    }
  }
  return out;
}

}  // namespace

LpResult SimplexSolver::solve(const OptModel& model, const double* lb_override,
                              const double* ub_override, const Basis* warm,
                              Basis* basis_out) const {
  Work w(opt_);
  w.n = static_cast<int>(model.vars.size());
  w.m = static_cast<int>(model.rows.size());
  w.total = w.n + w.m;

  w.cols.resize(w.total);
  w.lb.resize(w.total);
  w.ub.resize(w.total);
  w.cost.assign(w.total, 0.0);
  w.rhs.resize(w.m);
  for (int j = 0; j < w.n; ++j) {
    const auto& v = model.vars[j];
    w.lb[j] = lb_override != nullptr ? lb_override[j] : v.lb;
    w.ub[j] = ub_override != nullptr ? ub_override[j] : v.ub;
    w.cost[j] = v.obj;
    if (w.lb[j] > w.ub[j])
      throw std::invalid_argument("simplex: variable '" + v.name + "' has lb > ub");
  }
  for (int i = 0; i < w.m; ++i) {
    const auto& row = model.rows[i];
    w.rhs[i] = row.rhs;
    for (const auto& [j, c] : row.terms) {
      if (j < 0 || j >= w.n)
        throw std::invalid_argument("simplex: row '" + row.name + "' references bad variable");
      if (c != 0.0) w.cols[j].nz.emplace_back(i, c);
    }
    const int sj = w.n + i;
    w.cols[sj].nz.emplace_back(i, 1.0);
    switch (row.sense) {
      case RowSense::LessEqual: w.lb[sj] = 0.0; w.ub[sj] = kInf; break;
      case RowSense::Equal: w.lb[sj] = 0.0; w.ub[sj] = 0.0; break;
      case RowSense::GreaterEqual: w.lb[sj] = -kInf; w.ub[sj] = 0.0; break;
    }
  }

  auto default_status = [&](int j) {
    if (w.lb[j] > -kInf) return VarStatus::AtLower;
    if (w.ub[j] < kInf) return VarStatus::AtUpper;
    return VarStatus::FreeZero;
  };

  // Starting basis: warm basis when usable, else the slack basis.
  w.status.assign(w.total, VarStatus::FreeZero);
  w.basic.assign(w.m, -1);
  w.basic_pos.assign(w.total, -1);
  bool warm_ok = false;
  if (warm != nullptr && !warm->empty() && warm->n_vars <= w.n &&
      static_cast<int>(warm->basic.size()) <= w.m) {
    const int n_old = warm->n_vars;
    const int m_old = static_cast<int>(warm->basic.size());
    warm_ok = true;
    for (int j = 0; j < w.total; ++j) w.status[j] = default_status(j);
    for (int j = 0; j < n_old; ++j) w.status[j] = warm->status[j];
    for (int i = 0; i < m_old; ++i)
      w.status[w.n + i] = warm->status[static_cast<std::size_t>(n_old) + i];
    int slot = 0;
    for (int i = 0; i < m_old && warm_ok; ++i) {
      int j = warm->basic[i];
      if (j >= n_old) j = w.n + (j - n_old);  // remap old slack index
      if (j < 0 || j >= w.total || w.basic_pos[j] >= 0) {
        warm_ok = false;
        break;
      }
      w.basic[slot] = j;
      w.basic_pos[j] = slot;
      w.status[j] = VarStatus::Basic;
      ++slot;
    }
    // New rows enter with their slack basic.
    for (int i = m_old; i < w.m && warm_ok; ++i) {
      const int sj = w.n + i;
      w.basic[slot] = sj;
      w.basic_pos[sj] = slot;
      w.status[sj] = VarStatus::Basic;
      ++slot;
    }
    if (warm_ok && slot != w.m) warm_ok = false;
    // Nonbasic statuses must be consistent with finite bounds.
    for (int j = 0; j < w.total && warm_ok; ++j) {
      if (w.basic_pos[j] >= 0) continue;
      if (w.status[j] == VarStatus::Basic) w.status[j] = default_status(j);
      if (w.status[j] == VarStatus::AtLower && w.lb[j] == -kInf) w.status[j] = default_status(j);
      if (w.status[j] == VarStatus::AtUpper && w.ub[j] == kInf) w.status[j] = default_status(j);
    }
  }
  if (!warm_ok) {
    for (int j = 0; j < w.total; ++j) w.status[j] = default_status(j);
    for (int i = 0; i < w.m; ++i) {
      const int sj = w.n + i;
      w.basic[i] = sj;
      w.basic_pos[sj] = i;
      w.status[sj] = VarStatus::Basic;
    }
  }

  w.inv_basis = linalg::DenseMatrix(w.m, w.m);
  w.x_basic.assign(w.m, 0.0);
  w.y.assign(w.m, 0.0);
  w.alpha.assign(w.m, 0.0);

  auto try_refactor = [&]() {
    try {
      w.refactor();
      return true;
    } catch (const std::runtime_error&) {
      return false;
    }
  };
  if (!try_refactor()) {
    // Singular warm basis: fall back to the slack basis.
    std::fill(w.basic_pos.begin(), w.basic_pos.end(), -1);
    for (int j = 0; j < w.total; ++j) w.status[j] = default_status(j);
    for (int i = 0; i < w.m; ++i) {
      const int sj = w.n + i;
      w.basic[i] = sj;
      w.basic_pos[sj] = i;
      w.status[sj] = VarStatus::Basic;
    }
    if (!try_refactor()) throw std::runtime_error("simplex: slack basis refactorization failed");
  }

  const long max_iters = opt_.max_iters > 0
                             ? opt_.max_iters
                             : 20000 + 10L * static_cast<long>(w.total);

  LpResult res;
  int polish_rounds = 0;
  bool done = false;
  SolveStatus status = SolveStatus::LimitHit;

  while (!done) {
    if (w.iters >= max_iters) {
      status = SolveStatus::LimitHit;
      break;
    }
    if (w.pivots_since_refactor >= opt_.refactor_interval) w.refactor();

    const double viol = w.max_violation();
    int phase = viol > kEpsActive ? 1 : 2;
    w.compute_duals(phase);
    Candidate cand = price(w, phase);
    if (cand.j < 0 && phase == 1 && viol <= opt_.feas_tol) {
      phase = 2;
      w.compute_duals(2);
      cand = price(w, 2);
    }
    if (cand.j < 0) {
      if (phase == 1) {
        status = SolveStatus::Infeasible;
        break;
      }
      // Claimed optimal: refactorize once and re-verify before accepting.
      if (polish_rounds < 3 && w.pivots_since_refactor > 0) {
        ++polish_rounds;
        w.refactor();
        continue;
      }
      status = w.max_violation() > opt_.feas_tol ? SolveStatus::Infeasible : SolveStatus::Optimal;
      done = true;
      break;
    }

    w.compute_alpha(cand.j);
    RatioOutcome ro = phase == 1 ? ratio_phase1(w, cand) : ratio_phase2(w, cand);
    if (ro.unbounded) {
      status = SolveStatus::Unbounded;
      break;
    }
    ++w.iters;

    const double step = std::max(0.0, ro.step);
    if (step > 0.0)
      for (int i = 0; i < w.m; ++i) w.x_basic[i] -= step * cand.dir * w.alpha[i];

    if (ro.flip) {
      w.status[cand.j] =
          w.status[cand.j] == VarStatus::AtLower ? VarStatus::AtUpper : VarStatus::AtLower;
    } else {
      const int r = ro.leave_slot;
      if (std::fabs(w.alpha[r]) < opt_.pivot_tol && w.pivots_since_refactor > 0) {
        // Unstable pivot on a stale inverse: refactorize and retry the pass.
        w.refactor();
        continue;
      }
      const int leaving = w.basic[r];
      const double enter_val = w.nb_value(cand.j) + cand.dir * step;
      w.status[leaving] = ro.leave_at_upper ? VarStatus::AtUpper : VarStatus::AtLower;
      w.basic_pos[leaving] = -1;
      w.update_inverse(r);
      w.basic[r] = cand.j;
      w.basic_pos[cand.j] = r;
      w.status[cand.j] = VarStatus::Basic;
      w.x_basic[r] = enter_val;
    }

    if (step <= kEpsDegen) {
      if (++w.degen_run > 600 && !w.bland) {
        w.bland = true;
        w.bland_left = 400;
      }
    } else {
      w.degen_run = 0;
    }
    if (w.bland && --w.bland_left <= 0) {
      w.bland = false;
      w.degen_run = 0;
    }
  }

  res.status = status;
  res.iterations = w.iters;
  if (basis_out != nullptr) {
    basis_out->n_vars = w.n;
    basis_out->basic = w.basic;
    basis_out->status = w.status;
  }
  if (status != SolveStatus::Optimal) return res;

  res.x.assign(w.n, 0.0);
  for (int j = 0; j < w.n; ++j)
    res.x[j] = w.basic_pos[j] >= 0 ? w.x_basic[w.basic_pos[j]] : w.nb_value(j);
  double obj = 0.0;
  for (int j = 0; j < w.n; ++j) obj += w.cost[j] * res.x[j];
  res.objective = obj;

  w.compute_duals(2);
  res.y.assign(w.y.begin(), w.y.end());
  res.redcost.assign(w.n, 0.0);
  for (int j = 0; j < w.n; ++j)
    res.redcost[j] = w.basic_pos[j] >= 0 ? 0.0 : w.reduced_cost(j, 2);
  return res;
}

}  // namespace gridplan::solver
