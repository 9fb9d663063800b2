#include "gridplan/opf/opf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace gridplan::opf {

using grid::InvestmentPlan;
using grid::Network;
using solver::OptModel;
using solver::RowSense;

double DispatchSolution::total_shed() const {
  double s = 0.0;
  for (const auto& row : shed)
    for (double v : row) s += v;
  return s;
}

double DispatchSolution::total_throughput() const {
  double s = 0.0;
  for (const auto& row : charge)
    for (double v : row) s += v;
  for (const auto& row : discharge)
    for (double v : row) s += v;
  return s;
}

void DispatchSolution::export_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("dispatch export: cannot open " + path);
  os << "quantity,index,hour,value\n";
  auto emit = [&](const char* q, const std::vector<std::vector<double>>& table) {
    for (std::size_t i = 0; i < table.size(); ++i)
      for (std::size_t t = 0; t < table[i].size(); ++t)
        os << q << "," << (i + 1) << "," << (t + 1) << "," << table[i][t] << "\n";
  };
  emit("gen", p_gen);
  emit("flow", flow);
  emit("charge", charge);
  emit("discharge", discharge);
  emit("soc", soc);
  emit("shed", shed);
}

namespace {

bool bus_has_storage(const grid::Bus& b) {
  return b.storage_candidate || b.baseline_storage_mwh > 0.0;
}

std::vector<std::vector<int>> gens_by_bus(const Network& net) {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(net.n_buses()));
  for (int g = 0; g < static_cast<int>(net.generators.size()); ++g)
    out[static_cast<std::size_t>(net.generators[g].bus - 1)].push_back(g);
  return out;
}

}  // namespace

DispatchBlock add_dispatch_block(OptModel& m, const Network& net, const scen::Scenario& sc,
                                 const grid::CostConfig& costs, const InvestmentPlan& plan,
                                 double lambda, double obj_scale,
                                 const std::optional<FirstStageVars>& fs) {
  if (!plan.matches(net)) throw std::invalid_argument("dispatch block: plan/network mismatch");
  if (static_cast<int>(sc.bus_load_mw.size()) != net.n_buses() ||
      static_cast<int>(sc.gen_max_mw.size()) != static_cast<int>(net.generators.size()))
    throw std::invalid_argument("dispatch block: scenario/network mismatch");
  if (lambda <= 0) throw std::invalid_argument("dispatch block: shed penalty must be positive");

  const int n = net.n_buses();
  const int g_count = static_cast<int>(net.generators.size());
  const int T = sc.T;
  const double eta = costs.efficiency;
  const double dur = costs.storage_duration_h;
  const std::string tag = "s" + std::to_string(sc.id);

  DispatchBlock blk;
  blk.T = T;
  blk.obj_scale = obj_scale;
  blk.fixed_plan = plan;
  blk.v_gamma.assign(static_cast<std::size_t>(net.n_branches()), -1);
  blk.v_sigma.assign(static_cast<std::size_t>(n), -1);
  if (fs) {
    blk.v_gamma = fs->gamma;
    blk.v_sigma = fs->sigma;
  }
  blk.v_gen.assign(static_cast<std::size_t>(g_count), std::vector<int>(static_cast<std::size_t>(T), -1));
  blk.v_ch.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(T), -1));
  blk.v_dis = blk.v_ch;
  blk.v_soc = blk.v_ch;
  blk.v_shed = blk.v_ch;
  blk.load_mw = sc.bus_load_mw;
  blk.row_present.assign(static_cast<std::size_t>(net.n_branches()) * static_cast<std::size_t>(T) * 2, 0);

  for (int g = 0; g < g_count; ++g) {
    const auto& gen = net.generators[static_cast<std::size_t>(g)];
    for (int t = 0; t < T; ++t) {
      const double lo = sc.gen_min_mw[static_cast<std::size_t>(g)][static_cast<std::size_t>(t)];
      const double hi = sc.gen_max_mw[static_cast<std::size_t>(g)][static_cast<std::size_t>(t)];
      if (lo > hi + 1e-12)
        throw std::invalid_argument("scenario " + sc.name + ": generator " +
                                    std::to_string(gen.id) + " min exceeds max at hour " +
                                    std::to_string(t + 1));
      blk.v_gen[static_cast<std::size_t>(g)][static_cast<std::size_t>(t)] =
          m.add_var("pg_" + tag + "_g" + std::to_string(gen.id) + "_t" + std::to_string(t + 1),
                    lo, hi, obj_scale * gen.marginal_cost_per_mwh);
    }
  }

  for (int i = 0; i < n; ++i) {
    const auto& bus = net.buses[static_cast<std::size_t>(i)];
    for (int t = 0; t < T; ++t)
      blk.v_shed[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] = m.add_var(
          "shed_" + tag + "_b" + std::to_string(i + 1) + "_t" + std::to_string(t + 1), 0.0,
          sc.bus_load_mw[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)],
          obj_scale * lambda);

    if (!bus_has_storage(bus)) continue;
    const bool var_sigma = blk.v_sigma[static_cast<std::size_t>(i)] >= 0;
    const double sigma_total =
        bus.baseline_storage_mwh + (var_sigma ? 0.0 : plan.storage_mwh[static_cast<std::size_t>(i)]);
    const double rate_cap = sigma_total / dur;
    const std::string bt = tag + "_b" + std::to_string(i + 1);
    for (int t = 0; t < T; ++t) {
      const std::string ts = "_t" + std::to_string(t + 1);
      blk.v_ch[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] =
          m.add_var("ch_" + bt + ts, 0.0, var_sigma ? solver::kInf : rate_cap,
                    obj_scale * costs.storage_throughput_cost_per_mwh);
      blk.v_dis[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] =
          m.add_var("dis_" + bt + ts, 0.0, var_sigma ? solver::kInf : rate_cap,
                    obj_scale * costs.storage_throughput_cost_per_mwh);
      if (t < T - 1)  // the final state is pinned at zero and carries no variable
        blk.v_soc[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] =
            m.add_var("soc_" + bt + ts, 0.0, var_sigma ? solver::kInf : sigma_total, 0.0);
    }
    // SoC recursion with efficiency losses; zero state entering and leaving
    // the day.
    for (int t = 0; t < T; ++t) {
      std::vector<std::pair<int, double>> terms;
      if (t < T - 1)
        terms.emplace_back(blk.v_soc[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)], 1.0);
      if (t > 0)
        terms.emplace_back(blk.v_soc[static_cast<std::size_t>(i)][static_cast<std::size_t>(t - 1)], -1.0);
      terms.emplace_back(blk.v_ch[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)], -eta);
      terms.emplace_back(blk.v_dis[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)], 1.0 / eta);
      m.add_row("soc_" + bt + "_t" + std::to_string(t + 1), std::move(terms), RowSense::Equal,
                0.0);
    }
    if (var_sigma) {
      // Capacity coupling against the first-stage variable (new MWh).
      const int vs = blk.v_sigma[static_cast<std::size_t>(i)];
      for (int t = 0; t < T; ++t) {
        const std::string ts = "_t" + std::to_string(t + 1);
        m.add_row("chcap_" + bt + ts,
                  {{blk.v_ch[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)], 1.0},
                   {vs, -1.0 / dur}},
                  RowSense::LessEqual, bus.baseline_storage_mwh / dur);
        m.add_row("discap_" + bt + ts,
                  {{blk.v_dis[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)], 1.0},
                   {vs, -1.0 / dur}},
                  RowSense::LessEqual, bus.baseline_storage_mwh / dur);
        if (t < T - 1)
          m.add_row("soccap_" + bt + ts,
                    {{blk.v_soc[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)], 1.0},
                     {vs, -1.0}},
                    RowSense::LessEqual, bus.baseline_storage_mwh);
      }
    }
  }

  // Hourly system balance: generation + discharge + shed - charge = load.
  const auto by_bus = gens_by_bus(net);
  for (int t = 0; t < T; ++t) {
    std::vector<std::pair<int, double>> terms;
    double load = 0.0;
    for (int i = 0; i < n; ++i) {
      load += sc.bus_load_mw[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
      for (int g : by_bus[static_cast<std::size_t>(i)])
        terms.emplace_back(blk.v_gen[static_cast<std::size_t>(g)][static_cast<std::size_t>(t)], 1.0);
      terms.emplace_back(blk.v_shed[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)], 1.0);
      if (blk.v_ch[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] >= 0) {
        terms.emplace_back(blk.v_dis[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)], 1.0);
        terms.emplace_back(blk.v_ch[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)], -1.0);
      }
    }
    m.add_row("bal_" + tag + "_t" + std::to_string(t + 1), std::move(terms), RowSense::Equal,
              load);
  }
  return blk;
}

std::vector<FlowViolation> scan_block_violations(const DispatchBlock& blk, const Network& net,
                                                 const ptdf::PtdfMatrix& ptdf,
                                                 const std::vector<double>& x, double tol) {
  const int n = net.n_buses();
  const int e_count = net.n_branches();
  std::vector<FlowViolation> out;
  std::vector<double> inj(static_cast<std::size_t>(n));
  const auto by_bus = gens_by_bus(net);
  for (int t = 0; t < blk.T; ++t) {
    std::fill(inj.begin(), inj.end(), 0.0);
    double imbalance = 0.0;
    for (int i = 0; i < n; ++i) {
      double v = -blk.load_mw[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
      for (int g : by_bus[static_cast<std::size_t>(i)])
        v += x[static_cast<std::size_t>(blk.v_gen[static_cast<std::size_t>(g)][static_cast<std::size_t>(t)])];
      v += x[static_cast<std::size_t>(blk.v_shed[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)])];
      if (blk.v_ch[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] >= 0) {
        v += x[static_cast<std::size_t>(blk.v_dis[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)])];
        v -= x[static_cast<std::size_t>(blk.v_ch[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)])];
      }
      inj[static_cast<std::size_t>(i)] = v;
      imbalance += v;
    }
    (void)imbalance;
    const auto flows = ptdf.flows(inj);
    for (int e = 0; e < e_count; ++e) {
      const auto& br = net.branches[static_cast<std::size_t>(e)];
      double gamma = static_cast<double>(blk.fixed_plan.line_level[static_cast<std::size_t>(e)]);
      if (blk.v_gamma[static_cast<std::size_t>(e)] >= 0)
        gamma = x[static_cast<std::size_t>(blk.v_gamma[static_cast<std::size_t>(e)])];
      const double bound = br.thermal_limit_mw + gamma * br.upgrade_increment_mw;
      const double f = flows[static_cast<std::size_t>(e)];
      if (f > bound + tol) out.push_back({e, t, f, bound, f - bound, true});
      else if (f < -bound - tol) out.push_back({e, t, f, bound, -bound - f, false});
    }
  }
  std::sort(out.begin(), out.end(), [](const FlowViolation& a, const FlowViolation& b) {
    if (a.excess_mw != b.excess_mw) return a.excess_mw > b.excess_mw;
    if (a.branch != b.branch) return a.branch < b.branch;
    if (a.hour != b.hour) return a.hour < b.hour;
    return a.upper && !b.upper;
  });
  return out;
}

int add_flow_rows(OptModel& m, DispatchBlock& blk, const Network& net,
                  const ptdf::PtdfMatrix& ptdf, const std::vector<FlowViolation>& viols,
                  int k_v) {
  if (k_v < 1) throw std::invalid_argument("add_flow_rows: k_v must be >= 1");
  const auto by_bus = gens_by_bus(net);
  int added = 0;
  for (const auto& v : viols) {
    if (added >= k_v) break;
    const std::size_t key =
        (static_cast<std::size_t>(v.branch) * static_cast<std::size_t>(blk.T) +
         static_cast<std::size_t>(v.hour)) * 2 + (v.upper ? 1 : 0);
    if (blk.row_present[key]) continue;
    blk.row_present[key] = 1;

    const auto& br = net.branches[static_cast<std::size_t>(v.branch)];
    std::vector<std::pair<int, double>> terms;
    double rhs_load = 0.0;
    for (const auto& [bus, phi] : ptdf.row(v.branch)) {
      rhs_load += phi * blk.load_mw[static_cast<std::size_t>(bus)][static_cast<std::size_t>(v.hour)];
      for (int g : by_bus[static_cast<std::size_t>(bus)])
        terms.emplace_back(blk.v_gen[static_cast<std::size_t>(g)][static_cast<std::size_t>(v.hour)], phi);
      terms.emplace_back(blk.v_shed[static_cast<std::size_t>(bus)][static_cast<std::size_t>(v.hour)], phi);
      if (blk.v_ch[static_cast<std::size_t>(bus)][static_cast<std::size_t>(v.hour)] >= 0) {
        terms.emplace_back(blk.v_dis[static_cast<std::size_t>(bus)][static_cast<std::size_t>(v.hour)], phi);
        terms.emplace_back(blk.v_ch[static_cast<std::size_t>(bus)][static_cast<std::size_t>(v.hour)], -phi);
      }
    }
    const double gamma_fixed =
        static_cast<double>(blk.fixed_plan.line_level[static_cast<std::size_t>(v.branch)]);
    const int vg = blk.v_gamma[static_cast<std::size_t>(v.branch)];
    const std::string nm = "flow_e" + std::to_string(br.id) + "_t" + std::to_string(v.hour + 1) +
                           (v.upper ? "_hi" : "_lo");
    if (v.upper) {
      double rhs = br.thermal_limit_mw + rhs_load;
      if (vg >= 0) terms.emplace_back(vg, -br.upgrade_increment_mw);
      else rhs += gamma_fixed * br.upgrade_increment_mw;
      m.add_row(nm, std::move(terms), RowSense::LessEqual, rhs);
    } else {
      double rhs = -br.thermal_limit_mw + rhs_load;
      if (vg >= 0) terms.emplace_back(vg, br.upgrade_increment_mw);
      else rhs -= gamma_fixed * br.upgrade_increment_mw;
      m.add_row(nm, std::move(terms), RowSense::GreaterEqual, rhs);
    }
    blk.active_rows.push_back({v.branch, v.hour, v.upper});
    ++added;
  }
  return added;
}

DispatchSolution extract_dispatch(const DispatchBlock& blk, const Network& net,
                                  const ptdf::PtdfMatrix& ptdf, const std::vector<double>& x,
                                  double objective) {
  const int n = net.n_buses();
  const int g_count = static_cast<int>(net.generators.size());
  const int T = blk.T;
  DispatchSolution sol;
  sol.T = T;
  sol.objective = objective;
  sol.active_rows = blk.active_rows;
  sol.p_gen.assign(static_cast<std::size_t>(g_count), std::vector<double>(static_cast<std::size_t>(T), 0.0));
  sol.charge.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(T), 0.0));
  sol.discharge = sol.charge;
  sol.soc = sol.charge;
  sol.shed = sol.charge;
  sol.flow.assign(static_cast<std::size_t>(net.n_branches()),
                  std::vector<double>(static_cast<std::size_t>(T), 0.0));

  for (int g = 0; g < g_count; ++g)
    for (int t = 0; t < T; ++t)
      sol.p_gen[static_cast<std::size_t>(g)][static_cast<std::size_t>(t)] =
          x[static_cast<std::size_t>(blk.v_gen[static_cast<std::size_t>(g)][static_cast<std::size_t>(t)])];
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < T; ++t) {
      sol.shed[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] =
          x[static_cast<std::size_t>(blk.v_shed[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)])];
      if (blk.v_ch[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] >= 0) {
        sol.charge[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] =
            x[static_cast<std::size_t>(blk.v_ch[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)])];
        sol.discharge[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] =
            x[static_cast<std::size_t>(blk.v_dis[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)])];
        // final-hour state is pinned at zero by construction
        sol.soc[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] =
            t < T - 1 ? x[static_cast<std::size_t>(blk.v_soc[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)])]
                      : 0.0;
      }
    }

  const auto by_bus = gens_by_bus(net);
  std::vector<double> inj(static_cast<std::size_t>(n));
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < n; ++i) {
      double v = -blk.load_mw[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] +
                 sol.shed[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] +
                 sol.discharge[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] -
                 sol.charge[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
      for (int g : by_bus[static_cast<std::size_t>(i)])
        v += sol.p_gen[static_cast<std::size_t>(g)][static_cast<std::size_t>(t)];
      inj[static_cast<std::size_t>(i)] = v;
    }
    const auto flows = ptdf.flows(inj);
    for (int e = 0; e < net.n_branches(); ++e)
      sol.flow[static_cast<std::size_t>(e)][static_cast<std::size_t>(t)] =
          flows[static_cast<std::size_t>(e)];
  }
  return sol;
}

OperationalModel build_operational_model(const Network& net, const scen::Scenario& sc,
                                         const grid::CostConfig& costs,
                                         const InvestmentPlan& plan, double lambda,
                                         double alpha) {
  grid::validate_plan(plan, net, costs);
  OperationalModel om;
  om.net = &net;
  om.lambda = lambda;
  om.alpha = alpha;
  om.block = add_dispatch_block(om.lp.model, net, sc, costs, plan, lambda, alpha);
  return om;
}

DispatchSolution solve_with_lazy_flows(OperationalModel& om, const ptdf::PtdfMatrix& ptdf,
                                       int k_v, const LazyOptions& opt) {
  if (k_v < 1) throw std::invalid_argument("solve_with_lazy_flows: k_v must be >= 1");
  int iters = 0;
  while (true) {
    ++iters;
    if (iters > opt.max_iterations) {
      throw std::runtime_error("solve_with_lazy_flows: iteration cap " +
                               std::to_string(opt.max_iterations) + " exceeded");
    }
    solver::LpResult r = om.lp.solve();
    if (r.status != solver::SolveStatus::Optimal)
      throw std::runtime_error(std::string("solve_with_lazy_flows: solver returned ") +
                               solver::to_string(r.status));
    auto viols = scan_block_violations(om.block, *om.net, ptdf, r.x, opt.viol_tol);
    if (viols.empty()) {
      DispatchSolution sol = extract_dispatch(om.block, *om.net, ptdf, r.x, r.objective);
      sol.lazy_iterations = iters;
      return sol;
    }
    add_flow_rows(om.lp.model, om.block, *om.net, ptdf, viols, k_v);
  }
}

double evaluate_opex(const DispatchSolution& sol, const Network& net,
                     const grid::CostConfig& costs, double lambda, double alpha) {
  double gen_cost = 0.0;
  for (std::size_t g = 0; g < sol.p_gen.size(); ++g)
    for (double v : sol.p_gen[g]) gen_cost += net.generators[g].marginal_cost_per_mwh * v;
  const double stor_cost = costs.storage_throughput_cost_per_mwh * sol.total_throughput();
  const double shed_cost = lambda * sol.total_shed();
  return alpha * (gen_cost + stor_cost + shed_cost);
}

}  // namespace gridplan::opf
