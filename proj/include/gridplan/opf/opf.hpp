#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gridplan/grid/model.hpp"
#include "gridplan/ptdf/ptdf.hpp"
#include "gridplan/scen/scenario.hpp"
#include "gridplan/solver/incremental.hpp"
#include "gridplan/solver/model.hpp"

namespace gridplan::opf {

struct FlowViolation {
  int branch = 0;  // 0-based
  int hour = 0;    // 0-based
  double flow_mw = 0.0;
  double bound_mw = 0.0;
  double excess_mw = 0.0;
  bool upper = true;
};

struct ActiveFlowRow {
  int branch = 0;
  int hour = 0;
  bool upper = true;
};

struct DispatchSolution {
  int T = 0;
  std::vector<std::vector<double>> p_gen;             // [gen][t]
  std::vector<std::vector<double>> flow;              // [branch][t]
  std::vector<std::vector<double>> charge, discharge, soc;  // [bus][t]
  std::vector<std::vector<double>> shed;              // [bus][t]
  double objective = 0.0;
  int lazy_iterations = 0;
  std::vector<ActiveFlowRow> active_rows;

  double total_shed() const;
  double total_throughput() const;  // MWh charged + discharged
  void export_csv(const std::string& path) const;
};

// Variable ids of one scenario's dispatch inside an OptModel. First-stage
// coupling is either a fixed plan folded into bounds/rhs or explicit gamma /
// sigma variables referenced by the storage and flow rows.
struct DispatchBlock {
  int T = 0;
  double obj_scale = 1.0;  // alpha x scenario weight on this block
  std::vector<std::vector<int>> v_gen;   // [gen][t]
  std::vector<std::vector<int>> v_ch;    // [bus][t], -1 without storage
  std::vector<std::vector<int>> v_dis;
  std::vector<std::vector<int>> v_soc;   // hour T column is absent (pinned 0)
  std::vector<std::vector<int>> v_shed;  // [bus][t]
  std::vector<int> v_gamma;  // [branch], -1 when the plan is constant
  std::vector<int> v_sigma;  // [bus], new storage MWh, -1 when constant
  grid::InvestmentPlan fixed_plan;       // used where v_gamma/v_sigma are -1
  std::vector<std::vector<double>> load_mw;  // copy of the scenario loads
  std::vector<ActiveFlowRow> active_rows;
  std::vector<char> row_present;  // [branch][hour][dir] flow-row registry
};

// Adds balance, generator bounds, storage dynamics, shed bounds and the
// scaled operating-cost terms for one scenario. No flow rows yet; those are
// generated lazily. When `gamma_sigma_vars` is set, first-stage variables
// must already exist in the model and are referenced instead of the plan.
struct FirstStageVars {
  std::vector<int> gamma;  // per branch
  std::vector<int> sigma;  // per bus (MWh of new storage)
};

DispatchBlock add_dispatch_block(solver::OptModel& m, const grid::Network& net,
                                 const scen::Scenario& sc, const grid::CostConfig& costs,
                                 const grid::InvestmentPlan& plan, double lambda,
                                 double obj_scale,
                                 const std::optional<FirstStageVars>& gamma_sigma_vars = {});

// Violations of the gamma-expanded limits at a primal point, worst first.
std::vector<FlowViolation> scan_block_violations(const DispatchBlock& blk,
                                                 const grid::Network& net,
                                                 const ptdf::PtdfMatrix& ptdf,
                                                 const std::vector<double>& x, double tol);

// Materializes flow rows for the given violations (skipping ones already
// present) and records them in the block's active set. Returns rows added.
int add_flow_rows(solver::OptModel& m, DispatchBlock& blk, const grid::Network& net,
                  const ptdf::PtdfMatrix& ptdf, const std::vector<FlowViolation>& viols,
                  int k_v);

// Extracts a dispatch solution (flows recomputed through the PTDF).
DispatchSolution extract_dispatch(const DispatchBlock& blk, const grid::Network& net,
                                  const ptdf::PtdfMatrix& ptdf, const std::vector<double>& x,
                                  double objective);

struct OperationalModel {
  solver::IncrementalLp lp;
  DispatchBlock block;
  const grid::Network* net = nullptr;
  double lambda = 0.0;
  double alpha = 1.0;
};

struct LazyOptions {
  int k_v = 32;
  int max_iterations = 200;
  double viol_tol = 1e-6;
};

// Single-scenario operational model with a fixed investment plan; storage
// limits fold the plan into variable bounds. Objective carries alpha.
OperationalModel build_operational_model(const grid::Network& net, const scen::Scenario& sc,
                                         const grid::CostConfig& costs,
                                         const grid::InvestmentPlan& plan, double lambda,
                                         double alpha = 1.0);

// Iterates: solve, scan all branch-hours, add the k_v worst violated limits,
// until no violation above tolerance remains. Throws on solver failure or
// iteration cap, with the outstanding violations in the message.
DispatchSolution solve_with_lazy_flows(OperationalModel& om, const ptdf::PtdfMatrix& ptdf,
                                       int k_v, const LazyOptions& opt = {});

// alpha * sum of generation, storage throughput and shed-penalty costs.
double evaluate_opex(const DispatchSolution& sol, const grid::Network& net,
                     const grid::CostConfig& costs, double lambda, double alpha);

}  // namespace gridplan::opf
