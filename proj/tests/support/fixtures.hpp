#pragma once

#include <random>
#include <string>
#include <vector>

#include "gridplan/grid/model.hpp"
#include "gridplan/opf/opf.hpp"
#include "gridplan/ptdf/ptdf.hpp"
#include "gridplan/scen/scenario.hpp"

namespace gpfix {

using gridplan::grid::CostConfig;
using gridplan::grid::InvestmentPlan;
using gridplan::grid::Network;
using gridplan::scen::Scenario;

// Three buses in a triangle: equal reactance, 60 MW limits, 18 MW upgrade
// steps (three levels), cheap unit at bus 1, expensive unit at bus 3, load at
// bus 2, slack at bus 3, storage candidates everywhere.
Network make_f3();
CostConfig f3_costs();

// Constant-load scenario; generator bounds follow the network capacities.
Scenario flat_scenario(const Network& net, const std::vector<double>& bus_load_mw, int T,
                       double weight = 1.0, int id = 0, const std::string& name = "flat");

// Arbitrary [bus][t] loads.
Scenario make_scenario(const Network& net, const std::vector<std::vector<double>>& bus_load_mw,
                       double weight = 1.0, int id = 0, const std::string& name = "custom");

struct RandomNetOptions {
  int n_buses = 8;
  int extra_branches = 4;  // beyond the spanning tree
  int storage_buses = 2;
  int max_storage_units = 4;
  double storage_unit_mwh = 20.0;
  int max_level = 2;
};

Network random_network(std::mt19937& rng, const RandomNetOptions& opt);
CostConfig random_costs(const RandomNetOptions& opt);

// Daily-shaped random scenarios (peaked loads, some hour-varying ceilings).
std::vector<Scenario> random_scenarios(std::mt19937& rng, const Network& net, int S, int T);

// Independent DC flow oracle: assemble the full susceptance system, solve for
// angles with plain Gauss-Jordan elimination, difference across branches.
std::vector<double> angle_flows(const Network& net, const std::vector<double>& injection_mw);

// Materializes every branch-hour flow limit on an operational model.
void materialize_all_flow_rows(gridplan::opf::OperationalModel& om,
                               const gridplan::ptdf::PtdfMatrix& ptdf);

// Componentwise-maximal plan (full upgrade levels, full storage).
InvestmentPlan max_plan(const Network& net, const CostConfig& costs);

}  // namespace gpfix
