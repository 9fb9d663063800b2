#include "gridplan/grid/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gridplan::grid {

GenType gen_type_from_string(const std::string& s) {
  if (s == "coal") return GenType::Coal;
  if (s == "gas") return GenType::Gas;
  if (s == "nuclear") return GenType::Nuclear;
  if (s == "solar") return GenType::Solar;
  if (s == "wind") return GenType::Wind;
  if (s == "other") return GenType::Other;
  throw std::invalid_argument("unknown generator type '" + s + "'");
}

const char* to_string(GenType t) {
  switch (t) {
    case GenType::Coal: return "coal";
    case GenType::Gas: return "gas";
    case GenType::Nuclear: return "nuclear";
    case GenType::Solar: return "solar";
    case GenType::Wind: return "wind";
    case GenType::Other: return "other";
  }
  return "other";
}

bool InvestmentPlan::is_zero() const {
  return std::all_of(line_level.begin(), line_level.end(), [](int g) { return g == 0; }) &&
         std::all_of(storage_mwh.begin(), storage_mwh.end(), [](double s) { return s == 0.0; });
}

std::vector<std::string> Network::validate() const {
  std::vector<std::string> errs;
  const int n = n_buses();
  for (int i = 0; i < n; ++i) {
    const Bus& b = buses[static_cast<std::size_t>(i)];
    if (b.id != i + 1)
      errs.push_back("bus at position " + std::to_string(i) + " has id " + std::to_string(b.id) +
                     "; ids must be contiguous 1..N");
    if (b.base_load_mw < 0)
      errs.push_back("bus " + std::to_string(b.id) + ": negative base load");
    if (b.max_storage_units < 0)
      errs.push_back("bus " + std::to_string(b.id) + ": negative max storage units");
    if (b.baseline_storage_mwh < 0)
      errs.push_back("bus " + std::to_string(b.id) + ": negative baseline storage");
  }
  auto bus_ok = [&](int id) { return id >= 1 && id <= n; };
  for (const Branch& br : branches) {
    const std::string tag = "branch " + std::to_string(br.id);
    if (!bus_ok(br.from_bus) || !bus_ok(br.to_bus))
      errs.push_back(tag + ": endpoint references undeclared bus " +
                     std::to_string(bus_ok(br.from_bus) ? br.to_bus : br.from_bus));
    if (br.from_bus == br.to_bus) errs.push_back(tag + ": self loop");
    if (!(br.reactance_pu > 0)) errs.push_back(tag + ": nonpositive reactance");
    if (!(br.thermal_limit_mw > 0)) errs.push_back(tag + ": nonpositive thermal limit");
    if (br.upgrade_increment_mw < 0) errs.push_back(tag + ": negative upgrade increment");
    if (br.max_upgrade_level < 0) errs.push_back(tag + ": negative max upgrade level");
  }
  std::vector<bool> gen_bus(static_cast<std::size_t>(n) + 1, false);
  for (const Generator& g : generators) {
    const std::string tag = "generator " + std::to_string(g.id);
    if (!bus_ok(g.bus)) {
      errs.push_back(tag + ": references undeclared bus " + std::to_string(g.bus));
      continue;
    }
    if (gen_bus[static_cast<std::size_t>(g.bus)])
      errs.push_back(tag + ": bus " + std::to_string(g.bus) +
                     " already has a generator (one per bus)");
    gen_bus[static_cast<std::size_t>(g.bus)] = true;
    if (g.capacity_mw < 0) errs.push_back(tag + ": negative capacity");
    if (g.min_output_mw < 0 || g.min_output_mw > g.capacity_mw)
      errs.push_back(tag + ": minimum output outside [0, capacity]");
    if (g.renewable && g.min_output_mw != 0.0)
      errs.push_back(tag + ": renewable units must have zero minimum output");
    if (g.marginal_cost_per_mwh < 0) errs.push_back(tag + ": negative marginal cost");
  }
  if (!bus_ok(slack_bus)) errs.push_back("slack bus " + std::to_string(slack_bus) + " undeclared");

  // Islands are rejected.
  if (n > 0 && errs.empty()) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (const Branch& br : branches) {
        const int a = br.from_bus - 1, b = br.to_bus - 1;
        int v = -1;
        if (a == u) v = b;
        else if (b == u) v = a;
        if (v >= 0 && !seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          ++count;
          stack.push_back(v);
        }
      }
    }
    if (count != n) {
      for (int i = 0; i < n; ++i)
        if (!seen[static_cast<std::size_t>(i)]) {
          errs.push_back("bus " + std::to_string(i + 1) + " is islanded");
          break;
        }
    }
  }
  return errs;
}

std::vector<std::string> CostConfig::validate() const {
  std::vector<std::string> errs;
  if (line_cost_per_mw_km < 0) errs.push_back("negative line cost");
  if (storage_cost_per_mwh < 0) errs.push_back("negative storage cost");
  if (storage_throughput_cost_per_mwh < 0) errs.push_back("negative throughput cost");
  if (shed_penalty_per_mwh && *shed_penalty_per_mwh < 0) errs.push_back("negative shed penalty");
  if (!(storage_unit_mwh > 0)) errs.push_back("nonpositive storage unit size");
  if (!(storage_duration_h > 0)) errs.push_back("nonpositive storage duration");
  if (!(efficiency > 0 && efficiency <= 1)) errs.push_back("efficiency outside (0, 1]");
  return errs;
}

void fill_costs_from_config(Network& net, const CostConfig& costs) {
  for (Branch& br : net.branches)
    if (std::isnan(br.upgrade_cost_per_level))
      br.upgrade_cost_per_level =
          costs.line_cost_per_mw_km * br.length_km * br.upgrade_increment_mw;
  for (Bus& b : net.buses)
    if (std::isnan(b.storage_unit_cost_per_mwh))
      b.storage_unit_cost_per_mwh = costs.storage_cost_per_mwh;
}

Network apply_year_scaling(const Network& net, const ScalingTable& table, int year) {
  auto it = table.by_year.find(year);
  if (it == table.by_year.end())
    throw std::invalid_argument("scaling table has no entry for year " + std::to_string(year));
  const ScalingRow& row = it->second;
  Network out = net;
  for (Generator& g : out.generators) {
    const double f = row.type_multiplier(g.type);
    g.capacity_mw *= f;
    g.min_output_mw *= f;
  }
  for (Bus& b : out.buses) b.base_load_mw *= row.load;
  return out;
}

double plan_capex(const InvestmentPlan& plan, const Network& net) {
  if (!plan.matches(net)) throw std::invalid_argument("plan_capex: plan/network size mismatch");
  double total = 0.0;
  for (std::size_t e = 0; e < net.branches.size(); ++e) {
    if (plan.line_level[e] == 0) continue;
    const double c = net.branches[e].upgrade_cost_per_level;
    if (std::isnan(c))
      throw std::invalid_argument("plan_capex: branch " + std::to_string(net.branches[e].id) +
                                  " has no upgrade cost; apply the cost config first");
    total += c * plan.line_level[e];
  }
  for (std::size_t i = 0; i < net.buses.size(); ++i) {
    if (plan.storage_mwh[i] == 0.0) continue;
    const double c = net.buses[i].storage_unit_cost_per_mwh;
    if (std::isnan(c))
      throw std::invalid_argument("plan_capex: bus " + std::to_string(net.buses[i].id) +
                                  " has no storage cost; apply the cost config first");
    total += c * plan.storage_mwh[i];
  }
  return total;
}

void validate_plan(const InvestmentPlan& plan, const Network& net, const CostConfig& costs) {
  if (!plan.matches(net)) throw std::invalid_argument("plan does not match network dimensions");
  for (std::size_t e = 0; e < net.branches.size(); ++e) {
    if (plan.line_level[e] < 0 || plan.line_level[e] > net.branches[e].max_upgrade_level)
      throw std::invalid_argument("branch " + std::to_string(net.branches[e].id) +
                                  ": upgrade level outside [0, max]");
  }
  for (std::size_t i = 0; i < net.buses.size(); ++i) {
    const double units = plan.storage_mwh[i] / costs.storage_unit_mwh;
    if (plan.storage_mwh[i] < 0 || std::fabs(units - std::round(units)) > 1e-6 ||
        std::lround(units) > net.buses[i].max_storage_units)
      throw std::invalid_argument("bus " + std::to_string(net.buses[i].id) +
                                  ": storage not a unit multiple within headroom");
  }
}

Network commit_plan(const Network& net, const InvestmentPlan& plan, const CostConfig& costs) {
  validate_plan(plan, net, costs);
  Network out = net;
  for (std::size_t e = 0; e < out.branches.size(); ++e) {
    Branch& br = out.branches[e];
    br.thermal_limit_mw += plan.line_level[e] * br.upgrade_increment_mw;
    br.max_upgrade_level -= plan.line_level[e];
  }
  for (std::size_t i = 0; i < out.buses.size(); ++i) {
    Bus& b = out.buses[i];
    b.baseline_storage_mwh += plan.storage_mwh[i];
    b.max_storage_units -=
        static_cast<int>(std::lround(plan.storage_mwh[i] / costs.storage_unit_mwh));
  }
  return out;
}

}  // namespace gridplan::grid
