#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gridplan::grid {

struct Bus {
  int id = 0;  // 1..N, contiguous after ingestion
  double base_load_mw = 0.0;
  bool storage_candidate = false;
  double storage_unit_cost_per_mwh = std::nan("");  // filled from the cost config when absent
  int max_storage_units = 0;
  double baseline_storage_mwh = 0.0;  // committed fleet, free of new capital cost
};

struct Branch {
  int id = 0;
  int from_bus = 0;
  int to_bus = 0;
  double reactance_pu = 0.0;
  double thermal_limit_mw = 0.0;
  double upgrade_increment_mw = 0.0;  // MW added per upgrade level
  int max_upgrade_level = 0;
  double length_km = 0.0;
  double upgrade_cost_per_level = std::nan("");
};

enum class GenType { Coal, Gas, Nuclear, Solar, Wind, Other };

GenType gen_type_from_string(const std::string& s);
const char* to_string(GenType t);

struct Generator {
  int id = 0;
  int bus = 0;
  GenType type = GenType::Other;
  bool renewable = false;
  double capacity_mw = 0.0;
  double marginal_cost_per_mwh = 0.0;
  double min_output_mw = 0.0;
};

struct Network {
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  std::vector<Generator> generators;
  int slack_bus = 0;
  double mva_base = 100.0;

  int n_buses() const { return static_cast<int>(buses.size()); }
  int n_branches() const { return static_cast<int>(branches.size()); }
  int bus_index(int id) const { return id - 1; }
  const Bus& bus(int id) const { return buses[static_cast<std::size_t>(id - 1)]; }

  // Structural defects; empty when the network is valid.
  std::vector<std::string> validate() const;
};

// Integer line upgrade levels per branch and storage energy (MWh) per bus.
struct InvestmentPlan {
  std::vector<int> line_level;
  std::vector<double> storage_mwh;

  static InvestmentPlan zero(const Network& net) {
    return {std::vector<int>(net.branches.size(), 0),
            std::vector<double>(net.buses.size(), 0.0)};
  }
  bool matches(const Network& net) const {
    return line_level.size() == net.branches.size() && storage_mwh.size() == net.buses.size();
  }
  bool is_zero() const;
  bool operator==(const InvestmentPlan&) const = default;
};

struct CostConfig {
  double line_cost_per_mw_km = 1243.0;
  double storage_cost_per_mwh = 1e6;
  double storage_throughput_cost_per_mwh = 68.5;
  std::optional<double> shed_penalty_per_mwh;  // absent = derived at run time
  double storage_unit_mwh = 250.0;
  double storage_duration_h = 4.0;
  double efficiency = 0.95;

  std::vector<std::string> validate() const;
};

struct ScalingRow {
  double load = 1.0;
  std::map<GenType, double> by_type;

  double type_multiplier(GenType t) const {
    auto it = by_type.find(t);
    return it == by_type.end() ? 1.0 : it->second;
  }
};

struct ScalingTable {
  std::map<int, ScalingRow> by_year;
};

// Fills branch upgrade costs (unit cost x length x increment) and bus storage
// unit costs where the case file left them unspecified.
void fill_costs_from_config(Network& net, const CostConfig& costs);

// Scales generator capacities per type and bus loads by the year's
// multipliers; topology untouched. Throws on unknown years.
Network apply_year_scaling(const Network& net, const ScalingTable& table, int year);

// Capital cost of a plan (branch upgrade levels and storage MWh).
double plan_capex(const InvestmentPlan& plan, const Network& net);

// Folds a plan into the network: thermal limits grow by level*increment,
// remaining upgrade headroom shrinks, storage becomes baseline fleet and the
// per-bus unit headroom shrinks accordingly.
Network commit_plan(const Network& net, const InvestmentPlan& plan, const CostConfig& costs);

// Plan-vs-network consistency (dimensions, level bounds, unit granularity).
void validate_plan(const InvestmentPlan& plan, const Network& net, const CostConfig& costs);

}  // namespace gridplan::grid
