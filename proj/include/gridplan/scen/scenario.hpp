#pragma once

#include <map>
#include <string>
#include <vector>

#include "gridplan/grid/model.hpp"

namespace gridplan::scen {

// One year of hourly system data. Capacity-factor series are keyed by
// renewable type ("wind", "solar") or per site ("gen_<id>"), all in [0, 1].
struct AnnualSeries {
  std::vector<double> system_load_mw;
  std::map<std::string, std::vector<double>> capacity_factors;

  int n_hours() const { return static_cast<int>(system_load_mw.size()); }
  int n_days() const { return n_hours() / 24; }
  std::vector<std::string> validate() const;
};

struct DayProfile {
  int day = 0;  // 1..n_days
  std::vector<double> features;
};

struct Scenario {
  int id = 0;
  std::string name;
  double weight = 0.0;
  int T = 24;
  std::vector<std::vector<double>> bus_load_mw;  // [bus][t]
  std::vector<std::vector<double>> gen_max_mw;   // [generator][t]
  std::vector<std::vector<double>> gen_min_mw;   // [generator][t]
};

struct DaySelection {
  std::vector<int> days;        // 1-based day numbers
  std::vector<double> weights;  // equal, sum to 1
};

// CSV, one row per hour: hour, system_load_mw, cf_wind, cf_solar[, cf_<site>...]
AnnualSeries read_annual_series_csv(const std::string& path);
AnnualSeries parse_annual_series_csv(const std::string& text);

// One profile per day: concatenated 24-h load and capacity-factor blocks,
// each feature dimension min-max normalized across days; constant dimensions
// collapse to zero.
std::vector<DayProfile> build_day_profiles(const AnnualSeries& series);

// Greedy max-min diversity pick: seeded with the farthest pair (lowest day
// pair on ties), then repeatedly the day maximizing the minimum distance to
// the chosen set (lowest day on ties). Equal weights 1/k.
DaySelection select_representative_days(const std::vector<DayProfile>& profiles, int k_r);

// Per-bus / per-generator hourly data for the chosen days under the year's
// scaling: bus loads follow base-case shares of the system load, renewable
// ceilings follow capacity factors, conventional bounds follow scaled
// capacity.
std::vector<Scenario> materialize_scenarios(const grid::Network& net, const AnnualSeries& series,
                                            const DaySelection& days, int year,
                                            const grid::ScalingTable& table);

std::string selection_to_json(const DaySelection& sel);
DaySelection selection_from_json(const std::string& text);

void validate_scenario_set(const grid::Network& net, const std::vector<Scenario>& scenarios);

}  // namespace gridplan::scen
