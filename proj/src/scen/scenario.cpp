#include "gridplan/scen/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gridplan/grid/case_io.hpp"

namespace gridplan::scen {

std::vector<std::string> AnnualSeries::validate() const {
  std::vector<std::string> errs;
  if (system_load_mw.empty() || system_load_mw.size() % 24 != 0)
    errs.push_back("system load length " + std::to_string(system_load_mw.size()) +
                   " is not a positive multiple of 24");
  for (const auto& [key, cf] : capacity_factors) {
    if (cf.size() != system_load_mw.size())
      errs.push_back("capacity factor '" + key + "' length differs from load series");
    for (double v : cf)
      if (v < 0.0 || v > 1.0) {
        errs.push_back("capacity factor '" + key + "' outside [0,1]");
        break;
      }
  }
  return errs;
}

AnnualSeries parse_annual_series_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("annual series: empty file");
  std::vector<std::string> cols;
  {
    std::istringstream hs(line);
    std::string tok;
    while (std::getline(hs, tok, ',')) {
      tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
      cols.push_back(tok);
    }
  }
  if (cols.size() < 2 || cols[0] != "hour" || cols[1] != "system_load_mw")
    throw std::runtime_error("annual series: header must start with hour,system_load_mw");
  std::vector<std::string> cf_keys;
  for (std::size_t c = 2; c < cols.size(); ++c) {
    if (cols[c].rfind("cf_", 0) != 0)
      throw std::runtime_error("annual series: column '" + cols[c] + "' must be named cf_<key>");
    cf_keys.push_back(cols[c].substr(3));
  }

  AnnualSeries s;
  for (const auto& k : cf_keys) s.capacity_factors[k] = {};
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    std::vector<double> vals;
    while (std::getline(ls, tok, ',')) vals.push_back(std::stod(tok));
    if (vals.size() != cols.size())
      throw std::runtime_error("annual series: row " + std::to_string(row + 2) +
                               " has wrong column count");
    s.system_load_mw.push_back(vals[1]);
    for (std::size_t c = 0; c < cf_keys.size(); ++c)
      s.capacity_factors[cf_keys[c]].push_back(vals[c + 2]);
    ++row;
  }
  auto errs = s.validate();
  if (!errs.empty()) throw grid::CaseError(std::move(errs));
  return s;
}

AnnualSeries read_annual_series_csv(const std::string& path) {
  return parse_annual_series_csv(grid::read_text_file(path));
}

std::vector<DayProfile> build_day_profiles(const AnnualSeries& series) {
  auto errs = series.validate();
  if (!errs.empty()) throw grid::CaseError(std::move(errs));
  const int days = series.n_days();

  // Raw features: 24-h load block then each capacity-factor block in key order.
  std::vector<const std::vector<double>*> blocks{&series.system_load_mw};
  for (const auto& [key, cf] : series.capacity_factors) blocks.push_back(&cf);
  const int dims = static_cast<int>(blocks.size()) * 24;

  std::vector<DayProfile> out(static_cast<std::size_t>(days));
  for (int d = 0; d < days; ++d) {
    out[static_cast<std::size_t>(d)].day = d + 1;
    auto& f = out[static_cast<std::size_t>(d)].features;
    f.resize(static_cast<std::size_t>(dims));
    int k = 0;
    for (const auto* b : blocks)
      for (int t = 0; t < 24; ++t) f[static_cast<std::size_t>(k++)] = (*b)[static_cast<std::size_t>(d * 24 + t)];
  }
  // Min-max normalize each dimension across days; constant dimensions -> 0.
  for (int k = 0; k < dims; ++k) {
    double lo = out[0].features[static_cast<std::size_t>(k)], hi = lo;
    for (const auto& p : out) {
      lo = std::min(lo, p.features[static_cast<std::size_t>(k)]);
      hi = std::max(hi, p.features[static_cast<std::size_t>(k)]);
    }
    const double span = hi - lo;
    for (auto& p : out)
      p.features[static_cast<std::size_t>(k)] =
          span > 0 ? (p.features[static_cast<std::size_t>(k)] - lo) / span : 0.0;
  }
  return out;
}

namespace {

double sqdist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

DaySelection select_representative_days(const std::vector<DayProfile>& profiles, int k_r) {
  const int n = static_cast<int>(profiles.size());
  if (k_r < 1 || k_r > n)
    throw std::invalid_argument("select_representative_days: k_r outside [1, n_days]");

  std::vector<int> picked;  // positions into profiles
  if (n == 1 || k_r >= 1) {
    // Seed: the farthest pair, ties by lowest (i, j).
    int bi = 0, bj = n > 1 ? 1 : 0;
    double best = -1.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double d = sqdist(profiles[static_cast<std::size_t>(i)].features,
                                profiles[static_cast<std::size_t>(j)].features);
        if (d > best + 1e-15) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    if (k_r == 1) {
      picked = {bi};
    } else {
      picked = {bi, bj};
    }
  }

  std::vector<char> chosen(static_cast<std::size_t>(n), 0);
  for (int p : picked) chosen[static_cast<std::size_t>(p)] = 1;
  std::vector<double> min_d(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double m = sqdist(profiles[static_cast<std::size_t>(i)].features,
                      profiles[static_cast<std::size_t>(picked[0])].features);
    for (std::size_t p = 1; p < picked.size(); ++p)
      m = std::min(m, sqdist(profiles[static_cast<std::size_t>(i)].features,
                             profiles[static_cast<std::size_t>(picked[p])].features));
    min_d[static_cast<std::size_t>(i)] = m;
  }
  while (static_cast<int>(picked.size()) < k_r) {
    int best = -1;
    double best_d = -1.0;
    for (int i = 0; i < n; ++i) {
      if (chosen[static_cast<std::size_t>(i)]) continue;
      if (min_d[static_cast<std::size_t>(i)] > best_d + 1e-15) {
        best_d = min_d[static_cast<std::size_t>(i)];
        best = i;
      }
    }
    picked.push_back(best);
    chosen[static_cast<std::size_t>(best)] = 1;
    for (int i = 0; i < n; ++i)
      min_d[static_cast<std::size_t>(i)] =
          std::min(min_d[static_cast<std::size_t>(i)],
                   sqdist(profiles[static_cast<std::size_t>(i)].features,
                          profiles[static_cast<std::size_t>(best)].features));
  }

  std::sort(picked.begin(), picked.end());
  DaySelection sel;
  for (int p : picked) sel.days.push_back(profiles[static_cast<std::size_t>(p)].day);
  sel.weights.assign(sel.days.size(), 1.0 / static_cast<double>(k_r));
  return sel;
}

std::vector<Scenario> materialize_scenarios(const grid::Network& net, const AnnualSeries& series,
                                            const DaySelection& days, int year,
                                            const grid::ScalingTable& table) {
  auto it = table.by_year.find(year);
  if (it == table.by_year.end())
    throw std::invalid_argument("materialize_scenarios: year " + std::to_string(year) +
                                " not in scaling table");
  const grid::ScalingRow& row = it->second;
  auto errs = series.validate();
  if (!errs.empty()) throw grid::CaseError(std::move(errs));

  double total_base = 0.0;
  for (const auto& b : net.buses) total_base += b.base_load_mw;
  if (total_base <= 0) throw std::invalid_argument("materialize_scenarios: zero system base load");

  const int n = net.n_buses();
  const int g_count = static_cast<int>(net.generators.size());
  std::vector<Scenario> out;
  out.reserve(days.days.size());
  for (std::size_t s = 0; s < days.days.size(); ++s) {
    const int day = days.days[s];
    if (day < 1 || day > series.n_days())
      throw std::invalid_argument("materialize_scenarios: day " + std::to_string(day) +
                                  " outside the series");
    Scenario sc;
    sc.id = static_cast<int>(s);
    sc.name = "day-" + std::to_string(day);
    sc.weight = days.weights[s];
    sc.T = 24;
    sc.bus_load_mw.assign(static_cast<std::size_t>(n), std::vector<double>(24, 0.0));
    sc.gen_max_mw.assign(static_cast<std::size_t>(g_count), std::vector<double>(24, 0.0));
    sc.gen_min_mw.assign(static_cast<std::size_t>(g_count), std::vector<double>(24, 0.0));

    for (int t = 0; t < 24; ++t) {
      const double sys = series.system_load_mw[static_cast<std::size_t>((day - 1) * 24 + t)];
      for (int i = 0; i < n; ++i) {
        const double share = net.buses[static_cast<std::size_t>(i)].base_load_mw / total_base;
        sc.bus_load_mw[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] =
            share * sys * row.load;
      }
    }
    for (int g = 0; g < g_count; ++g) {
      const auto& gen = net.generators[static_cast<std::size_t>(g)];
      const double cap = gen.capacity_mw * row.type_multiplier(gen.type);
      if (gen.renewable) {
        const std::vector<double>* cf = nullptr;
        const std::string site_key = "gen_" + std::to_string(gen.id);
        if (auto f = series.capacity_factors.find(site_key); f != series.capacity_factors.end())
          cf = &f->second;
        else if (auto f2 = series.capacity_factors.find(grid::to_string(gen.type));
                 f2 != series.capacity_factors.end())
          cf = &f2->second;
        if (cf == nullptr)
          throw std::invalid_argument("materialize_scenarios: no capacity-factor series for " +
                                      std::string(grid::to_string(gen.type)) + " generator " +
                                      std::to_string(gen.id));
        for (int t = 0; t < 24; ++t)
          sc.gen_max_mw[static_cast<std::size_t>(g)][static_cast<std::size_t>(t)] =
              cap * (*cf)[static_cast<std::size_t>((day - 1) * 24 + t)];
      } else {
        const double pmin = gen.min_output_mw * row.type_multiplier(gen.type);
        for (int t = 0; t < 24; ++t) {
          sc.gen_max_mw[static_cast<std::size_t>(g)][static_cast<std::size_t>(t)] = cap;
          sc.gen_min_mw[static_cast<std::size_t>(g)][static_cast<std::size_t>(t)] = pmin;
        }
      }
    }
    out.push_back(std::move(sc));
  }
  return out;
}

std::string selection_to_json(const DaySelection& sel) {
  nlohmann::json j;
  j["days"] = sel.days;
  j["weights"] = sel.weights;
  return j.dump(2);
}

DaySelection selection_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  DaySelection sel;
  sel.days = j.at("days").get<std::vector<int>>();
  sel.weights = j.at("weights").get<std::vector<double>>();
  return sel;
}

void validate_scenario_set(const grid::Network& net, const std::vector<Scenario>& scenarios) {
  if (scenarios.empty()) throw std::invalid_argument("scenario set is empty");
  double wsum = 0.0;
  for (const auto& s : scenarios) {
    if (s.weight <= 0) throw std::invalid_argument("scenario " + s.name + ": nonpositive weight");
    wsum += s.weight;
    if (static_cast<int>(s.bus_load_mw.size()) != net.n_buses() ||
        static_cast<int>(s.gen_max_mw.size()) != static_cast<int>(net.generators.size()))
      throw std::invalid_argument("scenario " + s.name + ": dimension mismatch with network");
    for (const auto& v : s.bus_load_mw)
      if (static_cast<int>(v.size()) != s.T)
        throw std::invalid_argument("scenario " + s.name + ": horizon mismatch");
  }
  if (std::fabs(wsum - 1.0) > 1e-9)
    throw std::invalid_argument("scenario weights sum to " + std::to_string(wsum) + ", not 1");
}

}  // namespace gridplan::scen
