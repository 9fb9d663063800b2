#include "gridplan/grid/case_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gridplan::grid {

using nlohmann::json;

CaseError::CaseError(std::vector<std::string> errors)
    : std::runtime_error([&errors] {
        std::string msg = "case validation failed:";
        for (const auto& e : errors) msg += "\n  " + e;
        return msg;
      }()),
      errors_(std::move(errors)) {}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

namespace {

double num_or(const json& j, const char* key, double dflt) {
  auto it = j.find(key);
  return it == j.end() ? dflt : it->get<double>();
}

}  // namespace

Network parse_case(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw CaseError({std::string("JSON parse error: ") + e.what()});
  }
  std::vector<std::string> errs;
  Network net;
  net.mva_base = num_or(j, "mva_base", 100.0);
  if (!j.contains("slack_bus")) errs.push_back("missing top-level key slack_bus");
  else net.slack_bus = j["slack_bus"].get<int>();

  for (const char* key : {"buses", "branches", "generators"})
    if (!j.contains(key) || !j[key].is_array())
      errs.push_back(std::string("missing or non-array top-level key ") + key);
  if (!errs.empty()) throw CaseError(std::move(errs));

  try {
    for (const auto& jb : j["buses"]) {
      Bus b;
      b.id = jb.at("id").get<int>();
      b.base_load_mw = num_or(jb, "base_load_mw", 0.0);
      b.storage_candidate = jb.value("storage_candidate", false);
      b.max_storage_units = jb.value("max_storage_units", 0);
      b.storage_unit_cost_per_mwh = num_or(jb, "storage_unit_cost_per_mwh", std::nan(""));
      b.baseline_storage_mwh = num_or(jb, "baseline_storage_mwh", 0.0);
      net.buses.push_back(b);
    }
    for (const auto& jb : j["branches"]) {
      Branch br;
      br.id = jb.at("id").get<int>();
      br.from_bus = jb.at("from_bus").get<int>();
      br.to_bus = jb.at("to_bus").get<int>();
      br.reactance_pu = jb.at("reactance_pu").get<double>();
      br.thermal_limit_mw = jb.at("thermal_limit_mw").get<double>();
      br.upgrade_increment_mw = num_or(jb, "upgrade_increment_mw", 0.0);
      br.max_upgrade_level = jb.value("max_upgrade_level", 0);
      br.length_km = num_or(jb, "length_km", 0.0);
      br.upgrade_cost_per_level = num_or(jb, "upgrade_cost_per_level", std::nan(""));
      net.branches.push_back(br);
    }
    for (const auto& jg : j["generators"]) {
      Generator g;
      g.id = jg.at("id").get<int>();
      g.bus = jg.at("bus").get<int>();
      g.type = gen_type_from_string(jg.value("type", std::string("other")));
      g.renewable = jg.value("renewable", g.type == GenType::Solar || g.type == GenType::Wind);
      g.capacity_mw = jg.at("capacity_mw").get<double>();
      g.marginal_cost_per_mwh = num_or(jg, "marginal_cost_per_mwh", 0.0);
      g.min_output_mw = num_or(jg, "min_output_mw", 0.0);
      net.generators.push_back(g);
    }
  } catch (const json::exception& e) {
    throw CaseError({std::string("record parse error: ") + e.what()});
  }

  auto verrs = net.validate();
  if (!verrs.empty()) throw CaseError(std::move(verrs));
  return net;
}

Network load_case(const std::string& path) { return parse_case(read_text_file(path)); }

CostConfig parse_cost_config(const std::string& json_text) {
  json j = json::parse(json_text);
  CostConfig c;
  c.line_cost_per_mw_km = num_or(j, "line_cost_per_mw_km", c.line_cost_per_mw_km);
  c.storage_cost_per_mwh = num_or(j, "storage_cost_per_mwh", c.storage_cost_per_mwh);
  c.storage_throughput_cost_per_mwh =
      num_or(j, "storage_throughput_cost_per_mwh", c.storage_throughput_cost_per_mwh);
  if (j.contains("shed_penalty_per_mwh") && !j["shed_penalty_per_mwh"].is_null())
    c.shed_penalty_per_mwh = j["shed_penalty_per_mwh"].get<double>();
  c.storage_unit_mwh = num_or(j, "storage_unit_mwh", c.storage_unit_mwh);
  c.storage_duration_h = num_or(j, "storage_duration_h", c.storage_duration_h);
  c.efficiency = num_or(j, "efficiency", c.efficiency);
  auto errs = c.validate();
  if (!errs.empty()) throw CaseError(std::move(errs));
  return c;
}

CostConfig load_cost_config(const std::string& path) {
  return parse_cost_config(read_text_file(path));
}

std::string cost_config_to_json(const CostConfig& c) {
  json j;
  j["line_cost_per_mw_km"] = c.line_cost_per_mw_km;
  j["storage_cost_per_mwh"] = c.storage_cost_per_mwh;
  j["storage_throughput_cost_per_mwh"] = c.storage_throughput_cost_per_mwh;
  if (c.shed_penalty_per_mwh) j["shed_penalty_per_mwh"] = *c.shed_penalty_per_mwh;
  else j["shed_penalty_per_mwh"] = nullptr;
  j["storage_unit_mwh"] = c.storage_unit_mwh;
  j["storage_duration_h"] = c.storage_duration_h;
  j["efficiency"] = c.efficiency;
  return j.dump(2);
}

ScalingTable parse_scaling_table(const std::string& json_text) {
  json j = json::parse(json_text);
  ScalingTable t;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const int year = std::stoi(it.key());
    ScalingRow row;
    const json& jr = it.value();
    row.load = num_or(jr, "load", 1.0);
    for (const char* ty : {"coal", "gas", "nuclear", "solar", "wind", "other"})
      if (jr.contains(ty)) row.by_type[gen_type_from_string(ty)] = jr[ty].get<double>();
    for (const auto& [gt, f] : row.by_type)
      if (!(f > 0))
        throw CaseError({"year " + std::to_string(year) + ": nonpositive multiplier for " +
                         std::string(to_string(gt))});
    if (!(row.load > 0))
      throw CaseError({"year " + std::to_string(year) + ": nonpositive load multiplier"});
    t.by_year[year] = std::move(row);
  }
  return t;
}

ScalingTable load_scaling_table(const std::string& path) {
  return parse_scaling_table(read_text_file(path));
}

}  // namespace gridplan::grid
