#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "gridplan/grid/model.hpp"

namespace gridplan::grid {

// Thrown by the loaders; carries every defect found, each with its location.
class CaseError : public std::runtime_error {
 public:
  explicit CaseError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

// Case file: JSON with top-level keys buses, branches, generators, slack_bus.
Network load_case(const std::string& path);
Network parse_case(const std::string& json_text);

CostConfig load_cost_config(const std::string& path);
CostConfig parse_cost_config(const std::string& json_text);
std::string cost_config_to_json(const CostConfig& costs);

ScalingTable load_scaling_table(const std::string& path);
ScalingTable parse_scaling_table(const std::string& json_text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace gridplan::grid
