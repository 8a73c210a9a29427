#pragma once

#include <string>
#include <vector>

#include "tori/config.hpp"
#include "tori/report.hpp"

namespace tori {

struct SuiteResult {
  std::vector<ReportRow> rows;  // sorted by check id
  std::vector<PlotTable> plots;
  bool all_pass() const;
};

SuiteResult run_verify(const ExperimentConfig& cfg);
SuiteResult run_scenario(const std::string& name, const ExperimentConfig& cfg);
const std::vector<std::string>& scenario_names();

}  // namespace tori
