#pragma once

#include <string>
#include <vector>

namespace tori {

enum class Comparison { le, ge, within, flag };
std::string to_string(Comparison c);

// pass <=> value <= bound + tol (le), value >= bound - tol (ge), |value - bound| <= tol (within),
// value != 0 (flag).
struct ReportRow {
  std::string check_id;
  std::string anchor;
  double value = 0.0;
  double bound = 0.0;
  double tolerance = 0.0;
  Comparison comparison = Comparison::le;
  bool pass = false;
  std::string note;
  double runtime_ms = 0.0;  // kept out of report.csv / report.json
};

ReportRow make_row(std::string id, std::string anchor, double value, Comparison cmp, double bound, double tol,
                   std::string note = {});
bool evaluate(const ReportRow& r);

struct PlotTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct RunInfo {
  std::string command;
  unsigned long long seed = 0;
  int dim = 2, resolution = 64, steps = 200;
};

void sort_rows(std::vector<ReportRow>& rows);
std::string report_csv(const std::vector<ReportRow>& rows);
std::string report_json(const std::vector<ReportRow>& rows, const RunInfo& info);
std::string timing_csv(const std::vector<ReportRow>& rows);
std::string plotdata_csv(const std::vector<PlotTable>& tables);

void write_text(const std::string& path, const std::string& text);

}  // namespace tori
