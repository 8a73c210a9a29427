#include "tori/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace tori {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::json json_num(double v) {
  if (std::isfinite(v)) return v;
  return num(v);
}

}  // namespace

std::string to_string(Comparison c) {
  switch (c) {
    case Comparison::le: return "le";
    case Comparison::ge: return "ge";
    case Comparison::within: return "within";
    case Comparison::flag: return "flag";
  }
  return "?";
}

bool evaluate(const ReportRow& r) {
  if (std::isnan(r.value)) return false;
  switch (r.comparison) {
    case Comparison::le: return r.value <= r.bound + r.tolerance;
    case Comparison::ge: return r.value >= r.bound - r.tolerance;
    case Comparison::within: return std::abs(r.value - r.bound) <= r.tolerance;
    case Comparison::flag: return r.value != 0.0;
  }
  return false;
}

ReportRow make_row(std::string id, std::string anchor, double value, Comparison cmp, double bound, double tol,
                   std::string note) {
  ReportRow r;
  r.check_id = std::move(id);
  r.anchor = std::move(anchor);
  r.value = value;
  r.comparison = cmp;
  r.bound = bound;
  r.tolerance = tol;
  r.note = std::move(note);
  r.pass = evaluate(r);
  return r;
}

void sort_rows(std::vector<ReportRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ReportRow& a, const ReportRow& b) { return a.check_id < b.check_id; });
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream s;
  s << "check_id,anchor,value,bound,tolerance,comparison,pass,note\n";
  for (const ReportRow& r : rows)
    s << csv_field(r.check_id) << ',' << csv_field(r.anchor) << ',' << num(r.value) << ',' << num(r.bound) << ','
      << num(r.tolerance) << ',' << to_string(r.comparison) << ',' << (r.pass ? "true" : "false") << ','
      << csv_field(r.note) << '\n';
  return s.str();
}

std::string report_json(const std::vector<ReportRow>& rows, const RunInfo& info) {
  nlohmann::ordered_json j;
  j["schema"] = "tori-report/1";
  j["run"] = {{"command", info.command},
              {"seed", info.seed},
              {"dim", info.dim},
              {"resolution", info.resolution},
              {"steps", info.steps}};
  std::size_t passed = 0;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const ReportRow& r : rows) {
    passed += r.pass;
    nlohmann::ordered_json o;
    o["check_id"] = r.check_id;
    o["anchor"] = r.anchor;
    o["value"] = json_num(r.value);
    o["bound"] = json_num(r.bound);
    o["tolerance"] = json_num(r.tolerance);
    o["comparison"] = to_string(r.comparison);
    o["pass"] = r.pass;
    o["note"] = r.note;
    arr.push_back(o);
  }
  j["summary"] = {{"total", rows.size()}, {"passed", passed}, {"failed", rows.size() - passed}};
  j["rows"] = arr;
  return j.dump(2) + "\n";
}

std::string timing_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream s;
  s << "check_id,runtime_ms\n";
  for (const ReportRow& r : rows) s << csv_field(r.check_id) << ',' << num(r.runtime_ms) << '\n';
  return s.str();
}

std::string plotdata_csv(const std::vector<PlotTable>& tables) {
  std::ostringstream s;
  s << "table,column,row,value\n";
  for (const PlotTable& t : tables)
    for (std::size_t i = 0; i < t.rows.size(); ++i)
      for (std::size_t c = 0; c < t.columns.size() && c < t.rows[i].size(); ++c)
        s << csv_field(t.name) << ',' << csv_field(t.columns[c]) << ',' << i << ',' << num(t.rows[i][c]) << '\n';
  return s.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path);
}

}  // namespace tori
