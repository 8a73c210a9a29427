// Runs the default verify suite twice and prints one PASS/FAIL line per acceptance criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tori/config.hpp"
#include "tori/report.hpp"
#include "tori/suite.hpp"

using namespace tori;

namespace {

struct RowIndex {
  std::map<std::string, const ReportRow*> by_id;
  explicit RowIndex(const std::vector<ReportRow>& rows) {
    for (const ReportRow& r : rows) by_id[r.check_id] = &r;
  }
  const ReportRow* operator[](const std::string& id) const {
    auto it = by_id.find(id);
    return it == by_id.end() ? nullptr : it->second;
  }
};

struct Criterion {
  int number;
  std::string title;
  bool pass = true;
  std::string detail;

  // Row must exist, pass its own comparison and satisfy `pred` on its value.
  void need(const RowIndex& ix, const std::string& id, const std::function<bool(const ReportRow&)>& pred,
            const char* what) {
    const ReportRow* r = ix[id];
    char buf[256];
    if (!r) {
      pass = false;
      std::snprintf(buf, sizeof buf, "%s missing; ", id.c_str());
    } else {
      const bool ok = r->pass && pred(*r);
      pass = pass && ok;
      std::snprintf(buf, sizeof buf, "%s=%.3g%s%s; ", id.c_str(), r->value, ok ? "" : " violates ", ok ? "" : what);
    }
    detail += buf;
  }
  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    detail += what + (ok ? "; " : " (violated); ");
  }
};

std::function<bool(const ReportRow&)> le(double b) {
  return [b](const ReportRow& r) { return r.value <= b; };
}
std::function<bool(const ReportRow&)> ge(double b) {
  return [b](const ReportRow& r) { return r.value >= b; };
}
std::function<bool(const ReportRow&)> near(double target, double tol) {
  return [target, tol](const ReportRow& r) { return std::abs(r.value - target) <= tol; };
}
std::function<bool(const ReportRow&)> positive() {
  return [](const ReportRow& r) { return r.value > 0.0; };
}
std::function<bool(const ReportRow&)> flagged() {
  return [](const ReportRow& r) { return r.value != 0.0; };
}

double block_seconds(const std::vector<ReportRow>& rows, const std::string& prefix) {
  double ms = 0.0;
  for (const ReportRow& r : rows)
    if (r.check_id.rfind(prefix, 0) == 0) ms += r.runtime_ms;
  return ms / 1000.0;
}

}  // namespace

int main() {
  const ExperimentConfig cfg;  // unit T^2, N = 64, K = 200
  cfg.validate();
  const RunInfo info{"verify", cfg.seed, cfg.dim, cfg.resolution, cfg.steps};

  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const SuiteResult first = run_verify(cfg);
  const double run_seconds = std::chrono::duration<double>(clock::now() - t0).count();
  const SuiteResult second = run_verify(cfg);

  const RowIndex ix(first.rows);
  std::vector<Criterion> out;
  auto add = [&](int n, const std::string& title) -> Criterion& {
    out.push_back(Criterion{n, title, true, {}});
    return out.back();
  };

  {
    Criterion& c = add(1, "cocycle vanishing");
    c.need(ix, "flux.cocycle.max", le(1e-5), "<= 1e-5");
    c.need(ix, "flux.cocycle.refinement", ge(4.0), ">= 4x from N=32 to 64");
    const double s = block_seconds(first.rows, "flux.cocycle.");
    c.require(s < 30.0, "runtime " + std::to_string(s) + " s < 30 s");
  }
  {
    Criterion& c = add(2, "factorization through the flux (one-forms)");
    c.need(ix, "flux.factorization1.shear", le(1e-5), "<= 1e-5");
    c.need(ix, "flux.factorization1.translation", le(1e-5), "<= 1e-5");
  }
  {
    Criterion& c = add(3, "factorization on T^4 (product shear)");
    c.need(ix, "flux.factorization2.t4", le(1e-4), "<= 1e-4");
  }
  {
    Criterion& c = add(4, "energy decomposition");
    c.need(ix, "displacement.energy.decomposition", le(1e-5), "<= 1e-5");
    c.need(ix, "displacement.energy.shear", near(-0.5, 1e-4), "-0.5 +- 1e-4");
  }
  {
    Criterion& c = add(5, "quasi-morphism defect");
    c.need(ix, "displacement.defect.max", [](const ReportRow& r) { return r.bound == 2.0 && r.value < 2.0; },
           "< 2 A(M)^2 = 2");
    c.need(ix, "displacement.defect.exact_law", le(1e-5), "<= 1e-5");
  }
  {
    Criterion& c = add(6, "orbit homology");
    c.need(ix, "flux.loop_orbit.translation_value", near(1.0, 1e-6), "1 +- 1e-6");
    c.need(ix, "flux.loop_orbit.translation_spread", le(1e-6), "<= 1e-6");
    c.need(ix, "flux.loop_orbit.hamiltonian_windings", le(0.0), "all windings 0");
    c.need(ix, "flux.orbit_flux.contractible", le(1e-6), "<= 1e-6");
    c.need(ix, "flux.orbit_flux.noncontractible", le(1e-6), "<= 1e-6");
  }
  {
    Criterion& c = add(7, "order test");
    c.need(ix, "flux.order.winding", near(1.0, 0.0), "winding (1,0)");
    const ReportRow* w = ix["flux.order.winding"];
    c.require(w && w->note.find("(1,0)") != std::string::npos, "second winding component 0");
    c.need(ix, "flux.order.flux", le(1e-6), "flux (0.5, 0) +- 1e-6");
    c.need(ix, "flux.order.relation", le(1e-5), "<= 1e-5");
  }
  {
    Criterion& c = add(8, "separation");
    c.need(ix, "displacement.separation.hypothesis", flagged(), "d < delta_0");
    c.need(ix, "displacement.separation.margin", positive(), "> 0");
  }
  {
    Criterion& c = add(9, "deformation bound");
    for (const char* id : {"hofer.deformation.c0.1", "hofer.deformation.c0.5", "hofer.deformation.c2"})
      c.need(ix, id, positive(), "margin > 0");
    c.need(ix, "hofer.deformation.co1", le(0.0), "osc bound");
  }
  {
    Criterion& c = add(10, "iteration growth");
    c.require(cfg.iterates >= 10, "l = 1.." + std::to_string(cfg.iterates));
    c.need(ix, "hofer.growth.k0", near(1.0, 1e-9), "K_0 = 1");
    c.need(ix, "hofer.growth.ratio", le(1e-6), "|l_B/l - 1| <= 1e-6");
    c.need(ix, "hofer.growth.flux_linearity", le(1e-6), "<= 1e-6");
  }
  {
    Criterion& c = add(11, "length laws");
    c.need(ix, "hofer.concat.left_additivity", le(1e-9), "<= 1e-9");
    c.need(ix, "hofer.concat.left_linf", [](const ReportRow& r) { return r.value <= r.bound; }, "2.4 bound");
    c.need(ix, "hofer.concat.right_linf", [](const ReportRow& r) { return r.value <= r.bound + 1e-6; }, "2.4 bound");
    c.need(ix, "hofer.concat.cutoff_slope", le(1.201), "sup slope <= 1.201");
  }
  {
    Criterion& c = add(12, "norm comparison");
    for (const char* id : {"hofer.norm_comparison.zero_flux_c6", "hofer.norm_comparison.zero_flux_c28_8",
                           "hofer.norm_comparison.loop_corrected_c72_5", "hofer.norm_comparison.loop_corrected_c28_8"})
      c.need(ix, id, ge(0.0), "margin >= 0");
    const ReportRow* z = ix["hofer.norm_comparison.zero_flux_c6"];
    c.require(z && z->note.find("surrogates overestimate") != std::string::npos, "check direction documented");
  }
  {
    Criterion& c = add(13, "rigidity");
    c.need(ix, "flux.rigidity.hypothesis", flagged(), "hypothesis met");
    c.need(ix, "flux.rigidity.windings", le(0.0), "all windings 0");
  }
  {
    Criterion& c = add(14, "reproducibility");
    const bool csv = report_csv(first.rows) == report_csv(second.rows);
    const bool json = report_json(first.rows, info) == report_json(second.rows, info);
    const bool plots = plotdata_csv(first.plots) == plotdata_csv(second.plots);
    c.require(csv && json && plots, "report.csv, report.json and plotdata.csv byte-identical");
    c.require(run_seconds < 300.0, "suite " + std::to_string(run_seconds) + " s < 300 s");
  }

  int failed = 0;
  for (const Criterion& c : out) {
    std::printf("%s %2d %s: %s\n", c.pass ? "PASS" : "FAIL", c.number, c.title.c_str(), c.detail.c_str());
    failed += !c.pass;
  }
  std::size_t row_failures = 0;
  for (const ReportRow& r : first.rows) row_failures += !r.pass;
  std::printf("suite: %zu rows, %zu failed, %.1f s per run\n", first.rows.size(), row_failures, run_seconds);
  return failed ? 1 : 0;
}
