// Command-line runner: verify, scenario NAME, save NAME FILE, load FILE.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>

#include "tori/config.hpp"
#include "tori/examples.hpp"
#include "tori/isotopy_io.hpp"
#include "tori/report.hpp"
#include "tori/suite.hpp"

namespace fs = std::filesystem;
using namespace tori;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Common {
  std::string config;
  std::string out = "tori-out";
  std::optional<std::uint64_t> seed;
  std::optional<int> resolution, steps;
  std::optional<double> tolerance;
};

void add_common(CLI::App* app, Common& c, bool out = true) {
  app->add_option("--config", c.config, "INI config file")->check(CLI::ExistingFile);
  if (out) app->add_option("--out", c.out, "output directory")->capture_default_str();
  app->add_option("--seed", c.seed, "random seed");
  app->add_option("--resolution", c.resolution, "grid points per axis");
  app->add_option("--steps", c.steps, "time steps K");
  app->add_option("--tolerance", c.tolerance, "floor applied to every pinned tolerance");
}

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (c.resolution) cfg.resolution = *c.resolution;
  if (c.steps) cfg.steps = *c.steps;
  if (c.tolerance) cfg.tolerance_floor = *c.tolerance;
  cfg.validate();
  return cfg;
}

int emit(const SuiteResult& r, const ExperimentConfig& cfg, const std::string& command, const std::string& out) {
  fs::create_directories(out);
  RunInfo info{command, cfg.seed, cfg.dim, cfg.resolution, cfg.steps};
  write_text(out + "/report.csv", report_csv(r.rows));
  write_text(out + "/report.json", report_json(r.rows, info));
  write_text(out + "/timing.csv", timing_csv(r.rows));
  if (!r.plots.empty()) write_text(out + "/plotdata.csv", plotdata_csv(r.plots));
  std::size_t failed = 0;
  for (const ReportRow& row : r.rows) {
    if (row.pass) continue;
    ++failed;
    std::fprintf(stderr, "FAIL %s: value %.6g, bound %.6g, tol %.3g %s\n", row.check_id.c_str(), row.value, row.bound,
                 row.tolerance, row.note.c_str());
  }
  std::printf("%s: %zu checks, %zu failed; reports in %s\n", command.c_str(), r.rows.size(), failed, out.c_str());
  return failed ? kExitFail : 0;
}

const std::map<std::string, TimeField (*)()>& save_examples() {
  static const std::map<std::string, TimeField (*)()> m = {
      {"shear", [] { return examples::standard_shear(); }},
      {"translation", [] { return examples::translation(Point{1.0, 0.0}); }},
      {"hamiltonian-shear", [] { return examples::hamiltonian_shear(1.0); }},
      {"hamiltonian-loop", [] { return examples::hamiltonian_loop(0.1); }},
      {"wiggle", [] { return examples::wiggle_loop(0.02); }},
  };
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flux, displacement energy and Hofer-like length checks on flat tori"};
  app.require_subcommand(1);

  Common verify_opts, scenario_opts, save_opts, load_opts;
  auto* verify = app.add_subcommand("verify", "run the full invariant suite");
  add_common(verify, verify_opts);

  std::string scenario_name;
  auto* scenario = app.add_subcommand("scenario", "run one named experiment");
  scenario->add_option("name", scenario_name, "scenario name")->required()->check(CLI::IsMember(scenario_names()));
  add_common(scenario, scenario_opts);

  std::string example, save_path;
  auto* save = app.add_subcommand("save", "integrate an example flow and store it");
  std::vector<std::string> example_names;
  for (const auto& [k, _] : save_examples()) example_names.push_back(k);
  save->add_option("example", example, "example flow")->required()->check(CLI::IsMember(example_names));
  save->add_option("file", save_path, "output file")->required();
  add_common(save, save_opts, false);

  std::string load_path;
  auto* load = app.add_subcommand("load", "read a stored isotopy and print its header");
  load->add_option("file", load_path, "input file")->required()->check(CLI::ExistingFile);
  add_common(load, load_opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*verify) {
      const ExperimentConfig cfg = resolve(verify_opts);
      return emit(run_verify(cfg), cfg, "verify", verify_opts.out);
    }
    if (*scenario) {
      const ExperimentConfig cfg = resolve(scenario_opts);
      return emit(run_scenario(scenario_name, cfg), cfg, "scenario " + scenario_name, scenario_opts.out);
    }
    if (*save) {
      const ExperimentConfig cfg = resolve(save_opts);
      const FlatTorus m(2, cfg.resolution);
      save_isotopy(flow(save_examples().at(example)(), cfg.steps, m), save_path);
      std::printf("saved %s (N=%d, K=%d) to %s\n", example.c_str(), cfg.resolution, cfg.steps, save_path.c_str());
      return 0;
    }
    if (*load) {
      const int target = load_opts.resolution.value_or(0);
      const LoadResult r = load_isotopy(load_path, target);
      nlohmann::ordered_json j;
      j["provenance"] = r.path.provenance;
      j["dim"] = r.path.torus.dim();
      j["source_n"] = r.source_n;
      j["n"] = r.path.torus.n();
      j["slices"] = r.path.size();
      j["resampled"] = r.resampled;
      j["roundtrip_error"] = r.roundtrip_error;
      std::cout << j.dump(2) << '\n';
      return 0;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFail;
  }
  return kExitUsage;
}
