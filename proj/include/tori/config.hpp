#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tori/torus.hpp"

namespace tori {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  // [torus]
  int dim = 2;
  int resolution = 64;
  // [time]
  int steps = 200;
  // [run]
  std::uint64_t seed = 20240611;
  // [verify]
  std::vector<std::string> groups = {"flux", "displacement", "hofer"};
  // [tolerance]: per-check overrides; `floor` raises every pinned tolerance.
  std::map<std::string, double> tolerance;
  double tolerance_floor = 0.0;
  // [scenario]
  double shear_amplitude = 1.0;
  Point translation{1.0, 0.0, 0.0, 0.0};
  double hamiltonian_amplitude = 0.1;
  int iterates = 10;
  int sequence_length = 6;
  int pairs = 200;
  int cocycle_pairs = 50;
  int cocycle_steps = 100;
  int survey_steps = 50;

  double tol(const std::string& check_id, double pinned) const;
  void validate() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string describe_config_keys();

}  // namespace tori
