#include "tori/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace tori {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> k = {
      {"torus", {"dim", "resolution"}},
      {"time", {"steps"}},
      {"run", {"seed"}},
      {"verify", {"groups"}},
      {"scenario",
       {"shear_amplitude", "translation", "hamiltonian_amplitude", "iterates", "sequence_length", "pairs",
        "cocycle_pairs", "cocycle_steps", "survey_steps"}},
  };
  return k;
}

template <class T>
T as(const std::string& key, const std::string& raw) {
  std::istringstream s(raw);
  T v;
  if (!(s >> v) || !(s >> std::ws).eof()) throw ConfigError("invalid value for '" + key + "': " + raw);
  return v;
}

std::vector<std::string> split_list(const std::string& raw) {
  std::vector<std::string> out;
  std::stringstream s(raw);
  std::string item;
  while (std::getline(s, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

double ExperimentConfig::tol(const std::string& check_id, double pinned) const {
  auto it = tolerance.find(check_id);
  if (it != tolerance.end()) return it->second;
  return std::max(pinned, tolerance_floor);
}

void ExperimentConfig::validate() const {
  if (dim != 2 && dim != 4) throw ConfigError("torus.dim must be 2 or 4");
  if (resolution < 8 || resolution % 2) throw ConfigError("torus.resolution must be even and >= 8");
  if (steps < 50) throw ConfigError("time.steps must be >= 50");
  if (survey_steps < 50) throw ConfigError("scenario.survey_steps must be >= 50");
  if (cocycle_steps < 50) throw ConfigError("scenario.cocycle_steps must be >= 50");
  if (groups.empty()) throw ConfigError("verify.groups is empty");
  for (const auto& g : groups)
    if (g != "flux" && g != "displacement" && g != "hofer") throw ConfigError("unknown verify group '" + g + "'");
  if (iterates < 1) throw ConfigError("scenario.iterates must be >= 1");
  if (sequence_length < 2) throw ConfigError("scenario.sequence_length must be >= 2");
  if (pairs < 1 || cocycle_pairs < 1) throw ConfigError("scenario pair counts must be >= 1");
  if (tolerance_floor < 0.0) throw ConfigError("tolerance floor must be >= 0");
  for (const auto& [k, v] : tolerance)
    if (!(v >= 0.0)) throw ConfigError("tolerance for '" + k + "' must be >= 0");
}

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax error: ") + e.what());
  }
  ExperimentConfig c;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ConfigError("key '" + section + "' outside a section");
    for (const auto& [key, node] : body) {
      const std::string name = section + "." + key;
      const std::string raw = node.data();
      if (section == "tolerance") {
        if (key == "floor") c.tolerance_floor = as<double>(name, raw);
        else c.tolerance[key] = as<double>(name, raw);
        continue;
      }
      auto sec = known_keys().find(section);
      if (sec == known_keys().end()) throw ConfigError("unknown config section '" + section + "'");
      if (!sec->second.count(key)) throw ConfigError("unknown config key '" + name + "'");
      if (name == "torus.dim") c.dim = as<int>(name, raw);
      else if (name == "torus.resolution") c.resolution = as<int>(name, raw);
      else if (name == "time.steps") c.steps = as<int>(name, raw);
      else if (name == "run.seed") c.seed = as<std::uint64_t>(name, raw);
      else if (name == "verify.groups") c.groups = split_list(raw);
      else if (name == "scenario.shear_amplitude") c.shear_amplitude = as<double>(name, raw);
      else if (name == "scenario.hamiltonian_amplitude") c.hamiltonian_amplitude = as<double>(name, raw);
      else if (name == "scenario.iterates") c.iterates = as<int>(name, raw);
      else if (name == "scenario.sequence_length") c.sequence_length = as<int>(name, raw);
      else if (name == "scenario.pairs") c.pairs = as<int>(name, raw);
      else if (name == "scenario.cocycle_pairs") c.cocycle_pairs = as<int>(name, raw);
      else if (name == "scenario.cocycle_steps") c.cocycle_steps = as<int>(name, raw);
      else if (name == "scenario.survey_steps") c.survey_steps = as<int>(name, raw);
      else if (name == "scenario.translation") {
        const auto parts = split_list(raw);
        if (parts.empty() || parts.size() > 4) throw ConfigError("invalid value for '" + name + "': " + raw);
        c.translation = Point{};
        for (std::size_t i = 0; i < parts.size(); ++i) c.translation[i] = as<double>(name, parts[i]);
      }
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return parse_config(s.str());
}

std::string describe_config_keys() {
  std::ostringstream s;
  for (const auto& [sec, keys] : known_keys()) {
    s << '[' << sec << "]";
    for (const auto& k : keys) s << ' ' << k;
    s << '\n';
  }
  s << "[tolerance] floor <check_id>...\n";
  return s.str();
}

}  // namespace tori
