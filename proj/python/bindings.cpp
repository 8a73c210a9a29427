#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tori/config.hpp"
#include "tori/displacement.hpp"
#include "tori/examples.hpp"
#include "tori/flux.hpp"
#include "tori/hofer.hpp"
#include "tori/isotopy_io.hpp"
#include "tori/path_algebra.hpp"
#include "tori/report.hpp"
#include "tori/suite.hpp"

namespace py = pybind11;
using namespace tori;

namespace {

Point to_point(const std::vector<double>& v) {
  if (v.empty() || v.size() > kMaxDim) throw std::invalid_argument("point needs 1 to 4 coordinates");
  Point p{};
  for (std::size_t i = 0; i < v.size(); ++i) p[i] = v[i];
  return p;
}

std::vector<double> from_point(const Point& p, int dim) { return {p.begin(), p.begin() + dim}; }

TimeField named_example(const std::string& name, double amp) {
  if (name == "shear") return examples::standard_shear();
  if (name == "translation") return examples::translation(Point{amp, 0.0});
  if (name == "hamiltonian-shear") return examples::hamiltonian_shear(amp);
  if (name == "hamiltonian-loop") return examples::hamiltonian_loop(amp);
  if (name == "x-shear") return examples::x_shear(amp);
  if (name == "wiggle") return examples::wiggle_loop(amp);
  throw std::invalid_argument("unknown example '" + name + "'");
}

py::dict row_dict(const ReportRow& r) {
  py::dict d;
  d["check_id"] = r.check_id;
  d["anchor"] = r.anchor;
  d["value"] = r.value;
  d["bound"] = r.bound;
  d["tolerance"] = r.tolerance;
  d["comparison"] = to_string(r.comparison);
  d["pass"] = r.pass;
  d["note"] = r.note;
  d["runtime_ms"] = r.runtime_ms;
  return d;
}

py::dict suite_dict(const SuiteResult& s, const ExperimentConfig& cfg, const std::string& command) {
  py::list rows;
  for (const ReportRow& r : s.rows) rows.append(row_dict(r));
  py::dict d;
  d["rows"] = rows;
  d["all_pass"] = s.all_pass();
  d["csv"] = report_csv(s.rows);
  d["json"] = report_json(s.rows, RunInfo{command, cfg.seed, cfg.dim, cfg.resolution, cfg.steps});
  d["plotdata"] = plotdata_csv(s.plots);
  return d;
}

}  // namespace

PYBIND11_MODULE(_tori, m) {
  m.doc() = "Flux, displacement energy and Hofer-like lengths on flat tori";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);

  py::class_<FlatTorus>(m, "FlatTorus")
      .def(py::init<int, int>(), py::arg("dim") = 2, py::arg("n") = 64)
      .def_property_readonly("dim", &FlatTorus::dim)
      .def_property_readonly("n", &FlatTorus::n)
      .def_property_readonly("size", &FlatTorus::size);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("dim", &ExperimentConfig::dim)
      .def_readwrite("resolution", &ExperimentConfig::resolution)
      .def_readwrite("steps", &ExperimentConfig::steps)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("groups", &ExperimentConfig::groups)
      .def_readwrite("tolerance", &ExperimentConfig::tolerance)
      .def_readwrite("tolerance_floor", &ExperimentConfig::tolerance_floor)
      .def_readwrite("shear_amplitude", &ExperimentConfig::shear_amplitude)
      .def_readwrite("hamiltonian_amplitude", &ExperimentConfig::hamiltonian_amplitude)
      .def_readwrite("iterates", &ExperimentConfig::iterates)
      .def_readwrite("sequence_length", &ExperimentConfig::sequence_length)
      .def_readwrite("pairs", &ExperimentConfig::pairs)
      .def_readwrite("cocycle_pairs", &ExperimentConfig::cocycle_pairs)
      .def_readwrite("cocycle_steps", &ExperimentConfig::cocycle_steps)
      .def_readwrite("survey_steps", &ExperimentConfig::survey_steps)
      .def("validate", &ExperimentConfig::validate);
  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("load_config", &load_config, py::arg("path"));

  py::class_<Isotopy>(m, "Isotopy")
      .def_property_readonly("torus", [](const Isotopy& p) { return p.torus; })
      .def_property_readonly("provenance", [](const Isotopy& p) { return p.provenance; })
      .def_property_readonly("times", &Isotopy::times)
      .def("__len__", &Isotopy::size)
      .def("apply", [](const Isotopy& p, double t, const std::vector<double>& x) {
        return from_point(p.eval(t, to_point(x)), p.torus.dim());
      }, py::arg("t"), py::arg("x"));

  m.def("example_flow", [](const std::string& name, int n, int steps, double amp) {
    return flow(named_example(name, amp), steps, FlatTorus(2, n));
  }, py::arg("name"), py::arg("n") = 32, py::arg("steps") = 100, py::arg("amplitude") = 1.0,
        "Integrate a named example field: shear, translation, hamiltonian-shear, hamiltonian-loop, x-shear, wiggle.");
  m.def("identity_path", &identity_path, py::arg("torus"), py::arg("steps"));
  m.def("compose", py::overload_cast<const Isotopy&, const Isotopy&>(&compose));
  m.def("inverse", [](const Isotopy& p) { return inverse(p); });
  m.def("concat_left", [](const Isotopy& psi, const Isotopy& phi) { return concat_left(psi, phi); });
  m.def("concat_right", [](const Isotopy& phi, const Isotopy& psi) { return concat_right(phi, psi); });
  m.def("iterate", [](const Isotopy& phi, int l) { return iterate(phi, l); });

  m.def("flux", [](const Isotopy& p) { return flux_class(p).pairings; },
        "Pairings of the flux class with the basis [dx_i].");
  m.def("winding", [](const Isotopy& p, const std::vector<double>& x) { return orbit_of(p, to_point(x)).winding; });
  m.def("energy", [](const Isotopy& p, const std::vector<double>& h, const std::vector<double>& base) {
    return energy(p, h, to_point(base)).value;
  }, py::arg("isotopy"), py::arg("h"), py::arg("base"));
  m.def("lengths", [](const Isotopy& p) {
    const LengthReport r = lengths(p);
    py::dict d;
    d["l1"] = r.l1_length;
    d["linf"] = r.linf_length;
    d["hofer_l1"] = r.hofer_l1;
    d["hofer_linf"] = r.hofer_linf;
    return d;
  });

  m.def("save_isotopy", &save_isotopy, py::arg("isotopy"), py::arg("path"));
  m.def("load_isotopy", [](const std::string& path, int n) { return load_isotopy(path, n).path; }, py::arg("path"),
        py::arg("n") = 0);

  m.def("scenario_names", &scenario_names);
  m.def("run_verify", [](const ExperimentConfig& cfg) {
    cfg.validate();
    SuiteResult r;
    {
      py::gil_scoped_release release;
      r = run_verify(cfg);
    }
    return suite_dict(r, cfg, "verify");
  }, py::arg("config") = ExperimentConfig{});
  m.def("run_scenario", [](const std::string& name, const ExperimentConfig& cfg) {
    cfg.validate();
    SuiteResult r;
    {
      py::gil_scoped_release release;
      r = run_scenario(name, cfg);
    }
    return suite_dict(r, cfg, "scenario " + name);
  }, py::arg("name"), py::arg("config") = ExperimentConfig{});
}
