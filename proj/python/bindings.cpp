#include "pauli_scft/atom_model.hpp"
#include "pauli_scft/fields.hpp"
#include "pauli_scft/report.hpp"
#include "pauli_scft/scf_engine.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace pscft;

namespace {

std::string mixer_name(const ScfConfig& c) { return c.mixer == Mixer::anderson ? "anderson" : "linear"; }
std::string init_name(const ScfConfig& c) { return c.init == InitialGuess::coulomb ? "coulomb" : "shells"; }

// keyword overrides go through the same parser as config files
ScfConfig config_from_kwargs(const py::kwargs& kwargs) {
  ScfConfig cfg;
  for (const auto& [key, value] : kwargs) {
    const std::string k = py::str(key);
    std::string v;
    if (py::isinstance<py::list>(value) || py::isinstance<py::tuple>(value)) {
      for (const auto& item : value) v += std::string(py::str(item)) + ",";
    } else {
      v = py::str(value);
    }
    apply_setting(cfg, k, v);
  }
  return cfg;
}

py::dict energy_dict(const EnergyBreakdown& e) {
  py::dict d;
  d["free_energy"] = e.free_energy;
  d["binding"] = e.binding;
  d["external"] = e.external;
  d["electron_electron"] = e.electron_electron;
  d["pauli"] = e.pauli;
  d["ground_state_sum"] = e.ground_state_sum;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Orbital-free ring-polymer SCFT for neutral atoms H-Ar";

  py::register_exception<ScfError>(m, "ScfError", PyExc_RuntimeError);

  py::class_<ScfConfig>(m, "ScfConfig")
      .def(py::init<>())
      .def(py::init(&config_from_kwargs))
      .def_readwrite("beta_schedule", &ScfConfig::beta_schedule)
      .def_readwrite("radius", &ScfConfig::radius)
      .def_readwrite("modes", &ScfConfig::modes)
      .def_readwrite("mixing", &ScfConfig::mixing)
      .def_readwrite("tol", &ScfConfig::tol)
      .def_readwrite("max_iters", &ScfConfig::max_iters)
      .def_readwrite("anderson_window", &ScfConfig::anderson_window)
      .def_property(
          "mixer", &mixer_name, [](ScfConfig& c, const std::string& v) { apply_setting(c, "mixer", v); })
      .def_property(
          "init", &init_name, [](ScfConfig& c, const std::string& v) { apply_setting(c, "init", v); })
      .def_property_readonly("beta_final", &ScfConfig::beta_final)
      .def("validate", &ScfConfig::validate)
      .def("__repr__", [](const ScfConfig& c) {
        return "ScfConfig(beta_final=" + std::to_string(c.beta_final()) + ", radius=" + std::to_string(c.radius) +
               ", modes=" + std::to_string(c.modes) + ", mixer='" + mixer_name(c) + "')";
      });

  m.def(
      "load_config", [](const std::string& text) { return load_config(text); }, py::arg("text"),
      "Parse key=value lines or a JSON object.");

  py::class_<DensityProfile>(m, "DensityProfile")
      .def_readonly("r", &DensityProfile::r)
      .def_readonly("n_total", &DensityProfile::n_total)
      .def_readonly("rad_density", &DensityProfile::rad_density)
      .def_readonly("groups", &DensityProfile::groups)
      .def("__len__", &DensityProfile::size)
      .def("to_csv", &density_csv)
      .def("electron_count", &profile_electron_count)
      .def("peak_count", py::overload_cast<const DensityProfile&, double>(&shell_peak_count),
           py::arg("relative_floor") = 1e-4);

  m.def("parse_density_csv", &parse_density_csv, py::arg("text"));

  py::class_<StageReport>(m, "StageReport")
      .def_readonly("beta", &StageReport::beta)
      .def_readonly("iterations", &StageReport::iterations)
      .def_readonly("residual", &StageReport::residual)
      .def_readonly("free_energy", &StageReport::free_energy);

  py::class_<RunReport>(m, "RunReport")
      .def_readonly("symbol", &RunReport::symbol)
      .def_readonly("charge", &RunReport::charge)
      .def_readonly("config", &RunReport::config)
      .def_readonly("modes", &RunReport::modes)
      .def_readonly("converged", &RunReport::converged)
      .def_readonly("error", &RunReport::error)
      .def_readonly("binding", &RunReport::binding)
      .def_readonly("nist", &RunReport::nist)
      .def_readonly("paper_scft", &RunReport::paper_scft)
      .def_readonly("pct_diff", &RunReport::pct_diff)
      .def_readonly("stages", &RunReport::stages)
      .def_readonly("final_residual", &RunReport::final_residual)
      .def_readonly("wall_seconds", &RunReport::wall_seconds)
      .def_property_readonly("energy", [](const RunReport& r) { return energy_dict(r.energy); })
      .def("to_json", &report_to_json, py::arg("indent") = 2)
      .def_static("from_json", &report_from_json, py::arg("text"));

  m.def(
      "run_element",
      [](const std::string& symbol, const ScfConfig& cfg, int samples) {
        DensityProfile profile;
        RunReport rep;
        {
          py::gil_scoped_release release;
          rep = run_element(symbol, cfg, &profile, samples);
        }
        return py::make_tuple(rep, profile);
      },
      py::arg("symbol"), py::arg("config") = ScfConfig{}, py::arg("samples") = 512,
      "Solve one atom; returns (RunReport, DensityProfile). Failures are recorded in the report.");

  m.def("compare_table", &compare_table, py::arg("reports"));
  m.def("summary_table", &summary_table, py::arg("reports"));
  m.def("reference_table_csv", &reference_table_csv);
  m.def(
      "shell_peak_count",
      [](const Eigen::VectorXd& rad, double floor) { return shell_peak_count(rad, floor); },
      py::arg("rad_density"), py::arg("relative_floor") = 1e-4);
  m.def("pct_diff", &pct_diff, py::arg("binding"), py::arg("nist"));
  m.def("default_modes", &default_modes, py::arg("charge"), py::arg("radius") = 15.0);
  m.def("pauli_strength", &pauli_strength);
  m.def("shell_groups", &shell_groups, py::arg("charge"));
  m.def("atomic_number", [](const std::string& s) { return atomic_number(s); }, py::arg("symbol"));
  m.def("element_symbol", [](int z) { return std::string(element_symbol(z)); }, py::arg("charge"));
}
