#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/complex.h>
#include <pybind11/eigen.h>

#include <sstream>

#include "qdgate/errors.hpp"
#include "qdgate/experiments.hpp"
#include "qdgate/gate.hpp"

namespace py = pybind11;
using namespace qdgate;

namespace {

// json crosses the boundary as text; the Python side parses it
std::string dump(const nlohmann::json& j) { return round_floats(j).dump(); }

RunConfig config_from(const std::string& text) {
  return text.empty() ? RunConfig{} : RunConfig::from_json(nlohmann::json::parse(text));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Optically driven two-qubit phase gate in coupled quantum dots";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<StructuralError>(m, "StructuralError", PyExc_RuntimeError);
  py::register_exception<IntegrationError>(m, "IntegrationError", PyExc_RuntimeError);

  py::enum_<Spin>(m, "Spin").value("Down", Spin::Down).value("Up", Spin::Up);

  py::class_<PhysicalParams>(m, "PhysicalParams")
      .def(py::init<>())
      .def_readwrite("tunnel_period_ps", &PhysicalParams::tunnel_period_ps)
      .def_readwrite("splitting_radps", &PhysicalParams::splitting_radps)
      .def_readwrite("decay_rate_per_ps", &PhysicalParams::decay_rate_per_ps)
      .def_readwrite("field_tesla", &PhysicalParams::field_tesla)
      .def_readwrite("g_electron", &PhysicalParams::g_electron)
      .def_readwrite("g_hole", &PhysicalParams::g_hole)
      .def_readwrite("mixing_theta", &PhysicalParams::mixing_theta)
      .def_readwrite("mixing_phi", &PhysicalParams::mixing_phi)
      .def("validate", &PhysicalParams::validate);

  py::class_<GateOptions>(m, "GateOptions")
      .def(py::init<>())
      .def_readwrite("width_ps", &GateOptions::width_ps)
      .def_readwrite("eta", &GateOptions::eta)
      .def_readwrite("dissipation", &GateOptions::dissipation)
      .def_readwrite("pure", &GateOptions::pure)
      .def_readwrite("two_component", &GateOptions::two_component)
      .def_readwrite("dt_ps", &GateOptions::dt_ps)
      .def_readwrite("record_stride", &GateOptions::record_stride)
      .def_readwrite("excitation_cap", &GateOptions::excitation_cap)
      .def_readwrite("fail_hard", &GateOptions::fail_hard)
      .def_readwrite("record_figure_traces", &GateOptions::record_figure_traces);

  py::class_<GateResult>(m, "GateResult")
      .def_readonly("fidelity", &GateResult::fidelity)
      .def_readonly("leakage", &GateResult::leakage)
      .def_readonly("gate_time_ps", &GateResult::gate_time_ps)
      .def_property_readonly("rho", [](const GateResult& r) { return r.final_state.rho; })
      .def_property_readonly("labels", [](const GateResult& r) { return r.final_state.basis->labels(); })
      .def_property_readonly("times", [](const GateResult& r) { return r.trajectory.times; })
      .def_property_readonly("trajectory_csv", [](const GateResult& r) {
        std::ostringstream os;
        r.trajectory.write_csv(os);
        return os.str();
      })
      .def("to_json", [](const GateResult& r, const PhysicalParams& p, const GateOptions& o) {
        return dump(r.to_json(p, o));
      });

  py::class_<StepRow>(m, "StepRow")
      .def_readonly("step", &StepRow::step)
      .def_readonly("time_ps", &StepRow::time_ps)
      .def_readonly("dominant", &StepRow::dominant)
      .def_readonly("population", &StepRow::population)
      .def_readonly("phase_deg", &StepRow::phase_deg)
      .def_readonly("amplitude", &StepRow::amplitude);

  m.def("uniform_superposition", &uniform_superposition);
  m.def("qubit_basis_state", &qubit_basis_state);
  m.def("initial_state", &initial_state_from_name, py::arg("name"));
  m.def("basis_labels", [](int cap, bool field_on) { return enumerate_basis(cap, field_on)->labels(); },
        py::arg("excitation_cap") = 1, py::arg("field_on") = true);

  m.def("run_gate", &run_gate, py::arg("initial"), py::arg("params") = PhysicalParams{},
        py::arg("options") = GateOptions{}, py::call_guard<py::gil_scoped_release>());
  m.def("stepwise_state_table", &stepwise_state_table, py::arg("s1"), py::arg("s2"),
        py::arg("params") = PhysicalParams{}, py::arg("options") = GateOptions{});

  // config-driven entry points take the same json text as the CLI config file
  m.def("config_json", [](const std::string& text) { return config_from(text).to_json().dump(); },
        py::arg("config") = "");
  m.def("run_config", [](const std::string& text) {
    const RunConfig c = config_from(text);
    py::gil_scoped_release release;
    return dump(run_gate(initial_state_from_name(c.initial), c.params, c.options).to_json(c.params, c.options));
  }, py::arg("config") = "");
  m.def("sweep_fig5", [](const std::string& text) {
    std::vector<Fig5Row> rows;
    {
      py::gil_scoped_release release;
      rows = sweep_fig5(config_from(text));
    }
    py::list out;
    for (const auto& r : rows) out.append(py::make_tuple(r.field_tesla, r.inverse_width_thz, r.fidelity, r.error));
    return out;
  }, py::arg("config") = "");
  m.def("sweep_eta", [](const std::string& text) {
    std::vector<EtaRow> rows;
    {
      py::gil_scoped_release release;
      rows = sweep_eta(config_from(text));
    }
    py::list out;
    for (const auto& r : rows) out.append(py::make_tuple(r.eta, r.fidelity, r.error));
    return out;
  }, py::arg("config") = "");

  m.def("oracle_comparison", [](double dt) { return dump(oracle_comparison(dt).to_json()); },
        py::arg("dt") = 1e-3);
  m.def("pulse_solution", [](double s, double delta) { return dump(pulse_solution_json(s, delta)); },
        py::arg("width_ps"), py::arg("detuning_radps"));
  m.def("mev_to_radps", &units::mev_to_radps);
}
