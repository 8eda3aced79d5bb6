#include "qdgate/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qdgate/errors.hpp"
#include "qdgate/lindblad.hpp"
#include "qdgate/pulses.hpp"
#include "qdgate/units.hpp"

namespace qdgate {

namespace {

using nlohmann::json;

const double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

double number(const json& j, const char* key) {
  if (!j.at(key).is_number()) throw ParameterError(std::string("config field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

bool boolean(const json& j, const char* key) {
  if (!j.at(key).is_boolean()) throw ParameterError(std::string("config field '") + key + "' must be a boolean");
  return j.at(key).get<bool>();
}

std::string string_field(const json& j, const char* key) {
  if (!j.at(key).is_string()) throw ParameterError(std::string("config field '") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

// "hbar": E/ħ; "h": E/h read as an angular rate.
double energy_to_rate(double mev, const std::string& conversion) {
  if (conversion == "hbar") return units::mev_to_radps(mev);
  if (conversion == "h") return units::mev_to_radps_ordinary(mev);
  throw ParameterError("unknown energy conversion '" + conversion + "' (expected 'hbar' or 'h')");
}

void apply_axis(Axis& axis, const json& j) {
  static const std::set<std::string> keys{"min", "max", "points"};
  for (const auto& [k, v] : j.items()) {
    if (!keys.count(k)) throw ParameterError("unknown axis field '" + k + "'");
  }
  if (j.contains("min")) axis.min = number(j, "min");
  if (j.contains("max")) axis.max = number(j, "max");
  if (j.contains("points")) {
    if (!j.at("points").is_number_integer()) throw ParameterError("axis points must be an integer");
    axis.points = j.at("points").get<int>();
  }
  axis.validate();
}

json axis_json(const Axis& a) { return {{"min", a.min}, {"max", a.max}, {"points", a.points}}; }

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json round_floats(json j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isfinite(v)) return std::strtod(format_number(v).c_str(), nullptr);
    return j;
  }
  if (j.is_structured()) {
    for (auto& item : j) item = round_floats(item);
  }
  return j;
}

void Axis::validate() const {
  if (points < 2) throw ParameterError("axis '" + name + "' needs at least 2 points");
  if (!(max > min)) throw ParameterError("axis '" + name + "' needs max > min");
}

std::vector<double> Axis::values() const {
  validate();
  std::vector<double> v(static_cast<std::size_t>(points));
  const double step = (max - min) / (points - 1);
  for (int i = 0; i < points; ++i) v[static_cast<std::size_t>(i)] = min + i * step;
  v.back() = max;
  return v;
}

void RunConfig::apply_json(const json& j) {
  static const std::set<std::string> keys{
      "T_ps", "tau_meV", "tau_conversion", "delta_meV", "delta_radps", "delta_conversion",
      "te_ns", "B_T", "ge", "gh", "theta_m", "phi_m", "s_ps", "eta", "dt_ps", "record_stride",
      "initial", "pure", "dissipation", "two_component", "excitation_cap", "threads", "fig5",
      "eta_sweep", "outputs"};
  if (!j.is_object()) throw ParameterError("config must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (!keys.count(k)) throw ParameterError("unknown config field '" + k + "'");
  }
  if (j.contains("T_ps") && j.contains("tau_meV")) {
    throw ParameterError("give either T_ps or tau_meV, not both");
  }
  if (j.contains("delta_meV") && j.contains("delta_radps")) {
    throw ParameterError("give either delta_meV or delta_radps, not both");
  }

  if (j.contains("T_ps")) params.tunnel_period_ps = number(j, "T_ps");
  if (j.contains("tau_meV")) {
    const std::string conv = j.contains("tau_conversion") ? string_field(j, "tau_conversion") : "hbar";
    const double tau = energy_to_rate(number(j, "tau_meV"), conv);
    if (!(tau > 0.0)) throw ParameterError("tau_meV must be > 0");
    params.tunnel_period_ps = units::kPi / (2.0 * tau);
  }
  if (j.contains("delta_meV")) {
    const std::string conv =
        j.contains("delta_conversion") ? string_field(j, "delta_conversion") : "hbar";
    params.splitting_radps = energy_to_rate(number(j, "delta_meV"), conv);
  }
  if (j.contains("delta_radps")) params.splitting_radps = number(j, "delta_radps");
  if (j.contains("te_ns")) {
    const double te = number(j, "te_ns");
    if (!(te > 0.0)) throw ParameterError("te_ns must be > 0");
    params.decay_rate_per_ps = 1.0 / units::ns_to_ps(te);
  }
  if (j.contains("B_T")) params.field_tesla = number(j, "B_T");
  if (j.contains("ge")) params.g_electron = number(j, "ge");
  if (j.contains("gh")) params.g_hole = number(j, "gh");
  if (j.contains("theta_m")) params.mixing_theta = number(j, "theta_m");
  if (j.contains("phi_m")) params.mixing_phi = number(j, "phi_m");

  if (j.contains("s_ps")) options.width_ps = number(j, "s_ps");
  if (j.contains("eta")) options.eta = number(j, "eta");
  if (j.contains("dt_ps")) options.dt_ps = number(j, "dt_ps");
  if (j.contains("record_stride")) {
    const double stride = number(j, "record_stride");
    if (!(stride >= 1.0)) throw ParameterError("record_stride must be >= 1");
    options.record_stride = static_cast<std::size_t>(stride);
  }
  if (j.contains("pure")) options.pure = boolean(j, "pure");
  if (j.contains("dissipation")) options.dissipation = boolean(j, "dissipation");
  if (j.contains("two_component")) options.two_component = boolean(j, "two_component");
  if (j.contains("excitation_cap")) {
    const double cap = number(j, "excitation_cap");
    if (cap != 1.0 && cap != 2.0) throw ParameterError("excitation_cap must be 1 or 2");
    options.excitation_cap = static_cast<int>(cap);
  }
  if (j.contains("initial")) {
    initial = string_field(j, "initial");
    initial_state_from_name(initial);
  }
  if (j.contains("threads")) sweep.threads = static_cast<int>(number(j, "threads"));

  if (j.contains("fig5")) {
    const json& f = j.at("fig5");
    for (const auto& [k, v] : f.items()) {
      if (k != "B_T" && k != "inv_s_THz") throw ParameterError("unknown fig5 field '" + k + "'");
    }
    if (f.contains("B_T")) apply_axis(sweep.field, f.at("B_T"));
    if (f.contains("inv_s_THz")) apply_axis(sweep.inverse_width, f.at("inv_s_THz"));
  }
  if (j.contains("eta_sweep")) apply_axis(sweep.eta, j.at("eta_sweep"));
  if (j.contains("outputs")) {
    const json& o = j.at("outputs");
    const std::pair<const char*, std::string*> slots[] = {
        {"summary_json", &outputs.summary_json}, {"trajectory_csv", &outputs.trajectory_csv},
        {"fig4_csv", &outputs.fig4_csv},         {"fig5_csv", &outputs.fig5_csv},
        {"eta_csv", &outputs.eta_csv}};
    for (const auto& [k, v] : o.items()) {
      bool known = false;
      for (const auto& [name, slot] : slots) {
        if (k == name) {
          *slot = string_field(o, name);
          known = true;
        }
      }
      if (!known) throw ParameterError("unknown outputs field '" + k + "'");
    }
  }

  params.validate();
  if (!(options.width_ps > 0.0)) throw ParameterError("s_ps must be > 0");
  if (!(options.dt_ps > 0.0)) throw ParameterError("dt_ps must be > 0");
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  c.apply_json(j);
  return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParameterError("config file '" + path + "': " + e.what());
  }
  return from_json(j);
}

json RunConfig::to_json() const {
  return {{"T_ps", params.tunnel_period_ps},
          {"delta_radps", params.splitting_radps},
          {"te_ns", 1.0 / (params.decay_rate_per_ps * 1000.0)},
          {"B_T", params.field_tesla},
          {"ge", params.g_electron},
          {"gh", params.g_hole},
          {"theta_m", params.mixing_theta},
          {"phi_m", params.mixing_phi},
          {"s_ps", options.width_ps},
          {"eta", options.eta},
          {"dt_ps", options.dt_ps},
          {"record_stride", options.record_stride},
          {"initial", initial},
          {"pure", options.pure},
          {"dissipation", options.dissipation},
          {"two_component", options.two_component},
          {"excitation_cap", options.excitation_cap},
          {"threads", sweep.threads},
          {"fig5", {{"B_T", axis_json(sweep.field)}, {"inv_s_THz", axis_json(sweep.inverse_width)}}},
          {"eta_sweep", axis_json(sweep.eta)}};
}

QubitAmplitudes initial_state_from_name(const std::string& name) {
  if (name == "psi0") return uniform_superposition();
  const std::pair<const char*, std::pair<Spin, Spin>> named[] = {
      {"dndn", {Spin::Down, Spin::Down}},
      {"dnup", {Spin::Down, Spin::Up}},
      {"updn", {Spin::Up, Spin::Down}},
      {"upup", {Spin::Up, Spin::Up}}};
  for (const auto& [n, spins] : named) {
    if (name == n) return qubit_basis_state(spins.first, spins.second);
  }
  throw ParameterError("unknown initial state '" + name + "' (psi0, dndn, dnup, updn, upup)");
}

GateResult run_fig4(const RunConfig& config) {
  GateOptions opts = config.options;
  opts.record_figure_traces = true;
  return run_gate(initial_state_from_name(config.initial), config.params, opts);
}

std::vector<Fig5Row> sweep_fig5(const RunConfig& config) {
  const std::vector<double> fields = config.sweep.field.values();
  const std::vector<double> inv = config.sweep.inverse_width.values();
  const QubitAmplitudes psi0 = initial_state_from_name(config.initial);
  return parallel_map<Fig5Row>(fields.size() * inv.size(), config.sweep.threads,
                               [&](std::size_t k) {
    Fig5Row row;
    row.field_tesla = fields[k / inv.size()];
    row.inverse_width_thz = inv[k % inv.size()];
    try {
      PhysicalParams p = config.params;
      p.field_tesla = row.field_tesla;
      GateOptions o = config.options;
      o.width_ps = 1.0 / row.inverse_width_thz;
      o.record_stride = std::numeric_limits<std::size_t>::max();
      o.track_positivity = false;
      row.fidelity = run_gate(psi0, p, o).fidelity;
    } catch (const std::exception& e) {
      row.fidelity = kNaN;
      row.error = e.what();
    }
    return row;
  });
}

std::vector<double> eta_values(const Axis& axis) {
  std::vector<double> v = axis.values();
  for (double must : {0.0, 0.1}) {
    bool found = false;
    for (double& x : v) {
      if (std::abs(x - must) < 1e-12) {
        x = must;
        found = true;
      }
    }
    if (!found) v.push_back(must);
  }
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<EtaRow> sweep_eta(const RunConfig& config) {
  const std::vector<double> etas = eta_values(config.sweep.eta);
  const QubitAmplitudes psi0 = initial_state_from_name(config.initial);
  return parallel_map<EtaRow>(etas.size(), config.sweep.threads, [&](std::size_t k) {
    EtaRow row;
    row.eta = etas[k];
    try {
      GateOptions o = config.options;
      o.eta = row.eta;
      o.record_stride = std::numeric_limits<std::size_t>::max();
      o.track_positivity = false;
      row.fidelity = run_gate(psi0, config.params, o).fidelity;
    } catch (const std::exception& e) {
      row.fidelity = kNaN;
      row.error = e.what();
    }
    return row;
  });
}

void write_fig5_csv(std::ostream& os, const std::vector<Fig5Row>& rows) {
  os << "B_T,inv_s_THz,fidelity,error\n";
  for (const auto& r : rows) {
    os << format_number(r.field_tesla) << ',' << format_number(r.inverse_width_thz) << ','
       << format_number(r.fidelity) << ',' << csv_field(r.error) << '\n';
  }
}

void write_eta_csv(std::ostream& os, const std::vector<EtaRow>& rows) {
  os << "eta,fidelity,error\n";
  for (const auto& r : rows) {
    os << format_number(r.eta) << ',' << format_number(r.fidelity) << ',' << csv_field(r.error)
       << '\n';
  }
}

json OracleReport::to_json() const {
  return {{"rabi_grid_radps", rabi_grid},
          {"tunneling_grid_radps", tunneling_grid},
          {"times_ps", times},
          {"max_deviation", max_deviation},
          {"strong_drive_trion_error", strong_drive_trion_error},
          {"strong_drive_tolerance", strong_drive_tolerance}};
}

OracleReport oracle_comparison(double dt) {
  OracleReport r;
  r.rabi_grid = {0.5, 1.0, 2.0, 5.0, 10.0};
  r.tunneling_grid = {0.1, 0.25, units::kPi / (2.0 * 3.27), 0.75, 1.0};
  for (int k = 1; k <= 10; ++k) r.times.push_back(0.5 * k);

  auto numeric = [](double rabi, double tau, double t, double step) {
    const EvolutionProblem p = three_level_problem(rabi, tau, t, step);
    Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(3);
    e0(0) = 1.0;
    return evolve_schrodinger(p, StateVector{p.basis, e0}).final_psi->amplitudes;
  };

  for (double rabi : r.rabi_grid) {
    for (double tau : r.tunneling_grid) {
      for (double t : r.times) {
        const Eigen::VectorXcd diff = numeric(rabi, tau, t, dt) - three_level_oracle(rabi, tau, t).psi;
        r.max_deviation = std::max(r.max_deviation, diff.cwiseAbs().maxCoeff());
      }
    }
  }

  const double rabi = 50.0;
  const double tau = 0.48;
  const double t0 = three_level_oracle(rabi, tau, 0.0).t0;
  const Eigen::VectorXcd psi = numeric(rabi, tau, t0, dt / 10.0);
  r.strong_drive_trion_error = std::abs(psi(1) + cplx(0.0, 1.0));
  r.strong_drive_tolerance = 2.0 * (tau / rabi) * (tau / rabi);
  return r;
}

json ChannelReport::to_json() const {
  return {{"trion_population", trion_population},
          {"trion_phase_deg", trion_phase_deg},
          {"exciton_overlap", exciton_overlap}};
}

ChannelReport channel_check(double width_ps, double detuning_radps, bool two_component,
                            double dt) {
  const PulseSpec pulse =
      two_component ? two_component_pulse(width_ps, detuning_radps, 0.0, Dot::Two)
                    : gaussian_pulse(width_ps, 0.0, 2.0 * units::kPi, Dot::Two);
  auto run = [&](const BasisPtr& basis, bool detuned) {
    EvolutionProblem p;
    p.basis = basis;
    if (detuned) p.static_terms = {build_detuning(basis, detuning_radps)};
    p.drives = {{pulse, build_optical_coupling(basis, Dot::Two)}};
    p.t_start = -pulse.half_window();
    p.t_end = pulse.half_window();
    p.dt = dt;
    p.record_stride = std::numeric_limits<std::size_t>::max();
    Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(2);
    e0(0) = 1.0;
    return evolve_schrodinger(p, StateVector{basis, e0}).final_psi->amplitudes(0);
  };
  const cplx trion = run(Basis::from_states({{DotConfig::single(Spin::Up), DotConfig::single(Spin::Down)},
                                             {DotConfig::single(Spin::Up), DotConfig::trion(Spin::Down)}}),
                         false);
  const cplx exciton =
      run(Basis::from_states({{DotConfig::singlet_pair(), DotConfig::electron_hole(Spin::Up, Spin::Down)},
                              {DotConfig::singlet_pair(), DotConfig::vacuum()}}),
          true);
  ChannelReport r;
  r.trion_population = std::norm(trion);
  r.trion_phase_deg = std::arg(trion) * 180.0 / units::kPi;
  r.exciton_overlap = std::abs(exciton);
  return r;
}

json pulse_solution_json(double width_ps, double detuning_radps) {
  const TwoComponentSolution s = solve_two_component(width_ps, detuning_radps);
  return {{"s_ps", width_ps},
          {"delta_radps", detuning_radps},
          {"delta_meV", units::radps_to_mev(detuning_radps)},
          {"s1_ps", s.secondary_width_ps},
          {"omega20", s.amplitude_pi_norm},
          {"amplitude_radps", s.amplitude},
          {"residual_area", s.residual_area},
          {"residual_width", s.residual_width},
          {"channel_check", channel_check(width_ps, detuning_radps).to_json()}};
}

std::string format_step_table(const std::vector<StepRow>& rows) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-6s %9s  %-14s %10s %10s\n", "step", "t_ps", "dominant",
                "population", "phase_deg");
  os << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-6s %9.4f  %-14s %10.6f %10.3f\n", r.step.c_str(),
                  r.time_ps, r.dominant.c_str(), r.population, r.phase_deg);
    os << line;
  }
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace qdgate
