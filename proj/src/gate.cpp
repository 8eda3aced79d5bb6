#include "qdgate/gate.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include "qdgate/errors.hpp"

namespace qdgate {

namespace {

Eigen::Index qi(const Basis& b, Spin s1, Spin s2) {
  return static_cast<Eigen::Index>(b.qubit_index(s1, s2));
}

StateVector qubit_state(const QubitAmplitudes& amps) {
  return StateVector{qubit_basis(), Eigen::VectorXcd(amps)};
}

double rounded12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

}  // namespace

std::array<double, 3> GateSchedule::centers() const {
  return {pulses.at(0).center_ps, pulses.at(1).center_ps, pulses.at(2).center_ps};
}

GateSchedule build_schedule(const PhysicalParams& params, double width_ps, double eta,
                            bool two_component) {
  params.validate();
  if (!(width_ps > 0.0)) throw ParameterError("pulse width s must be > 0");
  if (!(1.0 + eta > 0.0)) throw ParameterError("timing error eta must exceed -1");

  const double period = params.tunnel_period_ps;
  const double scale = effective_rabi_scale(params.mixing_theta);
  const double c1 = period * (1.0 + eta);
  const double c2 = 2.0 * period * (1.0 + eta);

  GateSchedule g;
  g.tunnel_period_ps = period;
  g.eta = eta;
  g.pulses.push_back(gaussian_pulse(width_ps, 0.0, units::kPi, Dot::One));
  if (two_component) {
    g.pulses.push_back(two_component_pulse(width_ps, params.splitting_radps, c1, Dot::Two));
  } else {
    g.pulses.push_back(gaussian_pulse(width_ps, c1, 2.0 * units::kPi, Dot::Two));
  }
  g.pulses.push_back(gaussian_pulse(width_ps, c2, units::kPi, Dot::One));
  for (auto& p : g.pulses) p.amplitude /= scale;

  g.t_start = -8.0 * width_ps;
  g.t_end = c2 + 8.0 * width_ps;
  if (8.0 * width_ps > period / 2.0) {
    g.warnings.push_back("pulse windows (8s = " + std::to_string(8.0 * width_ps) +
                         " ps) exceed half the tunneling period; pulses overlap tunneling steps");
  }
  return g;
}

QubitAmplitudes uniform_superposition() { return QubitAmplitudes::Constant(cplx(0.5)); }

QubitAmplitudes qubit_basis_state(Spin s1, Spin s2) {
  QubitAmplitudes a = QubitAmplitudes::Zero();
  a(2 * static_cast<int>(s1) + static_cast<int>(s2)) = 1.0;
  return a;
}

StateVector ideal_target(const StateVector& initial) {
  const Basis& b = *initial.basis;
  StateVector out = initial;
  for (const auto& s : b.states()) {
    const bool qubit = s.dot1.kind == DotKind::SingleElectron && s.dot2.kind == DotKind::SingleElectron;
    if (!qubit && std::abs(initial.amplitudes(static_cast<Eigen::Index>(s.index))) > 1e-12) {
      throw StructuralError("ideal_target: initial state has support on " + s.label());
    }
  }
  out.amplitudes(qi(b, Spin::Up, Spin::Down)) *= -1.0;
  return out;
}

double fidelity(const DensityMatrix& rho, const StateVector& target) {
  if (rho.rho.rows() != target.amplitudes.size()) {
    throw StructuralError("fidelity: density matrix and target differ in dimension");
  }
  return (target.amplitudes.adjoint() * rho.rho * target.amplitudes)(0, 0).real();
}

EvolutionProblem gate_problem(const PhysicalParams& params, const GateOptions& options,
                              GateSchedule* schedule_out) {
  const GateSchedule schedule =
      build_schedule(params, options.width_ps, options.eta, options.two_component);
  EvolutionProblem p;
  p.basis = enumerate_basis(options.excitation_cap, true);
  p.static_terms = {
      build_tunneling(p.basis, params.tunneling_radps()),
      build_zeeman(p.basis, params.field_tesla, params.g_electron, params.g_hole),
      build_detuning(p.basis, params.splitting_radps),
  };
  const HoleMixingModel mixing{params.mixing_theta, params.mixing_phi};
  const OperatorMatrix c1 = build_optical_coupling(p.basis, Dot::One, mixing);
  const OperatorMatrix c2 = build_optical_coupling(p.basis, Dot::Two, mixing);
  for (const auto& pulse : schedule.pulses) {
    p.drives.push_back({pulse, pulse.dot == Dot::One ? c1 : c2});
  }
  if (options.dissipation && !options.pure) {
    p.collapse_ops = build_collapse_ops(p.basis, params.decay_rate_per_ps);
  }
  p.t_start = schedule.t_start;
  p.t_end = schedule.t_end;
  p.dt = options.dt_ps;
  p.record_stride = options.record_stride;
  p.fail_hard = options.fail_hard;
  p.track_positivity = options.track_positivity;
  if (options.record_figure_traces) {
    const Basis& b = *p.basis;
    const auto dd = b.qubit_index(Spin::Down, Spin::Down);
    const auto du = b.qubit_index(Spin::Down, Spin::Up);
    const auto ud = b.qubit_index(Spin::Up, Spin::Down);
    const auto uu = b.qubit_index(Spin::Up, Spin::Up);
    p.observables = {make_observable(b, dd, dd), make_observable(b, du, du),
                     make_observable(b, ud, ud), make_observable(b, ud, uu)};
  }
  if (schedule_out) *schedule_out = schedule;
  return p;
}

GateResult run_gate(const QubitAmplitudes& initial, const PhysicalParams& params,
                    const GateOptions& options) {
  if (std::abs(initial.squaredNorm() - 1.0) > 1e-9) {
    throw ParameterError("initial qubit state must be normalized");
  }
  GateSchedule schedule;
  const EvolutionProblem problem = gate_problem(params, options, &schedule);
  const StateVector psi0 = embed(qubit_state(initial), problem.basis);

  GateResult r;
  r.schedule = schedule;
  r.gate_time_ps = schedule.duration();
  if (options.pure) {
    r.trajectory = evolve_schrodinger(problem, psi0);
    r.final_state = DensityMatrix::from_pure(*r.trajectory.final_psi);
  } else {
    r.trajectory = evolve_lindblad(problem, DensityMatrix::from_pure(psi0));
    r.final_state = *r.trajectory.final_rho;
  }
  r.target = ideal_target(psi0);
  r.fidelity = fidelity(r.final_state, r.target);
  double qubit_pop = 0.0;
  for (const auto& [d1, d2] : qubit_configs()) {
    const auto i = static_cast<Eigen::Index>(*problem.basis->find(d1, d2));
    qubit_pop += r.final_state.rho(i, i).real();
  }
  r.leakage = 1.0 - qubit_pop;
  return r;
}

nlohmann::json GateResult::to_json(const PhysicalParams& params, const GateOptions& options) const {
  const auto& d = trajectory.diagnostics;
  nlohmann::json echo = params.to_json();
  echo["s_ps"] = options.width_ps;
  echo["eta"] = options.eta;
  echo["dt_ps"] = options.dt_ps;
  echo["dissipation"] = options.dissipation && !options.pure;
  echo["pure"] = options.pure;
  echo["two_component"] = options.two_component;
  for (auto& [k, v] : echo.items()) {
    if (v.is_number_float()) v = rounded12(v.get<double>());
  }
  nlohmann::json warnings = schedule.warnings;
  return {{"fidelity", rounded12(fidelity)},
          {"leakage", rounded12(leakage)},
          {"gate_time_ps", rounded12(gate_time_ps)},
          {"trace_drift", rounded12(options.pure ? d.max_norm_drift : d.max_trace_drift)},
          {"min_eig", rounded12(options.pure ? 0.0 : d.min_eigenvalue)},
          {"warnings", warnings},
          {"params_echo", echo}};
}

std::vector<StepRow> stepwise_state_table(Spin s1, Spin s2, PhysicalParams params,
                                          GateOptions options) {
  params.decay_rate_per_ps = 0.0;
  params.field_tesla = 0.0;
  options.eta = 0.0;
  options.pure = true;
  options.dissipation = false;
  options.record_figure_traces = false;

  GateSchedule schedule;
  EvolutionProblem problem = gate_problem(params, options, &schedule);
  problem.record_stride = std::numeric_limits<std::size_t>::max();
  const auto c = schedule.centers();
  const double margin = 2.0 * options.width_ps;
  const std::array<std::pair<const char*, double>, 5> snapshots{{
      {"(i)", c[0] + margin},
      {"(ii)", c[1] - margin},
      {"(iii)", c[1] + margin},
      {"(iv)", c[2] - margin},
      {"(v)", schedule.t_end},
  }};

  StateVector psi = embed(qubit_state(qubit_basis_state(s1, s2)), problem.basis);
  double t = schedule.t_start;
  std::vector<StepRow> rows;
  for (const auto& [label, t_snap] : snapshots) {
    problem.t_start = t;
    problem.t_end = t_snap;
    psi = *evolve_schrodinger(problem, psi).final_psi;
    t = t_snap;

    Eigen::Index best = 0;
    psi.amplitudes.cwiseAbs2().maxCoeff(&best);
    StepRow row;
    row.step = label;
    row.time_ps = t_snap;
    row.amplitude = psi.amplitudes(best);
    row.population = std::norm(row.amplitude);
    row.phase_deg = std::arg(row.amplitude) * 180.0 / units::kPi;
    row.dominant = row.population > 0.95 ? (*problem.basis)[static_cast<std::size_t>(best)].label()
                                         : "leaked";
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qdgate
