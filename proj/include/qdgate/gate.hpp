#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qdgate/lindblad.hpp"
#include "qdgate/operators.hpp"
#include "qdgate/pulses.hpp"
#include "qdgate/statespace.hpp"

namespace qdgate {

/// The three-pulse sequence: π on dot 1, two-component 2π on dot 2, π on dot 1.
struct GateSchedule {
  std::vector<PulseSpec> pulses;
  double tunnel_period_ps = 0.0;
  double eta = 0.0;  // timing error: pulse centers at 0, (1+η)T, 2(1+η)T
  double t_start = 0.0;
  double t_end = 0.0;
  std::vector<std::string> warnings;

  std::array<double, 3> centers() const;
  double duration() const { return t_end - t_start; }
};

/// `two_component = false` replaces the dot-2 pulse by a single 2π Gaussian.
/// Laser amplitudes are pre-divided by the hole-mixing Rabi scale.
GateSchedule build_schedule(const PhysicalParams& params, double width_ps, double eta,
                            bool two_component = true);

struct GateOptions {
  double width_ps = 0.2;
  double eta = 0.0;
  bool dissipation = true;
  bool pure = false;  // Schrödinger evolution; implies no dissipation
  bool two_component = true;
  double dt_ps = 1e-3;
  std::size_t record_stride = 20;
  int excitation_cap = 1;
  bool fail_hard = false;
  bool track_positivity = true;
  /// Record the four density-matrix entries of the dynamics figure.
  bool record_figure_traces = false;
};

struct GateResult {
  DensityMatrix final_state;
  StateVector target;
  double fidelity = 0.0;
  double leakage = 0.0;
  double gate_time_ps = 0.0;
  Trajectory trajectory;
  GateSchedule schedule;

  /// {fidelity, leakage, gate_time_ps, trace_drift, min_eig, params_echo}.
  nlohmann::json to_json(const PhysicalParams& params, const GateOptions& options) const;
};

/// Qubit-state amplitudes in (↓↓, ↓↑, ↑↓, ↑↑) order.
using QubitAmplitudes = Eigen::Vector4cd;

/// ½(1, 1, 1, 1): both electrons along +z.
QubitAmplitudes uniform_superposition();
QubitAmplitudes qubit_basis_state(Spin s1, Spin s2);

/// diag(1, 1, −1, 1) applied to a state supported on the qubit subspace.
/// Throws StructuralError if any amplitude lies outside it.
StateVector ideal_target(const StateVector& initial);

/// ⟨ψ|ρ|ψ⟩. Throws StructuralError on dimension mismatch.
double fidelity(const DensityMatrix& rho, const StateVector& target);

GateResult run_gate(const QubitAmplitudes& initial, const PhysicalParams& params,
                    const GateOptions& options = {});

/// The evolution problem `run_gate` integrates, exposed for convergence and linearity checks.
EvolutionProblem gate_problem(const PhysicalParams& params, const GateOptions& options,
                              GateSchedule* schedule_out = nullptr);

struct StepRow {
  std::string step;        // "(i)" ... "(v)"
  double time_ps = 0.0;
  std::string dominant;    // basis label, or "leaked"
  double population = 0.0;
  double phase_deg = 0.0;  // arg of the dominant amplitude
  cplx amplitude;
};

/// Ideal-settings (Γ = 0, B = 0, η = 0) snapshots after each protocol step for
/// a qubit basis state. Snapshots sit 2s after a pulse center or 2s before the next.
std::vector<StepRow> stepwise_state_table(Spin s1, Spin s2, PhysicalParams params,
                                          GateOptions options = {});

}  // namespace qdgate
