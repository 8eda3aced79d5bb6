#pragma once

#include <complex>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qdgate/operator_matrix.hpp"
#include "qdgate/pulses.hpp"
#include "qdgate/statespace.hpp"

namespace qdgate {

/// A pulse together with the coupling structure it drives: H(t) ∋ (Ω(t)/2) C + h.c.
struct PulseDrive {
  PulseSpec pulse;
  OperatorMatrix coupling;
};

/// Density-matrix entry ρ[row, col] (or ψ_row ψ_col* for pure states) to record.
struct Observable {
  std::string name;
  std::size_t row = 0;
  std::size_t col = 0;
};

/// Builds an observable named by basis labels: "<row>" for populations, "<row>><<col>" otherwise.
Observable make_observable(const Basis& basis, std::size_t row, std::size_t col);

struct EvolutionProblem {
  BasisPtr basis;
  std::vector<OperatorMatrix> static_terms;
  std::vector<PulseDrive> drives;
  std::vector<OperatorMatrix> collapse_ops;
  double t_start = 0.0;
  double t_end = 1.0;
  double dt = 1e-3;
  std::size_t record_stride = 10;
  std::vector<Observable> observables;
  /// Throw IntegrationError when a diagnostic leaves its tolerance.
  bool fail_hard = false;
  /// Skip the per-sample eigenvalue check (used by inner loops that only need the final state).
  bool track_positivity = true;

  void validate() const;
};

struct Tolerances {
  double trace = 1e-8;
  double hermiticity = 1e-10;
  double min_eigenvalue = -1e-8;
  double norm = 1e-8;
};

struct Diagnostics {
  double max_trace_drift = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
  double max_norm_drift = 0.0;
  bool within_tolerance = true;
  std::size_t steps = 0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::string> names;
  std::vector<std::vector<cplx>> values;  // values[k][sample]
  std::vector<double> trace;
  std::vector<double> min_eig;
  std::optional<DensityMatrix> final_rho;
  std::optional<StateVector> final_psi;
  Diagnostics diagnostics;

  /// Header `t_ps,<obs>_re,<obs>_im,...,trace,min_eig`; 12 significant digits.
  void write_csv(std::ostream& os) const;
};

/// Classical RK4 on dψ/dt = −i H(t) ψ; collapse operators are ignored.
Trajectory evolve_schrodinger(const EvolutionProblem& problem, const StateVector& psi0,
                              const Tolerances& tol = {});

/// Classical RK4 on the Lindblad master equation.
Trajectory evolve_lindblad(const EvolutionProblem& problem, const DensityMatrix& rho0,
                           const Tolerances& tol = {});

/// Closed-form evolution of (1, 0, 0) under H = [[0, Ω/2, 0], [Ω/2, 0, τ], [0, τ, 0]].
struct ThreeLevelOracle {
  Eigen::Vector3cd psi;
  double t0 = 0.0;  // π / (2 √(τ² + Ω²/4))
};

ThreeLevelOracle three_level_oracle(double rabi_radps, double tunneling_radps, double t_ps);

/// The three-state sub-basis [E(dn)|E(m), T(dn)|E(m), S|EH(m,dn)] of the closed form.
BasisPtr three_level_basis(Spin m = Spin::Down);

/// Constant-drive problem on `three_level_basis` built from the production operators.
EvolutionProblem three_level_problem(double rabi_radps, double tunneling_radps, double t_end_ps,
                                  double dt = 1e-3);

struct ConvergenceReport {
  double deviation = 0.0;         // max |ρ(dt) − ρ(dt/2)|
  double finer_deviation = 0.0;   // max |ρ(dt/2) − ρ(dt/4)|
  double ratio = 0.0;             // deviation / finer_deviation; ≈16 for RK4
};

/// Step-halving self-convergence on the final state (Lindblad route).
ConvergenceReport convergence_check(EvolutionProblem problem, const DensityMatrix& rho0, double dt);

}  // namespace qdgate
