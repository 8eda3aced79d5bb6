#pragma once

#include <limits>

#include "qdgate/lindblad.hpp"
#include "qdgate/operators.hpp"

namespace qdgate::test {

// Ground E(dn)|E(dn) and trion T(dn)|E(dn): the resonant dot-1 channel.
inline BasisPtr dot1_channel() {
  return Basis::from_states({{DotConfig::single(Spin::Down), DotConfig::single(Spin::Down)},
                             {DotConfig::trion(Spin::Down), DotConfig::single(Spin::Down)}});
}

inline StateVector ground(const BasisPtr& b) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(b->size()));
  v(0) = 1.0;
  return {b, v};
}

// Constant σ_x-type drive (Ω/2)(C + C†) on the dot-1 channel.
inline EvolutionProblem constant_rabi(double rabi, double t_end, double dt = 1e-3) {
  EvolutionProblem p;
  p.basis = dot1_channel();
  OperatorMatrix h = OperatorMatrix::zero(p.basis, OperatorRole::HamiltonianTerm, "rabi");
  const auto c = build_optical_coupling(p.basis, Dot::One).matrix;
  h.matrix = 0.5 * rabi * (c + c.adjoint());
  p.static_terms = {h};
  p.t_start = 0.0;
  p.t_end = t_end;
  p.dt = dt;
  p.record_stride = std::numeric_limits<std::size_t>::max();
  return p;
}

// A single pulse driving the dot-1 channel over its ±8s window.
inline EvolutionProblem pulse_problem(const PulseSpec& pulse, double dt = 1e-3) {
  EvolutionProblem p;
  p.basis = dot1_channel();
  p.drives = {{pulse, build_optical_coupling(p.basis, Dot::One)}};
  p.t_start = pulse.center_ps - pulse.half_window();
  p.t_end = pulse.center_ps + pulse.half_window();
  p.dt = dt;
  p.record_stride = std::numeric_limits<std::size_t>::max();
  return p;
}

}  // namespace qdgate::test
