#include "qdgate/operators.hpp"

#include <cmath>

#include "qdgate/errors.hpp"

namespace qdgate {

namespace {

const double kInvSqrt3 = 1.0 / std::sqrt(3.0);

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

// Applies a single-dot map to each basis state and records `value` at (target, source).
template <typename Map>
void add_single_dot(OperatorMatrix& op, Dot dot, cplx value, Map&& map) {
  const Basis& b = *op.basis;
  for (const auto& s : b.states()) {
    const DotConfig& here = dot == Dot::One ? s.dot1 : s.dot2;
    auto moved = map(here);
    if (!moved) continue;
    auto target = dot == Dot::One ? b.find(*moved, s.dot2) : b.find(s.dot1, *moved);
    if (target) op.matrix(idx(*target), idx(s.index)) += value;
  }
}

}  // namespace

void PhysicalParams::validate() const {
  if (!(tunnel_period_ps > 0.0)) throw ParameterError("tunneling period T must be > 0");
  if (decay_rate_per_ps < 0.0) throw ParameterError("decay rate must be >= 0");
  if (field_tesla < 0.0) throw ParameterError("magnetic field must be >= 0");
  if (!(mixing_theta >= 0.0 && mixing_theta < units::kPi / 2.0)) {
    throw ParameterError("mixing angle theta must be in [0, pi/2)");
  }
}

nlohmann::json PhysicalParams::to_json() const {
  return {{"T_ps", tunnel_period_ps},
          {"tau_radps", tunneling_radps()},
          {"delta_radps", splitting_radps},
          {"gamma_per_ps", decay_rate_per_ps},
          {"B_T", field_tesla},
          {"ge", g_electron},
          {"gh", g_hole},
          {"theta_m", mixing_theta},
          {"phi_m", mixing_phi}};
}

Eigen::Vector2cd HoleMixingModel::minus_coefficients() const {
  return {cplx(std::cos(theta)), -kInvSqrt3 * std::sin(theta) * std::polar(1.0, -phi)};
}

Eigen::Vector2cd HoleMixingModel::plus_coefficients() const {
  return {-kInvSqrt3 * std::sin(theta) * std::polar(1.0, phi), cplx(std::cos(theta))};
}

Eigen::Vector2cd HoleMixingModel::polarization_weights() const {
  const double norm = 1.0 / std::sqrt(1.0 - 2.0 / 3.0 * std::pow(std::sin(theta), 2));
  return norm * Eigen::Vector2cd(cplx(std::cos(theta)),
                                 kInvSqrt3 * std::sin(theta) * std::polar(1.0, -phi));
}

Eigen::Vector2cd HoleMixingModel::combined_coefficients() const {
  const Eigen::Vector2cd w = polarization_weights();
  return w(0) * minus_coefficients() + w(1) * plus_coefficients();
}

double HoleMixingModel::rabi_scale() const { return effective_rabi_scale(theta); }

double HoleMixingModel::recombined_rabi_scale() const {
  const double s2 = std::pow(std::sin(theta), 2);
  return (1.0 - 4.0 / 3.0 * s2) / std::sqrt(1.0 - 2.0 / 3.0 * s2);
}

MixingHamiltonians build_hole_mixing_hamiltonians(double theta, double phi, double rabi) {
  const HoleMixingModel m{theta, phi};
  return {0.5 * rabi * m.minus_coefficients(), 0.5 * rabi * m.plus_coefficients()};
}

double effective_rabi_scale(double theta) {
  if (!(theta >= 0.0 && theta <= units::kPi / 2.0)) {
    throw ParameterError("mixing angle theta must be in [0, pi/2]");
  }
  return std::sqrt(1.0 - 2.0 / 3.0 * std::pow(std::sin(theta), 2));
}

OperatorMatrix build_tunneling(const BasisPtr& basis, double tau) {
  OperatorMatrix op = OperatorMatrix::zero(basis, OperatorRole::HamiltonianTerm, "tunneling");
  if (tau == 0.0) return op;
  for (const auto& s : basis->states()) {
    if (s.dot1.kind != DotKind::Trion) continue;
    auto moved = move_hole(s.dot1, Dot::One, s.dot2, Dot::Two);
    if (!moved) continue;
    auto target = basis->find(moved->first, moved->second);
    if (!target) continue;
    op.matrix(idx(*target), idx(s.index)) = tau;
    op.matrix(idx(s.index), idx(*target)) = tau;
  }
  return op;
}

OperatorMatrix build_optical_coupling(const BasisPtr& basis, Dot dot, const HoleMixingModel& mixing) {
  OperatorMatrix op = OperatorMatrix::zero(basis, OperatorRole::CouplingStructure,
                                           dot == Dot::One ? "coupling_dot1" : "coupling_dot2");
  add_single_dot(op, dot, mixing.rabi_scale(), [dot](const DotConfig& c) {
    return create_pair(c, dot, Spin::Up, Spin::Down);
  });
  return op;
}

OperatorMatrix build_zeeman(const BasisPtr& basis, double field, double ge, double gh) {
  if (field < 0.0) throw ParameterError("magnetic field must be >= 0");
  OperatorMatrix op = OperatorMatrix::zero(basis, OperatorRole::HamiltonianTerm, "zeeman");
  if (field == 0.0) return op;
  const double half_e = 0.5 * units::larmor_radps(ge, field);
  const double half_h = 0.5 * units::larmor_radps(gh, field);
  for (Dot dot : {Dot::One, Dot::Two}) {
    add_single_dot(op, dot, half_e, [](const DotConfig& c) { return flip_electron(c); });
    add_single_dot(op, dot, half_h, [](const DotConfig& c) { return flip_hole(c); });
  }
  return op;
}

OperatorMatrix build_detuning(const BasisPtr& basis, double delta) {
  OperatorMatrix op = OperatorMatrix::zero(basis, OperatorRole::HamiltonianTerm, "detuning");
  for (const auto& s : basis->states()) {
    if (s.dot2.kind == DotKind::Vacuum) op.matrix(idx(s.index), idx(s.index)) = -delta;
  }
  return op;
}

std::vector<OperatorMatrix> build_collapse_ops(const BasisPtr& basis, double gamma) {
  if (gamma < 0.0) throw ParameterError("decay rate must be >= 0");
  std::vector<OperatorMatrix> out;
  const double amp = std::sqrt(gamma);
  for (Dot dot : {Dot::One, Dot::Two}) {
    for (auto [e, h] : {std::pair{Spin::Up, Spin::Down}, std::pair{Spin::Down, Spin::Up}}) {
      std::string name = std::string("decay_dot") + (dot == Dot::One ? "1" : "2") + "_e" +
                         spin_tag(e) + "h" + spin_tag(h);
      OperatorMatrix op = OperatorMatrix::zero(basis, OperatorRole::Collapse, name);
      // Structure is recorded with unit weight first so Γ = 0 still yields the channel.
      add_single_dot(op, dot, 1.0, [dot, e = e, h = h](const DotConfig& c) {
        return remove_pair(c, dot, e, h);
      });
      if (op.matrix.cwiseAbs().maxCoeff() == 0.0) continue;
      op.matrix *= amp;
      out.push_back(std::move(op));
    }
  }
  return out;
}

Eigen::Matrix4cd ideal_phase_gate(GateRepresentation rep) {
  Eigen::Matrix4cd m;
  switch (rep) {
    case GateRepresentation::XBasis:
      m.setZero();
      m.diagonal() << 1.0, 1.0, -1.0, 1.0;
      break;
    case GateRepresentation::ZZBasis:
      m << 1, 1, -1, 1,
           1, 1, 1, -1,
           -1, 1, 1, 1,
           1, -1, 1, 1;
      m *= 0.5;
      break;
    case GateRepresentation::XZBasis:
      m << 1, 0, 0, 0,
           0, 1, 0, 0,
           0, 0, 0, 1,
           0, 0, 1, 0;
      break;
  }
  return m;
}

Eigen::Matrix2cd x_to_z_change_of_basis() {
  // |↑⟩ = (|+z⟩ + |−z⟩)/√2, |↓⟩ = (|+z⟩ − |−z⟩)/√2.
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd u;
  u << -r, r,
        r, r;
  return u;
}

}  // namespace qdgate
