#pragma once

#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qdgate/operator_matrix.hpp"
#include "qdgate/statespace.hpp"
#include "qdgate/units.hpp"

namespace qdgate {

/// Device and field constants. Rates in rad/ps, times in ps.
struct PhysicalParams {
  double tunnel_period_ps = 3.27;                       // T = π/(2τ)
  double splitting_radps = units::mev_to_radps(4.0);    // Δ, trion-exciton splitting
  double decay_rate_per_ps = 1.0 / units::ns_to_ps(1.0);  // Γ = 1/t_e
  double field_tesla = 0.0;                             // B, in-plane (z)
  double g_electron = 0.48;
  double g_hole = 0.31;
  double mixing_theta = 0.0;  // θ_m
  double mixing_phi = 0.0;    // φ_m

  double tunneling_radps() const { return units::kPi / (2.0 * tunnel_period_ps); }
  double electron_larmor_radps() const { return units::larmor_radps(g_electron, field_tesla); }
  double hole_larmor_radps() const { return units::larmor_radps(g_hole, field_tesla); }

  void validate() const;
  nlohmann::json to_json() const;
};

/// Confinement mixing of heavy and light holes, h±† = cos θ |3/2,±3/2⟩ − sin θ e^{∓iφ} |3/2,∓1/2⟩.
///
/// Channel vectors are over the per-dot pair (e↑h₋, e↓h₊).
struct HoleMixingModel {
  double theta = 0.0;
  double phi = 0.0;

  /// σ⁻ light: (cos θ, −√(1/3) sin θ e^{−iφ}).
  Eigen::Vector2cd minus_coefficients() const;
  /// σ⁺ light: (−√(1/3) sin θ e^{iφ}, cos θ).
  Eigen::Vector2cd plus_coefficients() const;
  /// Corrected polarization (weight on σ⁻, weight on σ⁺), unit norm.
  Eigen::Vector2cd polarization_weights() const;
  /// Channel vector of the corrected-polarization coupling.
  Eigen::Vector2cd combined_coefficients() const;

  /// Ω_eff/Ω as printed: (1 − (2/3) sin²θ)^{1/2}.
  double rabi_scale() const;
  /// The surviving e↑h₋ coefficient recomputed from the channel algebra:
  /// (1 − (4/3) sin²θ) / (1 − (2/3) sin²θ)^{1/2}. Diagnostic only.
  double recombined_rabi_scale() const;
};

struct MixingHamiltonians {
  Eigen::Vector2cd minus;  // (Ω/2) × σ⁻ channel amplitudes
  Eigen::Vector2cd plus;   // (Ω/2) × σ⁺ channel amplitudes
};

MixingHamiltonians build_hole_mixing_hamiltonians(double theta, double phi, double rabi);

/// Ω_eff/Ω, θ in [0, π/2].
double effective_rabi_scale(double theta);

/// Hermitian hole-tunneling term: τ between T(h)|E(e) and S|EH(e,h).
OperatorMatrix build_tunneling(const BasisPtr& basis, double tunneling_radps);

/// σ⁻ coupling structure C on one dot (e↑†h⇓† creation; Pauli-blocked entries
/// vanish structurally), scaled by the hole-mixing Rabi factor. H = (Ω/2) C + h.c.
OperatorMatrix build_optical_coupling(const BasisPtr& basis, Dot dot,
                                      const HoleMixingModel& mixing = {});

/// In-plane field along z, acting as spin flips on the x-labeled states.
OperatorMatrix build_zeeman(const BasisPtr& basis, double field_tesla, double g_electron,
                            double g_hole);

/// Rotating-frame energies: −Δ on configurations with an empty dot 2, zero elsewhere.
OperatorMatrix build_detuning(const BasisPtr& basis, double splitting_radps);

/// One √Γ jump operator per bright recombination channel: e↑h⇓ and e↓h⇑ in dot 1
/// and in dot 2. Channels with no support in the basis are omitted.
std::vector<OperatorMatrix> build_collapse_ops(const BasisPtr& basis, double decay_rate);

enum class GateRepresentation { XBasis, ZZBasis, XZBasis };

/// Ideal phase gate over (↓↓, ↓↑, ↑↓, ↑↑) or the corresponding z-labeled orderings.
Eigen::Matrix4cd ideal_phase_gate(GateRepresentation rep);

/// Columns are |−z⟩, |+z⟩ written over (↓, ↑).
Eigen::Matrix2cd x_to_z_change_of_basis();

}  // namespace qdgate
