#pragma once

#include <complex>

#include <json.hpp>

#include "qdgate/statespace.hpp"
#include "qdgate/units.hpp"

namespace qdgate {

enum class PulseKind { Gaussian, TwoComponent };

/// Complex rotating-frame envelope of one laser pulse.
///
/// The coupling convention is H = (Ω(t)/2) C + h.c. with rotation angle
/// ∫Ω dt on a resonant channel. `amplitude` is Ω⁰ in rad/ps.
struct PulseSpec {
  PulseKind kind = PulseKind::Gaussian;
  double amplitude = 0.0;
  double width_ps = 0.2;             // s
  double secondary_width_ps = 0.0;   // s₁, TwoComponent only
  double detuning_radps = 0.0;       // Δ, TwoComponent only
  double center_ps = 0.0;
  Dot dot = Dot::One;
  double rotation_rad = 0.0;  // metadata: requested rotation on the resonant channel

  /// Half-width of the support window, in ps.
  double half_window() const { return 8.0 * width_ps; }

  void validate() const;
  nlohmann::json to_json() const;
  /// Rebuilds from {kind, s_ps, s1_ps?, delta_radps | delta_meV, rotation_rad, center_ps, dot}.
  /// The amplitude (and s₁ for two-component pulses) are re-solved from the rotation.
  static PulseSpec from_json(const nlohmann::json& j);
};

/// Gaussian pulse Ω⁰ exp[-((t - t_c)/s)²] with Ω⁰ = rotation / (s √π).
PulseSpec gaussian_pulse(double width_ps, double center_ps, double rotation_rad, Dot dot);

struct TwoComponentSolution {
  double secondary_width_ps = 0.0;   // s₁
  double amplitude_pi_norm = 0.0;      // Ω₂⁰ in the normalization where the trion area is √π·√π = π
  double amplitude = 0.0;            // rescaled so the resonant trion channel rotates by `rotation`
  double residual_area = 0.0;        // Ω₂⁰ (s − s₁ exp[−(Δ s₁/2)²]) − √π
  double residual_width = 0.0;       // s₁ − s exp[−(Δ s/2)²]
};

/// Solves the phase-locked pair constraints for given s and Δ. Throws
/// ParameterError("components unresolvable") when Δ <= 0.
TwoComponentSolution solve_two_component(double width_ps, double detuning_radps,
                                         double rotation_rad = 2.0 * units::kPi);

/// Two-component pulse Ω⁰ (exp[-(τ/s)²] − exp[-(τ/s₁)² − iΔτ]), τ = t − t_c.
PulseSpec two_component_pulse(double width_ps, double detuning_radps, double center_ps, Dot dot,
                              double rotation_rad = 2.0 * units::kPi);

/// Envelope value in the frame of the targeted trion carrier. Zero outside ±8s.
std::complex<double> envelope_at(const PulseSpec& spec, double t_ps);

/// ∫ Ω(t) e^{iδ (t − t_c)} dt over the ±8s window by composite Simpson
/// quadrature: the area seen by a channel whose transition lies δ above the
/// carrier. δ = 0 gives the plain pulse area.
std::complex<double> pulse_area(const PulseSpec& spec, double channel_detuning_radps = 0.0,
                                int intervals = 8000);

}  // namespace qdgate
