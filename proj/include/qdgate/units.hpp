#pragma once

#include <numbers>

namespace qdgate::units {

// Internal rates are angular frequencies in rad/ps, times are in ps.
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHbarMeVps = 0.6582119569;
inline constexpr double kBohrMagnetonMeVperT = 0.05788;

/// Energy (meV) to angular frequency E/hbar (rad/ps).
constexpr double mev_to_radps(double mev) { return mev / kHbarMeVps; }
constexpr double radps_to_mev(double radps) { return radps * kHbarMeVps; }

/// Energy (meV) to the ordinary frequency E/h (1/ps), used numerically as a rate.
/// Under this reading tau = 2 meV gives pi/(2 tau) = 3.25 ps.
constexpr double mev_to_radps_ordinary(double mev) {
  return mev / (2.0 * kPi * kHbarMeVps);
}
constexpr double radps_ordinary_to_mev(double rate) {
  return rate * 2.0 * kPi * kHbarMeVps;
}

/// Larmor angular frequency g * mu_B * B / hbar in rad/ps.
constexpr double larmor_radps(double g, double field_tesla) {
  return g * kBohrMagnetonMeVperT * field_tesla / kHbarMeVps;
}

constexpr double ns_to_ps(double ns) { return ns * 1000.0; }

}  // namespace qdgate::units
