#include "qdgate/pulses.hpp"

#include <cmath>
#include <string>

#include "qdgate/errors.hpp"

namespace qdgate {

namespace {

const double kSqrtPi = std::sqrt(units::kPi);

Dot dot_from_int(int d) {
  if (d == 1) return Dot::One;
  if (d == 2) return Dot::Two;
  throw ParameterError("pulse dot must be 1 or 2, got " + std::to_string(d));
}

}  // namespace

void PulseSpec::validate() const {
  if (!(width_ps > 0.0)) throw ParameterError("pulse width s must be > 0");
  if (kind == PulseKind::TwoComponent && !(secondary_width_ps > 0.0)) {
    throw ParameterError("secondary width s1 must be > 0");
  }
  if (amplitude < 0.0) throw ParameterError("pulse amplitude must be >= 0");
}

nlohmann::json PulseSpec::to_json() const {
  nlohmann::json j{
      {"kind", kind == PulseKind::Gaussian ? "gaussian" : "two_component"},
      {"s_ps", width_ps},
      {"rotation_rad", rotation_rad},
      {"center_ps", center_ps},
      {"dot", static_cast<int>(dot)},
      {"amplitude_radps", amplitude},
  };
  if (kind == PulseKind::TwoComponent) {
    j["s1_ps"] = secondary_width_ps;
    j["delta_radps"] = detuning_radps;
  }
  return j;
}

PulseSpec PulseSpec::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const double s = j.at("s_ps").get<double>();
  const double center = j.value("center_ps", 0.0);
  const Dot dot = dot_from_int(j.value("dot", 1));
  if (kind == "gaussian") {
    return gaussian_pulse(s, center, j.value("rotation_rad", units::kPi), dot);
  }
  if (kind == "two_component") {
    double delta = 0.0;
    if (j.contains("delta_radps")) {
      delta = j.at("delta_radps").get<double>();
    } else if (j.contains("delta_meV")) {
      delta = units::mev_to_radps(j.at("delta_meV").get<double>());
    } else {
      throw ParameterError("two_component pulse needs delta_radps or delta_meV");
    }
    return two_component_pulse(s, delta, center, dot, j.value("rotation_rad", 2.0 * units::kPi));
  }
  throw ParameterError("unknown pulse kind '" + kind + "'");
}

PulseSpec gaussian_pulse(double width_ps, double center_ps, double rotation_rad, Dot dot) {
  if (!(width_ps > 0.0)) throw ParameterError("pulse width s must be > 0");
  if (rotation_rad < 0.0) throw ParameterError("rotation angle must be >= 0");
  PulseSpec p;
  p.kind = PulseKind::Gaussian;
  p.width_ps = width_ps;
  p.center_ps = center_ps;
  p.dot = dot;
  p.rotation_rad = rotation_rad;
  p.amplitude = rotation_rad / (width_ps * kSqrtPi);
  return p;
}

TwoComponentSolution solve_two_component(double s, double delta, double rotation_rad) {
  if (!(s > 0.0)) throw ParameterError("pulse width s must be > 0");
  if (!(delta > 0.0)) {
    throw ParameterError("components unresolvable: trion-exciton splitting must be > 0");
  }
  TwoComponentSolution out;
  const double s1 = s * std::exp(-std::pow(delta * s / 2.0, 2));
  const double effective_width = s - s1 * std::exp(-std::pow(delta * s1 / 2.0, 2));
  out.secondary_width_ps = s1;
  out.amplitude_pi_norm = kSqrtPi / effective_width;
  // The constraint normalizes the trion-channel area to π; with rotation = ∫Ω dt
  // a rotation R needs R/π times that amplitude (a 2π rotation doubles it).
  out.amplitude = out.amplitude_pi_norm * rotation_rad / units::kPi;
  out.residual_area = out.amplitude_pi_norm * effective_width - kSqrtPi;
  out.residual_width = s1 - s * std::exp(-std::pow(delta * s / 2.0, 2));
  return out;
}

PulseSpec two_component_pulse(double width_ps, double detuning_radps, double center_ps, Dot dot,
                              double rotation_rad) {
  const auto sol = solve_two_component(width_ps, detuning_radps, rotation_rad);
  PulseSpec p;
  p.kind = PulseKind::TwoComponent;
  p.width_ps = width_ps;
  p.secondary_width_ps = sol.secondary_width_ps;
  p.detuning_radps = detuning_radps;
  p.center_ps = center_ps;
  p.dot = dot;
  p.rotation_rad = rotation_rad;
  p.amplitude = sol.amplitude;
  return p;
}

std::complex<double> envelope_at(const PulseSpec& spec, double t) {
  const double x = t - spec.center_ps;
  if (std::abs(x) > spec.half_window() || spec.amplitude == 0.0) return {0.0, 0.0};
  const double main = std::exp(-std::pow(x / spec.width_ps, 2));
  if (spec.kind == PulseKind::Gaussian) return {spec.amplitude * main, 0.0};
  const double side = std::exp(-std::pow(x / spec.secondary_width_ps, 2));
  const std::complex<double> phase = std::polar(1.0, -spec.detuning_radps * x);
  return spec.amplitude * (main - side * phase);
}

std::complex<double> pulse_area(const PulseSpec& spec, double channel_detuning, int intervals) {
  if (intervals % 2 != 0) ++intervals;
  const double a = spec.center_ps - spec.half_window();
  const double h = 2.0 * spec.half_window() / intervals;
  auto f = [&](double t) {
    return envelope_at(spec, t) * std::polar(1.0, channel_detuning * (t - spec.center_ps));
  };
  std::complex<double> sum = f(a) + f(a + intervals * h);
  for (int k = 1; k < intervals; ++k) sum += (k % 2 == 1 ? 4.0 : 2.0) * f(a + k * h);
  return sum * h / 3.0;
}

}  // namespace qdgate
