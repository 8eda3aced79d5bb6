#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdgate/gate.hpp"
#include "qdgate/operators.hpp"

namespace qdgate {

/// A linearly spaced axis, endpoints included.
struct Axis {
  std::string name;
  std::string unit;
  double min = 0.0;
  double max = 1.0;
  int points = 2;

  void validate() const;
  std::vector<double> values() const;
};

struct SweepSpec {
  Axis field{"B", "T", 0.0, 2.0, 10};
  Axis inverse_width{"inv_s", "THz", 2.0, 10.0, 9};
  Axis eta{"eta", "", -0.1, 0.1, 5};
  int threads = 0;  // 0: hardware concurrency
};

struct OutputPaths {
  std::string summary_json;
  std::string trajectory_csv;
  std::string fig4_csv;
  std::string fig5_csv;
  std::string eta_csv;
};

/// Everything a CLI run needs. Human-facing units are converted in `from_json`.
struct RunConfig {
  PhysicalParams params;
  GateOptions options;
  std::string initial = "psi0";
  SweepSpec sweep;
  OutputPaths outputs;

  /// Unknown keys are rejected. Fields absent from `j` keep their current values.
  void apply_json(const nlohmann::json& j);
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig from_file(const std::string& path);
  nlohmann::json to_json() const;
};

/// "psi0" (all four states, equal weight) or one of "dndn", "dnup", "updn", "upup".
QubitAmplitudes initial_state_from_name(const std::string& name);

/// Gate run with the four density-matrix traces recorded on every sample.
GateResult run_fig4(const RunConfig& config);

struct Fig5Row {
  double field_tesla = 0.0;
  double inverse_width_thz = 0.0;
  double fidelity = 0.0;
  std::string error;
};

struct EtaRow {
  double eta = 0.0;
  double fidelity = 0.0;
  std::string error;
};

/// Row-major over (B, s⁻¹). Failed points carry NaN and the error message.
std::vector<Fig5Row> sweep_fig5(const RunConfig& config);

/// The η axis, with 0 and 0.1 inserted when the grid misses them.
std::vector<double> eta_values(const Axis& axis);
std::vector<EtaRow> sweep_eta(const RunConfig& config);

/// Evaluates `fn(i)` for i in [0, n) on up to `threads` workers; results land at index i.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, int threads, Fn fn);

void write_fig5_csv(std::ostream& os, const std::vector<Fig5Row>& rows);
void write_eta_csv(std::ostream& os, const std::vector<EtaRow>& rows);

struct OracleReport {
  std::vector<double> rabi_grid;
  std::vector<double> tunneling_grid;
  std::vector<double> times;
  double max_deviation = 0.0;
  // Strong-drive check at Ω = 50, τ = 0.48, t = t₀.
  double strong_drive_trion_error = 0.0;  // |ψ₂ + i|
  double strong_drive_tolerance = 0.0;    // 2 (τ/Ω)²
  nlohmann::json to_json() const;
};

/// Closed form vs numerical integration over a 5×5 (Ω, τ) grid and 10 times.
OracleReport oracle_comparison(double dt = 1e-3);

/// Dot-2 pulse applied to the two isolated two-level channels it addresses:
/// the resonant trion channel E(up)|E(dn) -> E(up)|T(dn) and the exciton
/// channel S|EH(up,dn) <-> S|V sitting Δ away.
struct ChannelReport {
  double trion_population = 0.0;  // |<i|f>|² on the trion channel
  double trion_phase_deg = 0.0;   // arg <i|f>
  double exciton_overlap = 0.0;   // |<i|f>| on the exciton channel
  nlohmann::json to_json() const;
};

ChannelReport channel_check(double width_ps, double detuning_radps, bool two_component = true,
                            double dt = 1e-3);

/// Solver output plus the isolated-channel check of the resulting pulse.
nlohmann::json pulse_solution_json(double width_ps, double detuning_radps);

std::string format_step_table(const std::vector<StepRow>& rows);

/// Writes `text` to `path`, throwing std::runtime_error with the path on failure.
void write_text_file(const std::string& path, const std::string& text);

/// Every floating-point leaf rounded to 12 significant digits.
nlohmann::json round_floats(nlohmann::json j);

/// %.12g, with "nan" for NaN.
std::string format_number(double v);

}  // namespace qdgate

#include "qdgate/detail/parallel_map.hpp"
