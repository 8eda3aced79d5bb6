// Batch command-line front end: qdgate <subcommand> [--config file.json] [flags]
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdgate/errors.hpp"
#include "qdgate/experiments.hpp"
#include "qdgate/gate.hpp"
#include "qdgate/units.hpp"

namespace {

using nlohmann::json;
using namespace qdgate;

constexpr int kExitOk = 0;
constexpr int kExitParameter = 1;
constexpr int kExitIntegration = 2;

// Command-line values that override config-file fields.
struct Overrides {
  std::string config;
  std::optional<double> s_ps, delta_mev, t_ps, te_ns, field, eta, dt;
  std::optional<std::string> initial;
  std::optional<int> threads;
  bool pure = false;
  bool no_dissipation = false;
  bool gaussian = false;
  bool fail_hard = false;
  std::string out;
  std::string csv;

  void attach(CLI::App* app, bool with_csv) {
    app->add_option("--config", config, "JSON config file")->check(CLI::ExistingFile);
    app->add_option("--s-ps", s_ps, "pulse width s (ps)");
    app->add_option("--delta-mev", delta_mev, "trion-exciton splitting (meV)");
    app->add_option("--T-ps", t_ps, "tunneling period T (ps)");
    app->add_option("--te-ns", te_ns, "exciton lifetime (ns)");
    app->add_option("--B", field, "magnetic field (T)");
    app->add_option("--eta", eta, "tunneling-time error");
    app->add_option("--dt", dt, "integrator step (ps)");
    app->add_option("--initial", initial, "psi0, dndn, dnup, updn or upup");
    app->add_option("--threads", threads, "sweep worker threads (0 = all cores)");
    app->add_flag("--pure", pure, "Schrodinger evolution without decay");
    app->add_flag("--no-dissipation", no_dissipation, "drop the collapse operators");
    app->add_flag("--gaussian", gaussian, "single 2pi Gaussian on dot 2");
    app->add_flag("--fail-hard", fail_hard, "abort when a diagnostic leaves tolerance");
    app->add_option("--out", out, "JSON output path (default stdout)");
    if (with_csv) app->add_option("--csv", csv, "CSV output path");
  }

  RunConfig load() const {
    RunConfig c = config.empty() ? RunConfig{} : RunConfig::from_file(config);
    json j = json::object();
    if (s_ps) j["s_ps"] = *s_ps;
    if (delta_mev) j["delta_meV"] = *delta_mev;
    if (t_ps) j["T_ps"] = *t_ps;
    if (te_ns) j["te_ns"] = *te_ns;
    if (field) j["B_T"] = *field;
    if (eta) j["eta"] = *eta;
    if (dt) j["dt_ps"] = *dt;
    if (initial) j["initial"] = *initial;
    if (threads) j["threads"] = *threads;
    if (pure) j["pure"] = true;
    if (no_dissipation) j["dissipation"] = false;
    if (gaussian) j["two_component"] = false;
    c.apply_json(j);
    c.options.fail_hard = fail_hard;
    return c;
  }
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

std::string pick(const std::string& flag, const std::string& configured) {
  return flag.empty() ? configured : flag;
}

void warn_all(const GateResult& r) {
  for (const auto& w : r.schedule.warnings) std::cerr << "warning: " << w << '\n';
  if (!r.trajectory.diagnostics.within_tolerance) {
    std::cerr << "warning: integrator diagnostics left tolerance\n";
  }
}

int cmd_gate(const Overrides& o) {
  const RunConfig c = o.load();
  GateOptions opts = c.options;
  const std::string csv = pick(o.csv, c.outputs.trajectory_csv);
  opts.record_figure_traces = !csv.empty();
  const GateResult r = run_gate(initial_state_from_name(c.initial), c.params, opts);
  warn_all(r);
  emit(pick(o.out, c.outputs.summary_json), r.to_json(c.params, opts).dump(2) + "\n");
  if (!csv.empty()) {
    std::ostringstream os;
    r.trajectory.write_csv(os);
    write_text_file(csv, os.str());
  }
  return kExitOk;
}

int cmd_fig4(const Overrides& o) {
  const RunConfig c = o.load();
  const GateResult r = run_fig4(c);
  warn_all(r);
  std::ostringstream os;
  r.trajectory.write_csv(os);
  emit(pick(o.csv, c.outputs.fig4_csv), os.str());
  if (!o.out.empty()) write_text_file(o.out, r.to_json(c.params, c.options).dump(2) + "\n");
  return kExitOk;
}

int cmd_fig5(const Overrides& o) {
  const RunConfig c = o.load();
  std::ostringstream os;
  write_fig5_csv(os, sweep_fig5(c));
  emit(pick(o.csv, c.outputs.fig5_csv), os.str());
  return kExitOk;
}

int cmd_eta(const Overrides& o) {
  const RunConfig c = o.load();
  std::ostringstream os;
  write_eta_csv(os, sweep_eta(c));
  emit(pick(o.csv, c.outputs.eta_csv), os.str());
  return kExitOk;
}

int cmd_oracle(const Overrides& o) {
  const RunConfig c = o.load();
  const OracleReport r = oracle_comparison(c.options.dt_ps);
  json j = r.to_json();
  j["grid_pass"] = r.max_deviation < 1e-7;
  j["strong_drive_pass"] = r.strong_drive_trion_error < r.strong_drive_tolerance;
  emit(o.out, round_floats(j).dump(2) + "\n");
  return kExitOk;
}

int cmd_pulse_solve(const Overrides& o) {
  const RunConfig c = o.load();
  emit(o.out, round_floats(pulse_solution_json(c.options.width_ps, c.params.splitting_radps)).dump(2) + "\n");
  return kExitOk;
}

int cmd_table1(const Overrides& o) {
  RunConfig c = o.load();
  const std::string name = o.initial.value_or("dndn");
  if (name == "psi0") throw ParameterError("table1 needs a qubit basis state (dndn, dnup, updn, upup)");
  const QubitAmplitudes a = initial_state_from_name(name);
  Eigen::Index k = 0;
  a.cwiseAbs().maxCoeff(&k);
  const Spin s1 = k >= 2 ? Spin::Up : Spin::Down;
  const Spin s2 = k % 2 == 1 ? Spin::Up : Spin::Down;
  std::ostringstream os;
  os << "initial " << name << "\n" << format_step_table(stepwise_state_table(s1, s2, c.params, c.options));
  emit(o.out, os.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-dot optical phase gate simulator"};
  app.require_subcommand(1);

  struct Entry {
    const char* name;
    const char* help;
    bool csv;
    int (*run)(const Overrides&);
  };
  const Entry entries[] = {
      {"gate", "single gate run; JSON summary and optional trajectory CSV", true, cmd_gate},
      {"fig4", "density-matrix traces of the gate as CSV", true, cmd_fig4},
      {"fig5", "fidelity over (B, 1/s) as CSV", true, cmd_fig5},
      {"eta-sweep", "fidelity against tunneling-time error as CSV", true, cmd_eta},
      {"oracle", "closed-form three-level comparison report", false, cmd_oracle},
      {"pulse-solve", "two-component pulse parameters as JSON", false, cmd_pulse_solve},
      {"table1", "stepwise dominant states for one basis state", false, cmd_table1},
  };
  std::vector<Overrides> overrides(std::size(entries));
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(entries); ++i) {
    CLI::App* sub = app.add_subcommand(entries[i].name, entries[i].help);
    overrides[i].attach(sub, entries[i].csv);
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitParameter;
  }

  try {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i]->parsed()) return entries[i].run(overrides[i]);
    }
  } catch (const IntegrationError& e) {
    std::cerr << "integration failed at t = " << e.time_ps() << " ps: " << e.what() << '\n';
    return kExitIntegration;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParameter;
  }
  return kExitParameter;
}
