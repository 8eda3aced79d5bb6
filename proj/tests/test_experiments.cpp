#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qdgate/errors.hpp"
#include "qdgate/experiments.hpp"

using namespace qdgate;
using nlohmann::json;

TEST_CASE("shipped defaults match the built-in parameters") {
  const RunConfig file = RunConfig::from_file(std::string(QDGATE_SOURCE_DIR) + "/configs/defaults.json");
  const RunConfig builtin;
  CHECK(file.params.tunnel_period_ps == builtin.params.tunnel_period_ps);
  CHECK(file.params.splitting_radps == doctest::Approx(builtin.params.splitting_radps).epsilon(1e-15));
  CHECK(file.params.decay_rate_per_ps == doctest::Approx(1e-3));
  CHECK(file.params.g_electron == 0.48);
  CHECK(file.params.g_hole == 0.31);
  CHECK(file.options.width_ps == 0.2);
  CHECK(file.options.dt_ps == 1e-3);
  CHECK(file.initial == "psi0");
  CHECK(file.sweep.field.points == 10);
  CHECK(file.sweep.inverse_width.max == 10.0);
  CHECK(file.to_json() == builtin.to_json());
}

TEST_CASE("config unit conversions") {
  const RunConfig hbar = RunConfig::from_json({{"tau_meV", 2.0}});
  CHECK(hbar.params.tunnel_period_ps == doctest::Approx(0.517).epsilon(1e-3));
  const RunConfig h = RunConfig::from_json({{"tau_meV", 2.0}, {"tau_conversion", "h"}});
  CHECK(h.params.tunnel_period_ps == doctest::Approx(3.248).epsilon(1e-3));
  const RunConfig d = RunConfig::from_json({{"delta_radps", 5.0}, {"te_ns", 2.0}, {"B_T", 1.5}});
  CHECK(d.params.splitting_radps == 5.0);
  CHECK(d.params.decay_rate_per_ps == doctest::Approx(5e-4));
  CHECK(d.params.field_tesla == 1.5);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(RunConfig::from_json({{"T_ps", 3.0}, {"tau_meV", 2.0}}), ParameterError);
  CHECK_THROWS_AS(RunConfig::from_json({{"bogus", 1}}), ParameterError);
  CHECK_THROWS_AS(RunConfig::from_json({{"s_ps", "wide"}}), ParameterError);
  CHECK_THROWS_AS(RunConfig::from_json({{"s_ps", -0.2}}), ParameterError);
  CHECK_THROWS_AS(RunConfig::from_json({{"B_T", -1.0}}), ParameterError);
  CHECK_THROWS_AS(RunConfig::from_json({{"theta_m", 2.0}}), ParameterError);
  CHECK_THROWS_AS(RunConfig::from_json({{"initial", "sideways"}}), ParameterError);
  CHECK_THROWS_AS(RunConfig::from_json({{"tau_meV", 2.0}, {"tau_conversion", "hz"}}), ParameterError);
  CHECK_THROWS_AS(RunConfig::from_json({{"eta_sweep", {{"points", 1}}}}), ParameterError);
  CHECK_THROWS_AS(RunConfig::from_json({{"fig5", {{"B_T", {{"min", 2.0}, {"max", 1.0}}}}}}), ParameterError);
  CHECK_THROWS_AS(RunConfig::from_file("/nonexistent/config.json"), ParameterError);
}

TEST_CASE("initial state names") {
  CHECK(initial_state_from_name("psi0") == uniform_superposition());
  CHECK(initial_state_from_name("updn")(2) == cplx(1.0));
  CHECK(initial_state_from_name("dnup")(1) == cplx(1.0));
}

TEST_CASE("axes") {
  const Axis a{"B", "T", 0.0, 2.0, 10};
  const auto v = a.values();
  REQUIRE(v.size() == 10);
  CHECK(v.front() == 0.0);
  CHECK(v.back() == 2.0);
  const auto eta = eta_values(Axis{"eta", "", -0.1, 0.1, 5});
  REQUIRE(eta.size() == 5);
  CHECK(eta[1] == doctest::Approx(-0.05));
  CHECK(eta[2] == 0.0);
  CHECK(eta[4] == 0.1);
  const auto odd = eta_values(Axis{"eta", "", -0.3, 0.3, 4});
  CHECK(odd.size() == 5);
  CHECK(std::count(odd.begin(), odd.end(), 0.0) == 1);
  CHECK(std::count(odd.begin(), odd.end(), 0.1) == 1);
  CHECK(std::is_sorted(odd.begin(), odd.end()));
}

TEST_CASE("parallel map keeps index order") {
  const auto serial = parallel_map<int>(37, 1, [](std::size_t i) { return int(i * i); });
  const auto threaded = parallel_map<int>(37, 4, [](std::size_t i) { return int(i * i); });
  CHECK(serial == threaded);
  CHECK(threaded[36] == 1296);
  CHECK(parallel_map<int>(0, 3, [](std::size_t) { return 1; }).empty());
}

TEST_CASE("fig5 sweep: completeness and serial/parallel identity") {
  RunConfig c;
  c.sweep.field = {"B", "T", 0.0, 1.5, 2};
  c.sweep.inverse_width = {"inv_s", "THz", 4.0, 5.0, 2};
  c.sweep.threads = 1;
  std::ostringstream serial;
  write_fig5_csv(serial, sweep_fig5(c));
  c.sweep.threads = 3;
  const auto rows = sweep_fig5(c);
  std::ostringstream parallel;
  write_fig5_csv(parallel, rows);
  CHECK(serial.str() == parallel.str());
  REQUIRE(rows.size() == 4);
  CHECK(rows[1].field_tesla == 0.0);
  CHECK(rows[1].inverse_width_thz == 5.0);
  CHECK(rows[2].field_tesla == 1.5);
  for (const auto& r : rows) {
    CHECK(r.error.empty());
    CHECK(std::isfinite(r.fidelity));
  }
  // the B = 0 column reproduces a direct gate run
  GateOptions o;
  o.width_ps = 0.2;
  o.record_stride = 1000;
  CHECK(rows[1].fidelity == doctest::Approx(run_gate(uniform_superposition(), PhysicalParams{}, o).fidelity).epsilon(1e-12));
  CHECK(serial.str().rfind("B_T,inv_s_THz,fidelity,error\n0,4,", 0) == 0);
}

TEST_CASE("failed sweep points become NaN rows") {
  RunConfig c;
  c.options.dt_ps = 0.6;
  c.options.fail_hard = true;
  c.sweep.eta = {"eta", "", 0.0, 0.1, 2};
  const auto rows = sweep_eta(c);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(std::isnan(r.fidelity));
    CHECK_FALSE(r.error.empty());
  }
  std::ostringstream os;
  write_eta_csv(os, rows);
  CHECK(os.str().find("0,nan,\"") != std::string::npos);
}

TEST_CASE("fig4 traces are deterministic") {
  RunConfig c;
  c.options.record_stride = 100;
  auto csv = [&] {
    std::ostringstream os;
    run_fig4(c).trajectory.write_csv(os);
    return os.str();
  };
  const std::string a = csv();
  CHECK(a == csv());
  CHECK(a.rfind("t_ps,E(dn)|E(dn)_re,E(dn)|E(dn)_im,E(dn)|E(up)_re,E(dn)|E(up)_im,"
                "E(up)|E(dn)_re,E(up)|E(dn)_im,E(up)|E(dn)><E(up)|E(up)_re,E(up)|E(dn)><E(up)|E(up)_im,"
                "trace,min_eig\n-1.6,0.25,0,",
                0) == 0);
}

TEST_CASE("pulse-solve JSON") {
  const json j = pulse_solution_json(0.2, units::mev_to_radps(4.0));
  CHECK(j["s1_ps"].get<double>() == doctest::Approx(0.1383).epsilon(1e-3));
  CHECK(j["omega20"].get<double>() == doctest::Approx(21.1).epsilon(2e-3));
  CHECK(j.contains("channel_check"));
  CHECK_THROWS_AS(pulse_solution_json(0.2, 0.0), ParameterError);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(std::nan("")) == "nan");
  const json r = round_floats(json{{"a", 0.12345678901234567}, {"b", {1.0 / 3.0}}, {"c", 3}});
  CHECK(r["a"].get<double>() == 0.123456789012);
  CHECK(r["b"][0].get<double>() == 0.333333333333);
  CHECK(r["c"] == 3);
}

TEST_CASE("output files") {
  CHECK_THROWS_AS(write_text_file("/nonexistent/dir/out.csv", "x"), std::runtime_error);
}
