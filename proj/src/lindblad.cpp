#include "qdgate/lindblad.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <Eigen/Sparse>

#include "qdgate/errors.hpp"
#include "qdgate/operators.hpp"

namespace qdgate {

namespace {

using SpMat = Eigen::SparseMatrix<cplx>;
const cplx kI{0.0, 1.0};

SpMat to_sparse(const Eigen::MatrixXcd& m) { return m.sparseView(0.0, 0.0); }

struct CompiledDrive {
  PulseSpec pulse;
  SpMat c;
  SpMat c_dag;
};

// Sparse form of the generator. `h_static` holds the Hermitian part; for the
// master equation `h_eff` additionally carries −(i/2) Σ L†L.
struct Generator {
  SpMat h_static;
  SpMat h_eff;
  SpMat h_eff_dag;
  std::vector<CompiledDrive> drives;
  std::vector<SpMat> jumps;
  std::vector<SpMat> jumps_dag;

  explicit Generator(const EvolutionProblem& p, bool with_collapse) {
    const auto n = static_cast<Eigen::Index>(p.basis->size());
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& t : p.static_terms) h += t.matrix;
    Eigen::MatrixXcd heff = h;
    if (with_collapse) {
      for (const auto& l : p.collapse_ops) {
        heff -= 0.5 * kI * (l.matrix.adjoint() * l.matrix);
        jumps.push_back(to_sparse(l.matrix));
        jumps_dag.push_back(to_sparse(l.matrix.adjoint()));
      }
    }
    h_static = to_sparse(h);
    h_eff = to_sparse(heff);
    h_eff_dag = to_sparse(heff.adjoint());
    for (const auto& d : p.drives) {
      drives.push_back({d.pulse, to_sparse(d.coupling.matrix), to_sparse(d.coupling.matrix.adjoint())});
    }
  }

  void schrodinger(double t, const Eigen::VectorXcd& psi, Eigen::VectorXcd& out) const {
    out.noalias() = h_static * psi;
    for (const auto& d : drives) {
      const cplx a = 0.5 * envelope_at(d.pulse, t);
      if (a == cplx(0.0)) continue;
      out.noalias() += a * (d.c * psi);
      out.noalias() += std::conj(a) * (d.c_dag * psi);
    }
    out *= -kI;
  }

  void lindblad(double t, const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const {
    out.noalias() = -kI * (h_eff * rho);
    out.noalias() += kI * (rho * h_eff_dag);
    for (const auto& d : drives) {
      const cplx a = 0.5 * envelope_at(d.pulse, t);
      if (a == cplx(0.0)) continue;
      const cplx ac = std::conj(a);
      out.noalias() += (-kI * a) * (d.c * rho);
      out.noalias() += (-kI * ac) * (d.c_dag * rho);
      out.noalias() += (kI * a) * (rho * d.c);
      out.noalias() += (kI * ac) * (rho * d.c_dag);
    }
    for (std::size_t k = 0; k < jumps.size(); ++k) {
      Eigen::MatrixXcd lr = jumps[k] * rho;
      out.noalias() += lr * jumps_dag[k];
    }
  }
};

std::size_t step_count(const EvolutionProblem& p) {
  const double span = p.t_end - p.t_start;
  return static_cast<std::size_t>(std::max(1.0, std::ceil(span / p.dt - 1e-9)));
}

template <typename State>
void ensure_finite(const State& s, double t) {
  if (!s.allFinite()) {
    std::ostringstream msg;
    msg << "integration diverged at t = " << t << " ps";
    throw IntegrationError(msg.str(), t);
  }
}

void init_trajectory(const EvolutionProblem& p, Trajectory& tr) {
  for (const auto& o : p.observables) tr.names.push_back(o.name);
  tr.values.resize(p.observables.size());
}

void fail_if_needed(const EvolutionProblem& p, const Diagnostics& d, double t) {
  if (p.fail_hard && !d.within_tolerance) {
    std::ostringstream msg;
    msg << "diagnostic tolerance breached at t = " << t << " ps (trace drift "
        << d.max_trace_drift << ", hermiticity " << d.max_hermiticity_error << ", min eig "
        << d.min_eigenvalue << ", norm drift " << d.max_norm_drift << ")";
    throw IntegrationError(msg.str(), t);
  }
}

std::string format12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Observable make_observable(const Basis& basis, std::size_t row, std::size_t col) {
  std::string name = basis[row].label();
  if (row != col) name += "><" + basis[col].label();
  return {name, row, col};
}

void EvolutionProblem::validate() const {
  if (!basis) throw StructuralError("evolution problem has no basis");
  if (!(dt > 0.0)) throw ParameterError("dt must be > 0");
  if (!(t_end > t_start)) throw ParameterError("t_end must exceed t_start");
  if (record_stride == 0) throw ParameterError("record_stride must be >= 1");
  auto check = [this](const OperatorMatrix& op) {
    if (op.basis.get() != basis.get() && op.basis->labels() != basis->labels()) {
      throw StructuralError("operator '" + op.name + "' is built over a different basis");
    }
  };
  for (const auto& t : static_terms) check(t);
  for (const auto& d : drives) {
    check(d.coupling);
    d.pulse.validate();
  }
  for (const auto& l : collapse_ops) check(l);
  for (const auto& o : observables) {
    if (o.row >= basis->size() || o.col >= basis->size()) {
      throw StructuralError("observable '" + o.name + "' is out of range");
    }
  }
}

void Trajectory::write_csv(std::ostream& os) const {
  os << "t_ps";
  for (const auto& n : names) os << ',' << csv_field(n + "_re") << ',' << csv_field(n + "_im");
  os << ",trace,min_eig\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    os << format12(times[i]);
    for (const auto& v : values) os << ',' << format12(v[i].real()) << ',' << format12(v[i].imag());
    os << ',' << format12(trace[i]) << ',' << format12(min_eig[i]) << '\n';
  }
}

Trajectory evolve_schrodinger(const EvolutionProblem& p, const StateVector& psi0,
                              const Tolerances& tol) {
  p.validate();
  if (psi0.amplitudes.size() != static_cast<Eigen::Index>(p.basis->size())) {
    throw StructuralError("initial state dimension does not match the problem basis");
  }
  if (!psi0.is_normalized()) throw ParameterError("initial state must be normalized");

  const Generator gen(p, false);
  const std::size_t n = step_count(p);
  const double h = (p.t_end - p.t_start) / static_cast<double>(n);
  const double norm0 = psi0.amplitudes.squaredNorm();

  Trajectory tr;
  init_trajectory(p, tr);
  Diagnostics& diag = tr.diagnostics;

  Eigen::VectorXcd psi = psi0.amplitudes;
  const auto dim = psi.size();
  Eigen::VectorXcd k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);

  auto record = [&](double t) {
    tr.times.push_back(t);
    for (std::size_t k = 0; k < p.observables.size(); ++k) {
      const auto& o = p.observables[k];
      tr.values[k].push_back(psi(static_cast<Eigen::Index>(o.row)) *
                             std::conj(psi(static_cast<Eigen::Index>(o.col))));
    }
    const double nrm = psi.squaredNorm();
    tr.trace.push_back(nrm);
    tr.min_eig.push_back(0.0);
    diag.max_norm_drift = std::max(diag.max_norm_drift, std::abs(nrm - norm0));
    diag.within_tolerance = diag.max_norm_drift <= tol.norm;
    fail_if_needed(p, diag, t);
  };

  double t = p.t_start;
  record(t);
  for (std::size_t step = 1; step <= n; ++step) {
    gen.schrodinger(t, psi, k1);
    tmp = psi + 0.5 * h * k1;
    gen.schrodinger(t + 0.5 * h, tmp, k2);
    tmp = psi + 0.5 * h * k2;
    gen.schrodinger(t + 0.5 * h, tmp, k3);
    tmp = psi + h * k3;
    gen.schrodinger(t + h, tmp, k4);
    psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = p.t_start + static_cast<double>(step) * h;
    ensure_finite(psi, t);
    if (step % p.record_stride == 0 || step == n) record(t);
  }
  diag.steps = n;
  tr.final_psi = StateVector{p.basis, psi};
  return tr;
}

Trajectory evolve_lindblad(const EvolutionProblem& p, const DensityMatrix& rho0,
                           const Tolerances& tol) {
  p.validate();
  if (rho0.rho.rows() != static_cast<Eigen::Index>(p.basis->size())) {
    throw StructuralError("initial density matrix dimension does not match the problem basis");
  }
  if (!rho0.is_valid()) {
    throw ParameterError("initial density matrix must be Hermitian, unit-trace and positive");
  }

  const Generator gen(p, true);
  const std::size_t n = step_count(p);
  const double h = (p.t_end - p.t_start) / static_cast<double>(n);
  const double trace0 = rho0.trace().real();

  Trajectory tr;
  init_trajectory(p, tr);
  Diagnostics& diag = tr.diagnostics;
  diag.min_eigenvalue = 1.0;

  Eigen::MatrixXcd rho = rho0.rho;
  const auto dim = rho.rows();
  Eigen::MatrixXcd k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), tmp(dim, dim);

  auto record = [&](double t) {
    tr.times.push_back(t);
    for (std::size_t k = 0; k < p.observables.size(); ++k) {
      const auto& o = p.observables[k];
      tr.values[k].push_back(rho(static_cast<Eigen::Index>(o.row), static_cast<Eigen::Index>(o.col)));
    }
    const DensityMatrix view{p.basis, rho};
    const double trace = rho.trace().real();
    tr.trace.push_back(trace);
    diag.max_trace_drift = std::max(diag.max_trace_drift, std::abs(trace - trace0));
    diag.max_hermiticity_error = std::max(diag.max_hermiticity_error, view.hermiticity_error());
    double me = 0.0;
    if (p.track_positivity) {
      me = view.min_eigenvalue();
      diag.min_eigenvalue = std::min(diag.min_eigenvalue, me);
    }
    tr.min_eig.push_back(me);
    diag.within_tolerance = diag.max_trace_drift <= tol.trace &&
                            diag.max_hermiticity_error <= tol.hermiticity &&
                            (!p.track_positivity || diag.min_eigenvalue >= tol.min_eigenvalue);
    fail_if_needed(p, diag, t);
  };

  double t = p.t_start;
  record(t);
  for (std::size_t step = 1; step <= n; ++step) {
    gen.lindblad(t, rho, k1);
    tmp = rho + 0.5 * h * k1;
    gen.lindblad(t + 0.5 * h, tmp, k2);
    tmp = rho + 0.5 * h * k2;
    gen.lindblad(t + 0.5 * h, tmp, k3);
    tmp = rho + h * k3;
    gen.lindblad(t + h, tmp, k4);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = p.t_start + static_cast<double>(step) * h;
    ensure_finite(rho, t);
    if (step % p.record_stride == 0 || step == n) record(t);
  }
  diag.steps = n;
  if (!p.track_positivity) {
    diag.min_eigenvalue = DensityMatrix{p.basis, rho}.min_eigenvalue();
  }
  tr.final_rho = DensityMatrix{p.basis, rho};
  return tr;
}

ThreeLevelOracle three_level_oracle(double rabi, double tau, double t) {
  const double a = 0.5 * rabi;
  const double w2 = tau * tau + a * a;
  const double w = std::sqrt(w2);
  ThreeLevelOracle out;
  if (w2 == 0.0) {
    out.psi = Eigen::Vector3cd(1.0, 0.0, 0.0);
    out.t0 = std::numeric_limits<double>::infinity();
    return out;
  }
  const double c = std::cos(w * t);
  const double s = std::sin(w * t);
  out.psi(0) = (tau * tau + a * a * c) / w2;
  out.psi(1) = cplx(0.0, -a * w * s / w2);
  out.psi(2) = (tau * a * c - tau * a) / w2;
  out.t0 = units::kPi / (2.0 * w);
  return out;
}

BasisPtr three_level_basis(Spin m) {
  return Basis::from_states({
      {DotConfig::single(Spin::Down), DotConfig::single(m)},
      {DotConfig::trion(Spin::Down), DotConfig::single(m)},
      {DotConfig::singlet_pair(), DotConfig::electron_hole(m, Spin::Down)},
  });
}

EvolutionProblem three_level_problem(double rabi, double tau, double t_end, double dt) {
  EvolutionProblem p;
  p.basis = three_level_basis();
  const OperatorMatrix c = build_optical_coupling(p.basis, Dot::One);
  OperatorMatrix drive = OperatorMatrix::zero(p.basis, OperatorRole::HamiltonianTerm, "constant_drive");
  drive.matrix = 0.5 * rabi * (c.matrix + c.matrix.adjoint());
  p.static_terms = {build_tunneling(p.basis, tau), drive};
  p.t_start = 0.0;
  p.t_end = t_end;
  p.dt = dt;
  p.record_stride = 1;
  return p;
}

ConvergenceReport convergence_check(EvolutionProblem problem, const DensityMatrix& rho0, double dt) {
  problem.track_positivity = false;
  problem.observables.clear();
  auto final_at = [&](double step) {
    problem.dt = step;
    problem.record_stride = std::numeric_limits<std::size_t>::max();
    return evolve_lindblad(problem, rho0).final_rho->rho;
  };
  const Eigen::MatrixXcd coarse = final_at(dt);
  const Eigen::MatrixXcd fine = final_at(dt / 2.0);
  const Eigen::MatrixXcd finest = final_at(dt / 4.0);
  ConvergenceReport r;
  r.deviation = (coarse - fine).cwiseAbs().maxCoeff();
  r.finer_deviation = (fine - finest).cwiseAbs().maxCoeff();
  r.ratio = r.finer_deviation > 0.0 ? r.deviation / r.finer_deviation : 0.0;
  return r;
}

}  // namespace qdgate
