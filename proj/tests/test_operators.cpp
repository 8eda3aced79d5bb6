#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "qdgate/operators.hpp"

using namespace qdgate;

namespace {

using Index = Eigen::Index;

Index at(const Basis& b, const char* label) { return static_cast<Index>(*b.find(label)); }

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd k;
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return k;
}

Eigen::MatrixXcd hermitian_part(const Eigen::MatrixXcd& c) { return c + c.adjoint(); }

}  // namespace

TEST_CASE("Hamiltonian builders are Hermitian") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int cap : {0, 1, 2}) {
    const BasisPtr b = enumerate_basis(cap);
    for (int trial = 0; trial < 5; ++trial) {
      CHECK(build_tunneling(b, u(rng)).hermiticity_error() < 1e-12);
      CHECK(build_zeeman(b, u(rng), u(rng), u(rng)).hermiticity_error() < 1e-12);
      CHECK(build_detuning(b, u(rng)).hermiticity_error() < 1e-12);
      const HoleMixingModel m{0.4 * u(rng), u(rng)};
      for (Dot d : {Dot::One, Dot::Two}) {
        const auto c = build_optical_coupling(b, d, m).matrix;
        CHECK((hermitian_part(c) - hermitian_part(c).adjoint()).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }
}

TEST_CASE("tunneling couples trion and tunneled-hole pairs only") {
  const double tau = 0.48;
  const BasisPtr b = enumerate_basis(1);
  const auto t = build_tunneling(b, tau).matrix;
  const Index tr = at(*b, "T(dn)|E(up)");
  const Index th = at(*b, "S|EH(up,dn)");
  CHECK(t(tr, th) == cplx(tau));
  CHECK(t(th, tr) == cplx(tau));
  CHECK(t(tr, tr) == cplx(0.0));
  CHECK(t(th, th) == cplx(0.0));
  int nonzero = 0;
  for (Index i = 0; i < t.rows(); ++i) {
    for (Index j = 0; j < t.cols(); ++j) {
      if (t(i, j) == cplx(0.0)) continue;
      ++nonzero;
      CHECK(t(i, j) == cplx(tau));
      const auto& a = (*b)[static_cast<std::size_t>(i)];
      const auto& c = (*b)[static_cast<std::size_t>(j)];
      const bool forward = a.dot1.kind == DotKind::Trion && c.dot1.kind == DotKind::SingletPair;
      const bool back = c.dot1.kind == DotKind::Trion && a.dot1.kind == DotKind::SingletPair;
      CHECK((forward || back));
    }
  }
  CHECK(nonzero == 8);
  CHECK(build_tunneling(b, 0.0).matrix.isZero());
}

TEST_CASE("tunneling preserves hole spin") {
  const BasisPtr b = enumerate_basis(1);
  const auto t = build_tunneling(b, 0.7).matrix;
  Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(t.rows(), t.cols());
  for (const auto& s : b->states()) {
    DotConfig d1 = s.dot1, d2 = s.dot2;
    if (d1.holes()) d1 = *flip_hole(d1);
    if (d2.holes()) d2 = *flip_hole(d2);
    const auto j = b->find(d1, d2);
    REQUIRE(j);
    perm(static_cast<Index>(*j), static_cast<Index>(s.index)) = 1.0;
  }
  CHECK((perm * t * perm.transpose() - t).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("free tunneling for one period moves the trion with phase -i") {
  const double period = 3.27;
  const auto p = three_level_problem(0.0, units::kPi / (2 * period), period);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(3);
  v(1) = 1.0;
  const auto psi = evolve_schrodinger(p, StateVector{p.basis, v}).final_psi->amplitudes;
  CHECK(std::abs(psi(2) - cplx(0.0, -1.0)) < 1e-9);
}

TEST_CASE("optical coupling selection rules and Pauli blocking") {
  const BasisPtr b = enumerate_basis(2);
  for (const HoleMixingModel m : {HoleMixingModel{}, HoleMixingModel{0.5, 1.1}}) {
    const auto c1 = build_optical_coupling(b, Dot::One, m).matrix;
    const auto c2 = build_optical_coupling(b, Dot::Two, m).matrix;
    // out of |↓↑⟩₁|⇓↓⟩₂ under dot 2: two ⇓ holes
    CHECK(c2.col(at(*b, "S|EH(dn,dn)")).isZero(0.0));
    // out of |↑↑⟩ under either dot: duplicate spin-up electron
    CHECK(c1.col(at(*b, "E(up)|E(up)")).isZero(0.0));
    CHECK(c2.col(at(*b, "E(up)|E(up)")).isZero(0.0));
    CHECK(c2(at(*b, "E(up)|T(dn)"), at(*b, "E(up)|E(dn)")) == cplx(m.rabi_scale()));
    CHECK(c1(at(*b, "T(dn)|E(dn)"), at(*b, "E(dn)|E(dn)")) == cplx(m.rabi_scale()));
    CHECK(c2(at(*b, "S|EH(up,dn)"), at(*b, "S|V")) == cplx(m.rabi_scale()));
  }
}

TEST_CASE("hole mixing coefficients") {
  const auto h0 = build_hole_mixing_hamiltonians(0.0, 0.4, 2.0);
  CHECK(h0.minus(0) == cplx(1.0));
  CHECK(h0.minus(1) == cplx(0.0));

  const double th = units::kPi / 6;
  const HoleMixingModel m{th, 0.3};
  CHECK(std::abs(m.minus_coefficients()(1) - (-std::sqrt(1.0 / 3.0) * 0.5 * std::polar(1.0, -0.3))) < 1e-15);
  CHECK(std::abs(m.plus_coefficients()(0) - (-std::sqrt(1.0 / 3.0) * 0.5 * std::polar(1.0, 0.3))) < 1e-15);
  CHECK(m.polarization_weights().norm() == doctest::Approx(1.0).epsilon(1e-14));

  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const HoleMixingModel g{0.49 * units::kPi * i / 19.0, 2.0 * units::kPi * j / 19.0};
      CHECK(std::abs(g.combined_coefficients()(1)) < 1e-12);
    }
  }
}

TEST_CASE("effective Rabi scale and the recombined coefficient") {
  CHECK(effective_rabi_scale(0.0) == 1.0);
  CHECK(effective_rabi_scale(units::kPi / 2) == doctest::Approx(std::sqrt(1.0 / 3.0)));
  const HoleMixingModel m{units::kPi / 6, 0.0};
  CHECK(m.rabi_scale() == doctest::Approx(0.9128709292).epsilon(1e-9));
  CHECK(m.recombined_rabi_scale() == doctest::Approx(0.7302967433).epsilon(1e-9));
  // the surviving channel of the combined coupling is the recombined value
  CHECK(std::abs(m.combined_coefficients()(0)) == doctest::Approx(m.recombined_rabi_scale()));
}

TEST_CASE("zeeman term") {
  const BasisPtr b = enumerate_basis(1);
  CHECK(build_zeeman(b, 0.0, 0.48, 0.31).matrix.isZero(0.0));
  const double we = units::larmor_radps(0.48, 1.5);
  CHECK(we == doctest::Approx(0.06331).epsilon(1e-3));
  CHECK(2 * units::kPi / we == doctest::Approx(99.2).epsilon(1e-3));

  const auto z = build_zeeman(b, 1.5, 0.48, 0.31).matrix;
  CHECK(z(at(*b, "E(up)|E(dn)"), at(*b, "E(dn)|E(dn)")) == cplx(0.5 * we));
  CHECK(z(at(*b, "T(up)|E(dn)"), at(*b, "T(dn)|E(dn)")) ==
        cplx(0.5 * units::larmor_radps(0.31, 1.5)));
  // singlet electrons and the empty dot carry no spin term
  CHECK(z(at(*b, "S|V"), at(*b, "S|V")) == cplx(0.0));
  CHECK(z.col(at(*b, "S|V")).isZero(0.0));
}

TEST_CASE("zeeman precession returns after one Larmor period") {
  const BasisPtr b = qubit_basis();
  const double we = units::larmor_radps(0.48, 1.5);
  EvolutionProblem p;
  p.basis = b;
  p.static_terms = {build_zeeman(b, 1.5, 0.48, 0.31)};
  p.t_end = units::kPi / we;
  p.dt = 1e-2;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v(3) = 1.0;
  const auto half = evolve_schrodinger(p, StateVector{b, v}).final_psi->amplitudes;
  CHECK(std::norm(half(0)) > 1 - 1e-9);
  p.t_end = 2 * units::kPi / we;
  const auto full = evolve_schrodinger(p, StateVector{b, v}).final_psi->amplitudes;
  CHECK(std::norm(full(3)) > 1 - 1e-9);
}

TEST_CASE("detuning sits on the empty-dot states") {
  const BasisPtr b = enumerate_basis(1);
  CHECK(build_detuning(b, 0.0).matrix.isZero(0.0));
  const auto d = build_detuning(b, 6.0).matrix;
  CHECK(d(at(*b, "S|V"), at(*b, "S|V")) == cplx(-6.0));
  CHECK(d.diagonal().cwiseAbs().sum() == doctest::Approx(6.0));
  CHECK((d - Eigen::MatrixXcd(d.diagonal().asDiagonal())).isZero(0.0));
}

TEST_CASE("a global diagonal shift leaves populations unchanged") {
  const auto base = test::pulse_problem(gaussian_pulse(0.2, 0.0, units::kPi / 2, Dot::One));
  auto shifted = base;
  OperatorMatrix c = OperatorMatrix::zero(base.basis, OperatorRole::HamiltonianTerm, "shift");
  c.matrix = 3.7 * Eigen::MatrixXcd::Identity(2, 2);
  shifted.static_terms.push_back(c);
  const auto a = evolve_schrodinger(base, test::ground(base.basis)).final_psi->amplitudes;
  const auto s = evolve_schrodinger(shifted, test::ground(base.basis)).final_psi->amplitudes;
  CHECK((a.cwiseAbs2() - s.cwiseAbs2()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("collapse operators") {
  const BasisPtr b = enumerate_basis(1);
  const auto ops = build_collapse_ops(b, 1e-3);
  std::vector<std::string> names;
  for (const auto& l : ops) names.push_back(l.name);
  CHECK(names == std::vector<std::string>{"decay_dot1_euphdn", "decay_dot1_ednhup",
                                          "decay_dot2_euphdn", "decay_dot2_ednhup"});
  const auto l = ops[0].matrix;
  CHECK(l(at(*b, "E(dn)|E(up)"), at(*b, "T(dn)|E(up)")) == cplx(std::sqrt(1e-3)));
  const auto l2 = ops[2].matrix;
  CHECK(l2(at(*b, "S|V"), at(*b, "S|EH(up,dn)")) == cplx(std::sqrt(1e-3)));
  CHECK(l2(at(*b, "E(up)|E(dn)"), at(*b, "E(up)|T(dn)")) == cplx(std::sqrt(1e-3)));

  for (const auto& op : build_collapse_ops(b, 0.0)) CHECK(op.matrix.isZero(0.0));

  // each jump removes exactly one electron and one hole
  for (const auto& op : ops) {
    for (Index i = 0; i < op.matrix.rows(); ++i) {
      for (Index j = 0; j < op.matrix.cols(); ++j) {
        if (op.matrix(i, j) == cplx(0.0)) continue;
        const auto& to = (*b)[static_cast<std::size_t>(i)];
        const auto& from = (*b)[static_cast<std::size_t>(j)];
        CHECK(to.dot1.electrons() + to.dot2.electrons() + 1 ==
              from.dot1.electrons() + from.dot2.electrons());
        CHECK(to.dot1.holes() + to.dot2.holes() + 1 == from.dot1.holes() + from.dot2.holes());
      }
    }
  }

  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(17, 17);
  for (const auto& op : ops) sum += op.matrix.adjoint() * op.matrix;
  CHECK((sum - Eigen::MatrixXcd(sum.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-15);

  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  Eigen::MatrixXcd r(17, 17);
  for (Index i = 0; i < 17; ++i)
    for (Index j = 0; j < 17; ++j) r(i, j) = cplx(g(rng), g(rng));
  const Eigen::MatrixXcd rho = r + r.adjoint();
  cplx tr = 0.0;
  for (const auto& op : ops) {
    const auto& m = op.matrix;
    const Eigen::MatrixXcd ll = m.adjoint() * m;
    tr += (m * rho * m.adjoint() - 0.5 * (ll * rho + rho * ll)).trace();
  }
  CHECK(std::abs(tr) < 1e-12);
}

TEST_CASE("ideal phase gate representations") {
  const Eigen::Matrix4cd x = ideal_phase_gate(GateRepresentation::XBasis);
  CHECK(x.diagonal() == Eigen::Vector4cd(1, 1, -1, 1));
  const Eigen::Matrix2cd u = x_to_z_change_of_basis();
  CHECK((u.adjoint() * u - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-15);
  Eigen::Matrix4cd uu = kron(u, u);
  CHECK((uu.adjoint() * x * uu - ideal_phase_gate(GateRepresentation::ZZBasis)).cwiseAbs().maxCoeff() < 1e-15);
  Eigen::Matrix4cd iu = kron(Eigen::Matrix2cd::Identity(), u);
  CHECK((iu.adjoint() * x * iu - ideal_phase_gate(GateRepresentation::XZBasis)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("operator JSON export") {
  const BasisPtr b = test::dot1_channel();
  const auto j = build_optical_coupling(b, Dot::One).to_json();
  CHECK(j["name"] == "coupling_dot1");
  CHECK(j["basis"].size() == 2);
  REQUIRE(j["entries"].size() == 1);
  CHECK(j["entries"][0] == nlohmann::json::array({1, 0, 1.0, 0.0}));
}
