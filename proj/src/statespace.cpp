#include "qdgate/statespace.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <tuple>

#include "qdgate/errors.hpp"
#include "qdgate/operator_matrix.hpp"

namespace qdgate {

const char* spin_tag(Spin s) { return s == Spin::Up ? "up" : "dn"; }

int DotConfig::electrons() const {
  switch (kind) {
    case DotKind::SingleElectron: return 1;
    case DotKind::Trion: return 2;
    case DotKind::SingletPair: return 2;
    case DotKind::ElectronPlusHole: return 1;
    case DotKind::Vacuum: return 0;
  }
  return 0;
}

int DotConfig::holes() const {
  return (kind == DotKind::Trion || kind == DotKind::ElectronPlusHole) ? 1 : 0;
}

bool DotConfig::allowed_in(Dot dot) const {
  switch (kind) {
    case DotKind::SingleElectron:
    case DotKind::Trion: return true;
    case DotKind::SingletPair: return dot == Dot::One;
    case DotKind::ElectronPlusHole:
    case DotKind::Vacuum: return dot == Dot::Two;
  }
  return false;
}

std::string DotConfig::label() const {
  switch (kind) {
    case DotKind::SingleElectron: return std::string("E(") + spin_tag(electron) + ")";
    case DotKind::Trion: return std::string("T(") + spin_tag(hole) + ")";
    case DotKind::SingletPair: return "S";
    case DotKind::ElectronPlusHole:
      return std::string("EH(") + spin_tag(electron) + "," + spin_tag(hole) + ")";
    case DotKind::Vacuum: return "V";
  }
  return "?";
}

Occupancy occupancy(const DotConfig& c) {
  Occupancy o;
  switch (c.kind) {
    case DotKind::SingleElectron: o.set_electron(c.electron, true); break;
    case DotKind::Trion:
      o.e_up = o.e_dn = true;
      o.set_hole(c.hole, true);
      break;
    case DotKind::SingletPair: o.e_up = o.e_dn = true; break;
    case DotKind::ElectronPlusHole:
      o.set_electron(c.electron, true);
      o.set_hole(c.hole, true);
      break;
    case DotKind::Vacuum: break;
  }
  return o;
}

std::optional<DotConfig> config_from(const Occupancy& o, Dot dot) {
  const int ne = o.electrons();
  const int nh = o.holes();
  std::optional<DotConfig> c;
  if (ne == 1 && nh == 0) {
    c = DotConfig::single(o.e_up ? Spin::Up : Spin::Down);
  } else if (ne == 2 && nh == 1) {
    c = DotConfig::trion(o.h_up ? Spin::Up : Spin::Down);
  } else if (ne == 2 && nh == 0) {
    c = DotConfig::singlet_pair();
  } else if (ne == 1 && nh == 1) {
    c = DotConfig::electron_hole(o.e_up ? Spin::Up : Spin::Down, o.h_up ? Spin::Up : Spin::Down);
  } else if (ne == 0 && nh == 0) {
    c = DotConfig::vacuum();
  }
  if (c && !c->allowed_in(dot)) return std::nullopt;
  return c;
}

std::optional<DotConfig> create_pair(const DotConfig& c, Dot dot, Spin e, Spin h) {
  Occupancy o = occupancy(c);
  if (o.has_electron(e) || o.has_hole(h)) return std::nullopt;  // Pauli blocked
  o.set_electron(e, true);
  o.set_hole(h, true);
  return config_from(o, dot);
}

std::optional<DotConfig> remove_pair(const DotConfig& c, Dot dot, Spin e, Spin h) {
  Occupancy o = occupancy(c);
  if (!o.has_electron(e) || !o.has_hole(h)) return std::nullopt;
  o.set_electron(e, false);
  o.set_hole(h, false);
  return config_from(o, dot);
}

std::optional<DotConfig> flip_electron(const DotConfig& c) {
  // Singlet electrons carry no net spin.
  if (c.kind == DotKind::SingleElectron || c.kind == DotKind::ElectronPlusHole) {
    DotConfig out = c;
    out.electron = flipped(c.electron);
    return out;
  }
  return std::nullopt;
}

std::optional<DotConfig> flip_hole(const DotConfig& c) {
  if (c.kind == DotKind::Trion || c.kind == DotKind::ElectronPlusHole) {
    DotConfig out = c;
    out.hole = flipped(c.hole);
    return out;
  }
  return std::nullopt;
}

std::optional<std::pair<DotConfig, DotConfig>> move_hole(const DotConfig& from, Dot from_dot,
                                                         const DotConfig& to, Dot to_dot) {
  Occupancy src = occupancy(from);
  Occupancy dst = occupancy(to);
  if (src.holes() != 1) return std::nullopt;
  const Spin h = src.h_up ? Spin::Up : Spin::Down;
  if (dst.has_hole(h) || dst.holes() > 0) return std::nullopt;
  src.set_hole(h, false);
  dst.set_hole(h, true);
  auto a = config_from(src, from_dot);
  auto b = config_from(dst, to_dot);
  if (!a || !b) return std::nullopt;
  return std::make_pair(*a, *b);
}

int excitation_level(const DotConfig& dot1, const DotConfig& dot2) {
  int n = 0;
  if (dot1.kind == DotKind::Trion || dot1.kind == DotKind::SingletPair) ++n;
  if (dot2.kind == DotKind::Trion) ++n;
  return n;
}

bool is_valid_pair(const DotConfig& dot1, const DotConfig& dot2) {
  if (!dot1.allowed_in(Dot::One) || !dot2.allowed_in(Dot::Two)) return false;
  const int electrons = dot1.electrons() + dot2.electrons();
  const int holes = dot1.holes() + dot2.holes();
  // Every optical excitation adds one electron and one hole to the two resident electrons.
  return electrons == 2 + holes && holes <= 2;
}

std::string BasisState::label() const { return dot1.label() + "|" + dot2.label(); }

namespace {

int kind_rank(DotKind k) {
  switch (k) {
    case DotKind::SingleElectron: return 0;
    case DotKind::Trion: return 1;
    case DotKind::SingletPair: return 2;
    case DotKind::ElectronPlusHole: return 3;
    case DotKind::Vacuum: return 4;
  }
  return 5;
}

auto config_key(const DotConfig& c) {
  return std::make_tuple(kind_rank(c.kind), static_cast<int>(c.electron), static_cast<int>(c.hole));
}

bool canonical_less(const std::pair<DotConfig, DotConfig>& a,
                    const std::pair<DotConfig, DotConfig>& b) {
  const int ea = excitation_level(a.first, a.second);
  const int eb = excitation_level(b.first, b.second);
  if (ea != eb) return ea < eb;
  if (config_key(a.first) != config_key(b.first)) return config_key(a.first) < config_key(b.first);
  return config_key(a.second) < config_key(b.second);
}

using Pair = std::pair<DotConfig, DotConfig>;

// Neighbours of a configuration under every process the operator set contains.
std::vector<Pair> neighbours(const Pair& s, bool field_on) {
  std::vector<Pair> out;
  const auto& [d1, d2] = s;

  // σ⁻ optical coupling (e↑h⇓ created or annihilated) and bright recombination.
  for (auto [e, h] : {std::pair{Spin::Up, Spin::Down}, std::pair{Spin::Down, Spin::Up}}) {
    const bool driven = (e == Spin::Up);
    if (driven) {
      if (auto c = create_pair(d1, Dot::One, e, h)) out.emplace_back(*c, d2);
      if (auto c = create_pair(d2, Dot::Two, e, h)) out.emplace_back(d1, *c);
    }
    if (auto c = remove_pair(d1, Dot::One, e, h)) out.emplace_back(*c, d2);
    if (auto c = remove_pair(d2, Dot::Two, e, h)) out.emplace_back(d1, *c);
  }

  if (auto m = move_hole(d1, Dot::One, d2, Dot::Two)) out.emplace_back(m->first, m->second);
  if (auto m = move_hole(d2, Dot::Two, d1, Dot::One)) out.emplace_back(m->second, m->first);

  if (field_on) {
    if (auto c = flip_electron(d1)) out.emplace_back(*c, d2);
    if (auto c = flip_electron(d2)) out.emplace_back(d1, *c);
    if (auto c = flip_hole(d1)) out.emplace_back(*c, d2);
    if (auto c = flip_hole(d2)) out.emplace_back(d1, *c);
  }
  return out;
}

BasisPtr make_sorted(std::vector<Pair> states) {
  std::sort(states.begin(), states.end(), canonical_less);
  return Basis::from_states(states);
}

}  // namespace

std::shared_ptr<const Basis> Basis::from_states(const std::vector<Pair>& states) {
  auto basis = std::make_shared<Basis>();
  for (const auto& [d1, d2] : states) {
    if (!is_valid_pair(d1, d2)) {
      throw StructuralError("invalid configuration " + d1.label() + "|" + d2.label());
    }
    if (basis->lookup_.count({d1, d2})) {
      throw StructuralError("duplicate configuration " + d1.label() + "|" + d2.label());
    }
    const std::size_t idx = basis->states_.size();
    basis->states_.push_back(BasisState{d1, d2, idx});
    basis->lookup_.emplace(std::make_pair(d1, d2), idx);
  }
  return basis;
}

std::optional<std::size_t> Basis::find(const DotConfig& dot1, const DotConfig& dot2) const {
  auto it = lookup_.find({dot1, dot2});
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Basis::find(const std::string& label) const {
  for (const auto& s : states_) {
    if (s.label() == label) return s.index;
  }
  return std::nullopt;
}

std::size_t Basis::qubit_index(Spin s1, Spin s2) const {
  auto idx = find(DotConfig::single(s1), DotConfig::single(s2));
  if (!idx) {
    throw StructuralError(std::string("basis lacks qubit state E(") + spin_tag(s1) + ")|E(" +
                          spin_tag(s2) + ")");
  }
  return *idx;
}

bool Basis::contains_qubit_states() const {
  for (const auto& [d1, d2] : qubit_configs()) {
    if (!find(d1, d2)) return false;
  }
  return true;
}

std::vector<std::string> Basis::labels() const {
  std::vector<std::string> out;
  out.reserve(states_.size());
  for (const auto& s : states_) out.push_back(s.label());
  return out;
}

nlohmann::json Basis::to_json() const { return nlohmann::json(labels()); }

std::vector<Pair> qubit_configs() {
  std::vector<Pair> out;
  for (Spin a : {Spin::Down, Spin::Up}) {
    for (Spin b : {Spin::Down, Spin::Up}) {
      out.emplace_back(DotConfig::single(a), DotConfig::single(b));
    }
  }
  return out;
}

BasisPtr qubit_basis() { return Basis::from_states(qubit_configs()); }

BasisPtr enumerate_basis(int excitation_cap, bool field_on) {
  if (excitation_cap < 0) throw ParameterError("excitation_cap must be >= 0");
  std::set<Pair> seen;
  std::deque<Pair> frontier;
  for (const auto& q : qubit_configs()) {
    seen.insert(q);
    frontier.push_back(q);
  }
  while (!frontier.empty()) {
    const Pair s = frontier.front();
    frontier.pop_front();
    for (const auto& n : neighbours(s, field_on)) {
      if (!is_valid_pair(n.first, n.second)) continue;
      if (excitation_level(n.first, n.second) > excitation_cap) continue;
      if (seen.insert(n).second) frontier.push_back(n);
    }
  }
  return make_sorted({seen.begin(), seen.end()});
}

std::vector<DotConfig> all_dot_configs() {
  std::set<DotConfig> out;
  for (DotKind k : {DotKind::SingleElectron, DotKind::Trion, DotKind::SingletPair,
                    DotKind::ElectronPlusHole, DotKind::Vacuum}) {
    for (Spin e : {Spin::Down, Spin::Up}) {
      for (Spin h : {Spin::Down, Spin::Up}) {
        switch (k) {
          case DotKind::SingleElectron: out.insert(DotConfig::single(e)); break;
          case DotKind::Trion: out.insert(DotConfig::trion(h)); break;
          case DotKind::SingletPair: out.insert(DotConfig::singlet_pair()); break;
          case DotKind::ElectronPlusHole: out.insert(DotConfig::electron_hole(e, h)); break;
          case DotKind::Vacuum: out.insert(DotConfig::vacuum()); break;
        }
      }
    }
  }
  return {out.begin(), out.end()};
}

BasisPtr exhaustive_basis(int max_excitation) {
  std::vector<Pair> states;
  for (const auto& a : all_dot_configs()) {
    for (const auto& b : all_dot_configs()) {
      if (is_valid_pair(a, b) && excitation_level(a, b) <= max_excitation) states.emplace_back(a, b);
    }
  }
  return make_sorted(std::move(states));
}

bool StateVector::is_normalized(double tol) const {
  return std::abs(amplitudes.squaredNorm() - 1.0) <= tol;
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  return DensityMatrix{psi.basis, psi.amplitudes * psi.amplitudes.adjoint()};
}

double DensityMatrix::hermiticity_error() const {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const Eigen::MatrixXcd h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double DensityMatrix::purity() const { return (rho * rho).trace().real(); }

bool DensityMatrix::is_valid() const {
  return hermiticity_error() <= 1e-10 && std::abs(trace() - cplx(1.0)) <= 1e-8 &&
         min_eigenvalue() >= -1e-8;
}

StateVector embed(const StateVector& state, const BasisPtr& target) {
  StateVector out{target, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(target->size()))};
  for (const auto& s : state.basis->states()) {
    auto idx = target->find(s.dot1, s.dot2);
    if (!idx) throw StructuralError("embed: label " + s.label() + " missing from target basis");
    out.amplitudes(static_cast<Eigen::Index>(*idx)) = state.amplitudes(static_cast<Eigen::Index>(s.index));
  }
  return out;
}

StateVector project(const StateVector& state, const BasisPtr& target) {
  StateVector out{target, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(target->size()))};
  for (const auto& s : target->states()) {
    auto idx = state.basis->find(s.dot1, s.dot2);
    if (!idx) throw StructuralError("project: label " + s.label() + " missing from source basis");
    out.amplitudes(static_cast<Eigen::Index>(s.index)) = state.amplitudes(static_cast<Eigen::Index>(*idx));
  }
  return out;
}

// -- OperatorMatrix ---------------------------------------------------------

const char* role_name(OperatorRole role) {
  switch (role) {
    case OperatorRole::HamiltonianTerm: return "hamiltonian-term";
    case OperatorRole::CouplingStructure: return "coupling-structure";
    case OperatorRole::Collapse: return "collapse";
    case OperatorRole::Projector: return "projector";
    case OperatorRole::Gate: return "gate";
  }
  return "?";
}

OperatorMatrix OperatorMatrix::zero(const BasisPtr& basis, OperatorRole role, std::string name) {
  const auto n = static_cast<Eigen::Index>(basis->size());
  return OperatorMatrix{basis, Eigen::MatrixXcd::Zero(n, n), role, std::move(name)};
}

double OperatorMatrix::hermiticity_error() const {
  if (matrix.size() == 0) return 0.0;
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

OperatorMatrix OperatorMatrix::adjoint() const {
  return OperatorMatrix{basis, matrix.adjoint(), role, name + "^dag"};
}

nlohmann::json OperatorMatrix::to_json(double drop_below) const {
  nlohmann::json entries = nlohmann::json::array();
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      const cplx v = matrix(r, c);
      if (std::abs(v) > drop_below && v != cplx(0.0)) {
        entries.push_back({r, c, v.real(), v.imag()});
      }
    }
  }
  return {{"name", name}, {"role", role_name(role)}, {"basis", basis->labels()}, {"entries", entries}};
}

OperatorMatrix qubit_subspace_projector(const BasisPtr& basis) {
  OperatorMatrix p = OperatorMatrix::zero(basis, OperatorRole::Projector, "qubit_projector");
  for (const auto& [d1, d2] : qubit_configs()) {
    auto idx = basis->find(d1, d2);
    if (!idx) throw StructuralError("basis lacks qubit state " + d1.label() + "|" + d2.label());
    p.matrix(static_cast<Eigen::Index>(*idx), static_cast<Eigen::Index>(*idx)) = 1.0;
  }
  return p;
}

}  // namespace qdgate
