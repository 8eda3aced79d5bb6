#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace qdgate {

using cplx = std::complex<double>;

enum class Spin : std::uint8_t { Down = 0, Up = 1 };

constexpr Spin flipped(Spin s) { return s == Spin::Down ? Spin::Up : Spin::Down; }
const char* spin_tag(Spin s);

/// Which of the two stacked dots a configuration or operator refers to.
enum class Dot : std::uint8_t { One = 1, Two = 2 };

enum class DotKind : std::uint8_t {
  SingleElectron,    // one electron, spin along x
  Trion,             // electron singlet plus one heavy hole
  SingletPair,       // dot 1 only: two electrons, hole has tunneled away
  ElectronPlusHole,  // dot 2 only: resident electron plus the tunneled hole
  Vacuum,            // dot 2 only: empty after the exciton recombined
};

/// Occupation label of a single dot.
///
/// Only the fields meaningful for `kind` are significant; the factory
/// functions zero the rest so that equality and ordering are by label.
struct DotConfig {
  DotKind kind = DotKind::SingleElectron;
  Spin electron = Spin::Down;
  Spin hole = Spin::Down;

  static constexpr DotConfig single(Spin e) { return {DotKind::SingleElectron, e, Spin::Down}; }
  static constexpr DotConfig trion(Spin h) { return {DotKind::Trion, Spin::Down, h}; }
  static constexpr DotConfig singlet_pair() { return {DotKind::SingletPair, Spin::Down, Spin::Down}; }
  static constexpr DotConfig electron_hole(Spin e, Spin h) {
    return {DotKind::ElectronPlusHole, e, h};
  }
  static constexpr DotConfig vacuum() { return {DotKind::Vacuum, Spin::Down, Spin::Down}; }

  int electrons() const;
  int holes() const;
  bool allowed_in(Dot dot) const;

  /// Human-readable label, e.g. "E(up)", "T(dn)", "S", "EH(up,dn)", "V".
  std::string label() const;

  auto operator<=>(const DotConfig&) const = default;
};

/// Particle content of one dot. Electrons of a singlet count as one up and one down.
struct Occupancy {
  bool e_up = false;
  bool e_dn = false;
  bool h_up = false;
  bool h_dn = false;

  int electrons() const { return int(e_up) + int(e_dn); }
  int holes() const { return int(h_up) + int(h_dn); }
  bool has_electron(Spin s) const { return s == Spin::Up ? e_up : e_dn; }
  bool has_hole(Spin s) const { return s == Spin::Up ? h_up : h_dn; }
  void set_electron(Spin s, bool v) { (s == Spin::Up ? e_up : e_dn) = v; }
  void set_hole(Spin s, bool v) { (s == Spin::Up ? h_up : h_dn) = v; }
};

Occupancy occupancy(const DotConfig& c);

/// Maps particle content back to a label; nullopt when the content is not a
/// configuration this model represents in the given dot (e.g. two holes in dot 2).
std::optional<DotConfig> config_from(const Occupancy& occ, Dot dot);

// Elementary particle processes on a single dot. Each returns nullopt when the
// process is Pauli blocked or leaves the modeled configuration set.
std::optional<DotConfig> create_pair(const DotConfig& c, Dot dot, Spin e, Spin h);
std::optional<DotConfig> remove_pair(const DotConfig& c, Dot dot, Spin e, Spin h);
std::optional<DotConfig> flip_electron(const DotConfig& c);
std::optional<DotConfig> flip_hole(const DotConfig& c);

/// Moves one hole from `from` to `to`, preserving its spin. Returns (from', to').
std::optional<std::pair<DotConfig, DotConfig>> move_hole(const DotConfig& from, Dot from_dot,
                                                         const DotConfig& to, Dot to_dot);

/// Number of optical excitations carried by a two-dot configuration: one for
/// each trion, plus one while the dot-1 singlet pair exists (its hole went to
/// dot 2 or recombined there).
int excitation_level(const DotConfig& dot1, const DotConfig& dot2);

/// Particle-count and placement rules for a two-dot configuration.
bool is_valid_pair(const DotConfig& dot1, const DotConfig& dot2);

struct BasisState {
  DotConfig dot1;
  DotConfig dot2;
  std::size_t index = 0;

  std::string label() const;
  int excitation() const { return excitation_level(dot1, dot2); }
};

/// An immutable ordered configuration basis. Shared by pointer as the "basis
/// tag" of every state and operator built over it.
class Basis {
 public:
  /// Keeps the given order. Throws StructuralError on invalid or duplicate states.
  static std::shared_ptr<const Basis> from_states(
      const std::vector<std::pair<DotConfig, DotConfig>>& states);

  std::size_t size() const { return states_.size(); }
  const BasisState& operator[](std::size_t i) const { return states_[i]; }
  const std::vector<BasisState>& states() const { return states_; }

  std::optional<std::size_t> find(const DotConfig& dot1, const DotConfig& dot2) const;
  std::optional<std::size_t> find(const std::string& label) const;

  /// Index of the qubit state |s1>_1 |s2>_2; throws StructuralError if absent.
  std::size_t qubit_index(Spin s1, Spin s2) const;
  bool contains_qubit_states() const;

  std::vector<std::string> labels() const;
  nlohmann::json to_json() const;

 private:
  std::vector<BasisState> states_;
  std::map<std::pair<DotConfig, DotConfig>, std::size_t> lookup_;
};

using BasisPtr = std::shared_ptr<const Basis>;

/// Canonical (↓↓, ↓↑, ↑↓, ↑↑) ordering of the two-qubit states.
std::vector<std::pair<DotConfig, DotConfig>> qubit_configs();

/// Reachability closure of the qubit states under optical (σ⁻) coupling,
/// hole tunneling, recombination, and (when `field_on`) Zeeman spin flips,
/// restricted to configurations with at most `excitation_cap` excitations.
/// Sorted by (excitation, dot 1 label, dot 2 label).
BasisPtr enumerate_basis(int excitation_cap = 1, bool field_on = true);

/// The four qubit states alone.
BasisPtr qubit_basis();

/// Every valid two-dot configuration up to `max_excitation`, canonical order.
BasisPtr exhaustive_basis(int max_excitation);

/// All DotConfig labels, regardless of placement validity.
std::vector<DotConfig> all_dot_configs();

struct StateVector {
  BasisPtr basis;
  Eigen::VectorXcd amplitudes;

  double norm() const { return amplitudes.norm(); }
  bool is_normalized(double tol = 1e-9) const;
};

struct DensityMatrix {
  BasisPtr basis;
  Eigen::MatrixXcd rho;

  static DensityMatrix from_pure(const StateVector& psi);

  cplx trace() const { return rho.trace(); }
  double hermiticity_error() const;
  double min_eigenvalue() const;
  double purity() const;
  /// Hermitian to 1e-10, unit trace to 1e-8, min eigenvalue >= -1e-8.
  bool is_valid() const;
};

/// Copies amplitudes by label into `target`; throws StructuralError on any unmatched label.
StateVector embed(const StateVector& state, const BasisPtr& target);

/// Restriction of `state` to the labels of `target` (all of which must exist in the source).
StateVector project(const StateVector& state, const BasisPtr& target);

}  // namespace qdgate
