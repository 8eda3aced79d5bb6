#pragma once

#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "qdgate/statespace.hpp"

namespace qdgate {

enum class OperatorRole { HamiltonianTerm, CouplingStructure, Collapse, Projector, Gate };

const char* role_name(OperatorRole role);

/// Dense complex operator tagged with the basis it acts on.
struct OperatorMatrix {
  BasisPtr basis;
  Eigen::MatrixXcd matrix;
  OperatorRole role = OperatorRole::HamiltonianTerm;
  std::string name;

  static OperatorMatrix zero(const BasisPtr& basis, OperatorRole role, std::string name = {});

  std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
  double hermiticity_error() const;
  OperatorMatrix adjoint() const;

  /// Basis labels plus row-major nonzero triplets [row, col, re, im].
  nlohmann::json to_json(double drop_below = 0.0) const;
};

/// Rank-4 orthogonal projector onto the qubit states. Throws StructuralError
/// when the basis lacks one of them.
OperatorMatrix qubit_subspace_projector(const BasisPtr& basis);

}  // namespace qdgate
