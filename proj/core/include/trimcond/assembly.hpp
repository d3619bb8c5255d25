#pragma once

#include <functional>

#include "trimcond/basis.hpp"
#include "trimcond/geometry.hpp"
#include "trimcond/sparse.hpp"

namespace trimcond {

// Active degree-of-freedom map: functions with positive active support
// (above the sliver floor). Matrices and vectors are indexed by active dofs.
struct DofMap {
  std::vector<Index> active;            // sorted global basis indices
  std::vector<Index> global_to_active;  // -1 if inactive

  Index n_active() const { return static_cast<Index>(active.size()); }

  static DofMap build(const TensorBasis& basis, const CartesianMesh& mesh,
                      const CutClassification& cls);
};

enum class MatrixKind { Mass, Stiffness };

SymmetricSparseMatrix assemble(MatrixKind kind, const TensorBasis& basis,
                               const CartesianMesh& mesh,
                               const CutClassification& cls,
                               const CutQuadrature& quad, const DofMap& dofs);

using ScalarField = std::function<Real(Pt)>;

/// Load vector b_i = ∫_Ω f φ_i over active dofs.
Vec assemble_load(const ScalarField& f, const TensorBasis& basis,
                  const CartesianMesh& mesh, const CutQuadrature& quad,
                  const DofMap& dofs);

/// Alias used for L² projection right-hand sides.
inline Vec l2_rhs(const ScalarField& f, const TensorBasis& basis,
                  const CartesianMesh& mesh, const CutQuadrature& quad,
                  const DofMap& dofs) {
  return assemble_load(f, basis, mesh, quad, dofs);
}

enum class BoxSide { XLow, XHigh, YLow, YHigh };

/// Active dofs whose function is interpolatory on an untrimmed box edge
/// (first/last univariate function in the normal direction).
std::vector<Index> boundary_dofs(const TensorBasis& basis, const DofMap& dofs,
                                 BoxSide side);

struct ReducedSystem {
  SymmetricSparseMatrix A;
  Vec b;
  std::vector<Index> kept;  // active indices that survived elimination
};

/// Eliminates the constrained rows/columns and lifts the right-hand side.
/// `constrained` holds active-dof indices; throws NonInterpolatoryDof when a
/// dof is not boundary-interpolatory.
ReducedSystem apply_strong_dirichlet(const SymmetricSparseMatrix& A, const Vec& b,
                                     const TensorBasis& basis, const DofMap& dofs,
                                     const std::vector<Index>& constrained,
                                     const Vec& values);

}  // namespace trimcond
