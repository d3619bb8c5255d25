#pragma once

#include <Eigen/Cholesky>
#include <Eigen/SparseCore>
#include <memory>

#include "trimcond/assembly.hpp"

namespace trimcond {

// --- Jacobi ------------------------------------------------------------

struct JacobiScaling {
  Vec D;  // sqrt(diag(A))
};

JacobiScaling build_jacobi(const SymmetricSparseMatrix& A);

/// Â = D^{-1} A D^{-1} with an exactly unit diagonal.
SymmetricSparseMatrix scaled_matrix(const SymmetricSparseMatrix& A,
                                    const JacobiScaling& J);

// --- SIPIC ---------------------------------------------------------------

// Basis change built from sweeps of threshold flagging, per-component
// energy-norm Gram-Schmidt in ascending index order, and rescaling.
struct SipicTransform {
  std::vector<std::vector<Index>> components;  // last sweep's components
  Eigen::SparseMatrix<Real> T;                 // total transform
  Mat transformed;                             // Tᵀ Â T, unit diagonal
  int sweeps = 0;
  bool converged = true;  // false: flagged pairs remained after max_sweeps
  std::vector<Index> skipped;  // numerically dependent columns left in place

  /// z = T Tᵀ r, the approximate-inverse application.
  void apply_inverse(const Vec& r, Vec& z) const;
};

SipicTransform sipic_build(const SymmetricSparseMatrix& Ahat, Real zeta = 0.9L,
                           int max_sweeps = 10);

/// Same procedure on a dense unit-diagonal Gram matrix (used by tests and
/// counter-examples).
SipicTransform sipic_build_dense(Mat Ahat, Real zeta = 0.9L, int max_sweeps = 10);

// --- Additive Schwarz ------------------------------------------------------

enum class BlockStrategy { CutElements, SupportContainment, SupportIntersection };

struct SchwarzBlocks {
  BlockStrategy strategy = BlockStrategy::CutElements;
  std::vector<std::vector<Index>> blocks;  // active-dof indices, each sorted
};

SchwarzBlocks select_blocks(BlockStrategy strategy, const TensorBasis& basis,
                            const CartesianMesh& mesh,
                            const CutClassification& cls, const DofMap& dofs);

// S = Σ P_i (P_iᵀ Â P_i)^{-1} P_iᵀ. Blocks are factorized densely; blocks
// whose Cholesky fails fall back to a truncated eigendecomposition with
// eigenvalues below drop_tol * (block max eigenvalue) discarded.
class SchwarzApplier {
 public:
  static SchwarzApplier build(const SymmetricSparseMatrix& Ahat,
                              const SchwarzBlocks& blocks, Real drop_tol = 1e-14L);

  void apply(const Vec& v, Vec& out) const;
  Index size() const { return n_; }
  Index num_blocks() const { return static_cast<Index>(blocks_.size()); }

  /// Dense S for spectral diagnostics (O(n^2) applies).
  Mat dense() const;

 private:
  struct Block {
    std::vector<Index> idx;
    Mat inverse;  // explicit small inverse (possibly truncated pseudo-inverse)
  };
  Index n_ = 0;
  std::vector<Block> blocks_;
};

// --- Deflation --------------------------------------------------------------

/// Indices of active functions whose active support lies entirely in the cut
/// region (no Inside element in the support box).
std::vector<Index> weak_support_set(const TensorBasis& basis,
                                    const CartesianMesh& mesh,
                                    const CutClassification& cls,
                                    const DofMap& dofs);

/// Keep φ_i iff some partner φ_j intersects it and their joint active
/// support is small relative to the joint cut region (threshold τ).
std::vector<Index> rank_reduce(const std::vector<Index>& I_C, Real tau,
                               const TensorBasis& basis, const CartesianMesh& mesh,
                               const CutClassification& cls, const DofMap& dofs);

// Deflation space with Z = identity columns at `indices`; the coarse matrix
// E = ZᵀÂZ is the corresponding principal submatrix, factorized once.
class DeflationSpace {
 public:
  static DeflationSpace build(const SymmetricSparseMatrix& Ahat,
                              std::vector<Index> indices);

  Index rank() const { return static_cast<Index>(idx_.size()); }
  Index dim() const { return n_; }
  const std::vector<Index>& indices() const { return idx_; }
  const Mat& coarse() const { return E_; }

  /// P v = v − ÂZ E^{-1} Zᵀ v
  void project(const Vec& v, Vec& out) const;
  /// Pᵀ v = v − Z E^{-1} (ÂZ)ᵀ v
  void project_t(const Vec& v, Vec& out) const;
  /// Z E^{-1} Zᵀ b
  Vec coarse_correction(const Vec& b) const;
  /// x = Z E^{-1} Zᵀ b + Pᵀ x̃
  Vec recover(const Vec& xt, const Vec& b) const;

 private:
  Index n_ = 0;
  std::vector<Index> idx_;
  Mat E_;
  Eigen::LLT<Mat> llt_;
  Mat AZ_;  // n x r columns of Â at the deflation indices
};

}  // namespace trimcond
