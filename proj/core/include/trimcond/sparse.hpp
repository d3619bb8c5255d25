#pragma once

#include <functional>
#include <string>
#include <vector>

#include "trimcond/types.hpp"

namespace trimcond {

// Symmetric sparse matrix stored as the upper triangle (including the
// diagonal) in CSR with sorted columns. Mirrored on access, so symmetry is
// exact by construction.
class SymmetricSparseMatrix {
 public:
  struct Triplet {
    Index i, j;
    Real v;
  };

  SymmetricSparseMatrix() = default;

  /// Deterministic build: triplets are reduced in (i, j, insertion-order),
  /// so the accumulation order is independent of how duplicates arrive.
  static SymmetricSparseMatrix from_triplets(Index n, std::vector<Triplet> ts);

  Index rows() const { return n_; }
  Index nnz_stored() const { return static_cast<Index>(vals_.size()); }

  Real diag(Index i) const;
  Real coeff(Index i, Index j) const;

  void matvec(const Vec& x, Vec& y) const;
  Vec operator*(const Vec& x) const {
    Vec y(n_);
    matvec(x, y);
    return y;
  }

  Mat dense() const;
  Vec diagonal() const;

  /// D^{-1} A D^{-1}; entries with i == j are set to exactly 1 when
  /// dinv[i] == 1/sqrt(diag).
  SymmetricSparseMatrix scaled(const Vec& dinv, bool force_unit_diag) const;

  /// Column i of the full (mirrored) matrix as a dense vector.
  Vec column(Index i) const;

  void for_each_upper(const std::function<void(Index, Index, Real)>& f) const;

  /// Coordinate text export: "n n nnz" header, then one "i j value" line per
  /// stored upper-triangle entry (1-based indices).
  std::string export_coordinate_text() const;

 private:
  Index n_ = 0;
  std::vector<Index> row_ptr_, cols_;
  std::vector<Real> vals_;
};

/// a1*M + a2*K with identical dimensions.
SymmetricSparseMatrix combine(Real a1, const SymmetricSparseMatrix& M, Real a2,
                              const SymmetricSparseMatrix& K);

}  // namespace trimcond
