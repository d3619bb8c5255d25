#pragma once

#include <functional>
#include <optional>

#include "trimcond/preconditioners.hpp"
#include "trimcond/sparse.hpp"

namespace trimcond {

enum class SpectrumMethod { Dense, Lanczos };

struct SpectrumReport {
  std::vector<Real> eigenvalues;  // ascending
  Index zero_count = 0;           // declared nullity
  Real zero_threshold = 0;
  bool nullity_mismatch = false;  // detected count != declared
  SpectrumMethod method = SpectrumMethod::Dense;

  Real lambda_min() const { return eigenvalues[zero_count]; }
  Real lambda_max() const { return eigenvalues.back(); }
  /// λ_n / λ_{first nonzero}
  Real kappa() const { return lambda_max() / lambda_min(); }
  /// λ_n / λ_{r+1}
  Real kappa_eff(Index r) const { return lambda_max() / eigenvalues[r]; }
};

/// Full symmetric (or generalized symmetric, when B is given) spectrum.
/// Solved in double precision; see extreme refinement helpers for the
/// ill-conditioned tails.
SpectrumReport dense_spectrum(const Mat& A, const Mat* B = nullptr,
                              Index declared_nullity = 0, Index dense_cap = 4000);

using LinOp = std::function<void(const Vec&, Vec&)>;

/// Extremal Ritz values of a symmetric operator by Lanczos with full
/// reorthogonalization in extended precision.
struct LanczosResult {
  Real smallest = 0, largest = 0;
  std::vector<Real> ritz;  // ascending
  bool stagnated = false;
};
LanczosResult lanczos_extremes(const LinOp& op, Index n, int iters,
                               unsigned seed = 1234);

struct ExtremeKappa {
  Real lambda_min = 0, lambda_max = 0;
  Real kappa = 0;
  bool trusted = true;  // false when below the precision floor
};

/// κ of a dense SPD matrix: λ_max by Lanczos on A, λ_min by Lanczos on
/// A^{-1} through an extended-precision factorization. Works far beyond the
/// double-precision eigensolver floor for graded matrices.
ExtremeKappa extreme_kappa(const Mat& A, int iters = 60);

/// κ of the generalized pair (G, W): eigenvalues of W^{-1}G.
ExtremeKappa generalized_extreme_kappa(const Mat& G, const Mat& W, int iters = 60);

/// Preconditioned-operator spectrum. The symmetric representative is
///  - Â itself for Jacobi,
///  - Tᵀ Â T for SIPIC,
///  - S^{1/2} Â S^{1/2} for Schwarz (via the dense eigendecomposition of S),
///  - P Â (declared nullity r) for deflation built on Â.
SpectrumReport preconditioned_spectrum(const Mat& Ahat, Index dense_cap = 4000);
SpectrumReport preconditioned_spectrum(const Mat& Ahat, const SipicTransform& T,
                                       Index dense_cap = 4000);
SpectrumReport preconditioned_spectrum(const Mat& Ahat, const SchwarzApplier& S,
                                       Index dense_cap = 4000);
SpectrumReport preconditioned_spectrum(const Mat& Ahat, const DeflationSpace& Z,
                                       Index dense_cap = 4000);

/// κ_eff of the deflated operator PÂ through the equivalent Schur
/// complement on the non-deflated block (exact kernel elimination).
ExtremeKappa deflated_extreme_kappa(const SymmetricSparseMatrix& Ahat,
                                    const DeflationSpace& Z, int iters = 60);

struct SlopeFit {
  Real slope = 0, intercept = 0;
  Real max_rel_dev = 0;
  Index used = 0;
};

/// Least-squares fit of log(y) against log(x). Throws NonpositiveSample for
/// non-positive data; `reject_outliers` drops up to that many worst
/// residuals and refits.
SlopeFit slope_fit(const std::vector<Real>& xs, const std::vector<Real>& ys,
                   int reject_outliers = 0);

}  // namespace trimcond
