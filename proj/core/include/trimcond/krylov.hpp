#pragma once

#include "trimcond/preconditioners.hpp"
#include "trimcond/spectra.hpp"

namespace trimcond {

enum class StoppingMode { PreconditionedRelative, DeflatedCriterion };
enum class Termination { Converged, MaxIterations, Breakdown };

struct SolverConfig {
  Real tol = 1e-9L;
  Index max_iters = 1000;
  int recompute_interval = 50;
  StoppingMode stopping = StoppingMode::DeflatedCriterion;
  int lambda_refresh_iter = 20;  // freeze the Ritz estimate here
};

struct SolveReport {
  Vec x;                       // final (recovered) solution
  std::vector<Real> res_hist;  // ‖r_j‖_{H^{-1}}, incl. j = 0
  std::vector<Real> err_hist;  // rel A-norm error vs reference, if given
  std::vector<Real> perr_hist; // rel PA-norm error (deflated runs)
  std::vector<Real> alpha, beta;
  Termination termination = Termination::MaxIterations;
  Index iterations = 0;
  Real rhs_norm_H = 0;      // ‖Pb‖_{H^{-1}} (or ‖b‖ without deflation)
  Real lambda_estimate = 1; // smallest Ritz value used by the stopping rule
  bool residual_drift_flagged = false;
};

using Applier = std::function<void(const Vec&, Vec&)>;

inline Applier identity_applier() {
  return [](const Vec& v, Vec& out) { out = v; };
}
inline Applier jacobi_applier(const Vec& invdiag) {
  return [invdiag](const Vec& v, Vec& out) {
    out = invdiag.asDiagonal() * v;
  };
}

/// Preconditioned conjugate gradients with the H^{-1}-norm stopping rule.
SolveReport pcg(const SymmetricSparseMatrix& A, const Vec& b, const Applier& Hinv,
                const SolverConfig& cfg, const Vec* x0 = nullptr,
                const Vec* reference = nullptr);

/// Deflated PCG: CG on the projected system with the final recovery step
/// x = Z E^{-1} Zᵀ b + Pᵀ x̃. With an empty deflation space the arithmetic
/// is identical to pcg.
SolveReport dpcg(const SymmetricSparseMatrix& A, const Vec& b, const Applier& Hinv,
                 const DeflationSpace* deflation, const SolverConfig& cfg,
                 const Vec* x0 = nullptr, const Vec* reference = nullptr);

enum class EigEstimateMode { Largest, SmallestNonzero };

struct EigEstimate {
  Real value = 0;
  bool low_confidence = false;
};

/// Coarse extreme-eigenvalue estimate of a symmetric operator by Lanczos;
/// SmallestNonzero skips `known_nullity` near-zero Ritz values.
EigEstimate estimate_extreme_eigs(const LinOp& op, Index n, EigEstimateMode mode,
                                  Index known_nullity = 0, int iters = 40);

struct BoundCheckRecord {
  bool passed = true;
  Index first_violation = -1;
  Real worst_margin = 0;  // max over iterates of lhs/rhs
  Real kappa_used = 0;
};

/// Checks the √κ (or √κ_eff) error bound at every recorded iterate of a
/// solve that tracked a reference solution. Throws BoundViolation when the
/// inequality fails beyond the 1e-8 slack.
BoundCheckRecord verify_error_bounds(const SolveReport& report, Real kappa,
                                     bool deflated);

}  // namespace trimcond
