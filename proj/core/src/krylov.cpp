#include "trimcond/krylov.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace trimcond {

namespace {

// Smallest Ritz value of the CG tridiagonal built from the recurrence
// coefficients (Kaasschieter's estimate of the smallest nonzero eigenvalue
// of the preconditioned, possibly deflated, operator).
Real smallest_ritz(const std::vector<Real>& alpha, const std::vector<Real>& beta) {
  const int k = static_cast<int>(alpha.size());
  if (k == 0) return 1;
  MatD T = MatD::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    double d = 1.0 / static_cast<double>(alpha[i]);
    if (i > 0) d += static_cast<double>(beta[i - 1] / alpha[i - 1]);
    T(i, i) = d;
    if (i + 1 < k) {
      double off = static_cast<double>(std::sqrt(beta[i]) / alpha[i]);
      T(i, i + 1) = T(i + 1, i) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<MatD> es(T);
  return static_cast<Real>(es.eigenvalues()(0));
}

struct ErrorTracker {
  const Vec* reference = nullptr;
  const SymmetricSparseMatrix* A = nullptr;
  const DeflationSpace* defl = nullptr;
  Real ref_norm_A = 0, ref_norm_PA = 0;

  void init(const Vec* ref, const SymmetricSparseMatrix& Aref,
            const DeflationSpace* d) {
    reference = ref;
    A = &Aref;
    defl = d;
    if (!reference) return;
    Vec w = Aref * (*reference);
    ref_norm_A = std::sqrt(std::max<Real>(0, reference->dot(w)));
    if (defl && defl->rank() > 0) {
      Vec pw;
      defl->project(w, pw);
      ref_norm_PA = std::sqrt(std::max<Real>(0, reference->dot(pw)));
    } else {
      ref_norm_PA = ref_norm_A;
    }
  }

  void record(const Vec& x_rec, SolveReport& rep) const {
    if (!reference) return;
    Vec d = x_rec - *reference;
    Vec w = (*A) * d;
    Real na = std::sqrt(std::max<Real>(0, d.dot(w)));
    rep.err_hist.push_back(ref_norm_A > 0 ? na / ref_norm_A : na);
    if (defl && defl->rank() > 0) {
      Vec pw;
      defl->project(w, pw);
      Real npa = std::sqrt(std::max<Real>(0, d.dot(pw)));
      rep.perr_hist.push_back(ref_norm_PA > 0 ? npa / ref_norm_PA : npa);
    } else {
      rep.perr_hist.push_back(rep.err_hist.back());
    }
  }
};

SolveReport cg_core(const SymmetricSparseMatrix& A, const Vec& b,
                    const Applier& Hinv, const DeflationSpace* defl,
                    const SolverConfig& cfg, const Vec* x0, const Vec* reference) {
  const Index n = A.rows();
  if (b.size() != n) throw DimensionMismatch("rhs size");
  const bool use_defl = defl && defl->rank() > 0;

  SolveReport rep;
  Vec x = x0 ? *x0 : Vec::Zero(n);
  Vec r(n), z(n), p(n), w(n), pw(n);

  Vec pb = b;
  if (use_defl) defl->project(b, pb);
  {
    Vec hz(n);
    Hinv(pb, hz);
    rep.rhs_norm_H = std::sqrt(std::max<Real>(0, pb.dot(hz)));
  }

  r = b - A * x;
  if (use_defl) {
    Vec tmp = r;
    defl->project(tmp, r);
  }
  Hinv(r, z);
  Real rz = r.dot(z);
  p = z;

  ErrorTracker errs;
  errs.init(reference, A, defl);

  rep.res_hist.push_back(std::sqrt(std::max<Real>(0, rz)));
  if (reference) {
    Vec xr = use_defl ? defl->recover(x, b) : x;
    errs.record(xr, rep);
  }

  Real lambda_est = 1;
  bool lambda_frozen = false;

  auto stop_threshold = [&]() {
    if (cfg.stopping == StoppingMode::PreconditionedRelative)
      return cfg.tol * rep.rhs_norm_H;
    return cfg.tol * std::sqrt(std::max<Real>(0, lambda_est)) * rep.rhs_norm_H;
  };

  Index j = 0;
  rep.termination = Termination::MaxIterations;
  if (rep.res_hist[0] <= stop_threshold() || rep.rhs_norm_H == 0) {
    rep.termination = Termination::Converged;
  } else {
    for (j = 0; j < cfg.max_iters; ++j) {
      w = A * p;
      if (use_defl) {
        pw = w;
        defl->project(pw, w);
      }
      Real pAp = p.dot(w);
      if (!(pAp > 0)) {
        rep.termination = Termination::Breakdown;
        break;
      }
      Real alpha = rz / pAp;
      x += alpha * p;
      r -= alpha * w;
      Hinv(r, z);
      Real rz_new = r.dot(z);
      Real beta = rz_new / rz;
      rep.alpha.push_back(alpha);
      rep.beta.push_back(beta);
      rz = rz_new;
      p = z + beta * p;

      rep.res_hist.push_back(std::sqrt(std::max<Real>(0, rz)));
      if (reference) {
        Vec xr = use_defl ? defl->recover(x, b) : x;
        errs.record(xr, rep);
      }

      if (!lambda_frozen) {
        lambda_est = smallest_ritz(rep.alpha, rep.beta);
        if (static_cast<int>(j) + 1 >= cfg.lambda_refresh_iter)
          lambda_frozen = true;
      }

      if (cfg.recompute_interval > 0 &&
          (j + 1) % cfg.recompute_interval == 0) {
        Vec rt = b - A * x;
        if (use_defl) {
          Vec tmp = rt;
          defl->project(tmp, rt);
        }
        if ((r - rt).norm() > 1e-8L * b.norm())
          rep.residual_drift_flagged = true;
      }

      if (rep.res_hist.back() <= stop_threshold()) {
        rep.termination = Termination::Converged;
        ++j;
        break;
      }
    }
  }

  rep.iterations = j;
  rep.lambda_estimate = lambda_est;
  rep.x = use_defl ? defl->recover(x, b) : x;
  return rep;
}

}  // namespace

SolveReport pcg(const SymmetricSparseMatrix& A, const Vec& b, const Applier& Hinv,
                const SolverConfig& cfg, const Vec* x0, const Vec* reference) {
  return cg_core(A, b, Hinv, nullptr, cfg, x0, reference);
}

SolveReport dpcg(const SymmetricSparseMatrix& A, const Vec& b, const Applier& Hinv,
                 const DeflationSpace* deflation, const SolverConfig& cfg,
                 const Vec* x0, const Vec* reference) {
  return cg_core(A, b, Hinv, deflation, cfg, x0, reference);
}

EigEstimate estimate_extreme_eigs(const LinOp& op, Index n, EigEstimateMode mode,
                                  Index known_nullity, int iters) {
  LanczosResult lz = lanczos_extremes(op, n, iters);
  EigEstimate est;
  est.low_confidence = lz.stagnated;
  if (mode == EigEstimateMode::Largest) {
    est.value = lz.largest;
    return est;
  }
  const Real thresh = 1e-12L * std::abs(lz.largest);
  Index skipped = 0;
  for (Real v : lz.ritz) {
    if (std::abs(v) <= thresh && skipped < known_nullity) {
      ++skipped;
      continue;
    }
    if (std::abs(v) <= thresh) continue;  // extra near-zero Ritz values
    est.value = v;
    return est;
  }
  est.value = lz.largest;
  est.low_confidence = true;
  return est;
}

BoundCheckRecord verify_error_bounds(const SolveReport& report, Real kappa,
                                     bool deflated) {
  BoundCheckRecord rec;
  rec.kappa_used = kappa;
  const auto& errs = deflated ? report.perr_hist : report.err_hist;
  if (errs.empty())
    throw Error("verify_error_bounds needs a solve with a reference solution");
  const Real root = std::sqrt(kappa);
  const Real slack = 1e-8L;
  for (size_t jj = 0; jj < errs.size(); ++jj) {
    const Real res_rel =
        report.rhs_norm_H > 0 ? report.res_hist[jj] / report.rhs_norm_H : 0;
    const Real rhs = root * res_rel * (1 + slack) + slack;
    if (rhs > 0) rec.worst_margin = std::max(rec.worst_margin, errs[jj] / rhs);
    if (errs[jj] > rhs) {
      rec.passed = false;
      rec.first_violation = static_cast<Index>(jj);
      throw BoundViolation("iterate " + std::to_string(jj) + ": error " +
                           std::to_string(static_cast<double>(errs[jj])) +
                           " > bound " +
                           std::to_string(static_cast<double>(rhs)));
    }
  }
  return rec;
}

}  // namespace trimcond
