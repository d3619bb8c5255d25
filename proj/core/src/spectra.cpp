#include "trimcond/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

namespace trimcond {

SpectrumReport dense_spectrum(const Mat& A, const Mat* B, Index declared_nullity,
                              Index dense_cap) {
  if (A.rows() > dense_cap)
    throw DenseCapExceeded(std::to_string(A.rows()) + " > cap " +
                           std::to_string(dense_cap));
  MatD Ad = A.cast<double>();
  VecD ev;
  if (B) {
    MatD Bd = B->cast<double>();
    Eigen::LLT<MatD> llt(Bd);
    if (llt.info() != Eigen::Success)
      throw GeneralizedNotSPD("right-hand matrix not SPD");
    Eigen::GeneralizedSelfAdjointEigenSolver<MatD> es(Ad, Bd);
    ev = es.eigenvalues();
  } else {
    Eigen::SelfAdjointEigenSolver<MatD> es(Ad);
    ev = es.eigenvalues();
  }

  SpectrumReport r;
  r.method = SpectrumMethod::Dense;
  r.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::sort(r.eigenvalues.begin(), r.eigenvalues.end());
  r.zero_count = declared_nullity;
  const double lmax = std::abs(r.eigenvalues.back());
  r.zero_threshold =
      static_cast<Real>(10.0 * ev.size() * 2.220446049250313e-16 * lmax);
  Index detected = 0;
  for (Real v : r.eigenvalues)
    if (std::abs(v) <= r.zero_threshold) ++detected;
  r.nullity_mismatch = (detected != declared_nullity);
  return r;
}

LanczosResult lanczos_extremes(const LinOp& op, Index n, int iters,
                               unsigned seed) {
  LanczosResult out;
  const int m = static_cast<int>(std::min<Index>(iters, n));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  Mat V(n, m + 1);
  Vec v(n), w(n);
  for (Index i = 0; i < n; ++i) v[i] = static_cast<Real>(u(rng));
  v /= v.norm();
  V.col(0) = v;
  std::vector<Real> alpha, beta;
  Real prev_beta = 0;

  for (int j = 0; j < m; ++j) {
    op(V.col(j), w);
    if (j > 0) w -= prev_beta * V.col(j - 1);
    Real a = V.col(j).dot(w);
    w -= a * V.col(j);
    // full reorthogonalization (twice)
    for (int pass = 0; pass < 2; ++pass)
      for (int k = 0; k <= j; ++k) w -= V.col(k).dot(w) * V.col(k);
    alpha.push_back(a);
    Real b = w.norm();
    if (!(b > 1e-30L)) {
      out.stagnated = (j + 1 < std::min<Index>(n, 8));
      break;
    }
    beta.push_back(b);
    prev_beta = b;
    V.col(j + 1) = w / b;
  }

  const int k = static_cast<int>(alpha.size());
  MatD T = MatD::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    T(i, i) = static_cast<double>(alpha[i]);
    if (i + 1 < k)
      T(i, i + 1) = T(i + 1, i) = static_cast<double>(beta[i]);
  }
  Eigen::SelfAdjointEigenSolver<MatD> es(T);
  out.ritz.assign(es.eigenvalues().data(), es.eigenvalues().data() + k);
  out.smallest = out.ritz.front();
  out.largest = out.ritz.back();
  return out;
}

ExtremeKappa extreme_kappa(const Mat& A, int iters) {
  const Index n = A.rows();
  ExtremeKappa out;
  LinOp direct = [&](const Vec& x, Vec& y) { y = A * x; };
  out.lambda_max = lanczos_extremes(direct, n, iters).largest;

  Eigen::LDLT<Mat> ldlt(A);
  if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0)) {
    // numerically singular: fall back to the smallest Ritz value of A
    out.lambda_min = lanczos_extremes(direct, n, 2 * iters).smallest;
    out.trusted = false;
  } else {
    LinOp inv = [&](const Vec& x, Vec& y) { y = ldlt.solve(x); };
    Real mu = lanczos_extremes(inv, n, iters).largest;  // 1/λ_min
    out.lambda_min = 1 / mu;
  }
  out.kappa = out.lambda_max / out.lambda_min;
  // roughly 18 usable digits in the extended-precision entries
  if (!(out.lambda_min > 0) || out.kappa > 1e17L) out.trusted = false;
  return out;
}

namespace {

// Largest eigenvalue of the pair (num, den): Lanczos on L^{-1} num L^{-T}
// with den = LLᵀ, falling back to power iteration through an LDLT solve.
Real pair_lambda_max(const Mat& num, const Mat& den, int iters, bool& ok) {
  const Index n = num.rows();
  Eigen::LLT<Mat> l(den);
  if (l.info() == Eigen::Success) {
    LinOp op = [&](const Vec& x, Vec& y) {
      Vec t = l.matrixU().solve(x);
      y = l.matrixL().solve((num * t).eval());
    };
    return lanczos_extremes(op, n, iters).largest;
  }
  ok = false;
  Eigen::LDLT<Mat> ld(den);
  if (ld.info() != Eigen::Success) throw GeneralizedNotSPD("pair factorization");
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1, 1);
  Vec x(n);
  for (Index i = 0; i < n; ++i) x[i] = static_cast<Real>(u(rng));
  x /= x.norm();
  Real rq = 0;
  for (int it = 0; it < 4 * iters; ++it) {
    Vec y = ld.solve((num * x).eval());
    Real nrm = y.norm();
    if (!(nrm > 0)) break;
    x = y / nrm;
    rq = x.dot(num * x) / x.dot(den * x);
  }
  return rq;
}

}  // namespace

ExtremeKappa generalized_extreme_kappa(const Mat& G, const Mat& W, int iters) {
  ExtremeKappa out;
  bool ok = true;
  out.lambda_max = pair_lambda_max(G, W, iters, ok);
  Real mu = pair_lambda_max(W, G, iters, ok);  // 1/λ_min(G, W)
  out.lambda_min = mu > 0 ? 1 / mu : 0;
  out.trusted = ok;
  if (out.lambda_min > 0) out.kappa = out.lambda_max / out.lambda_min;
  if (!(out.lambda_min > 0) || out.kappa > 1e17L) out.trusted = false;
  return out;
}

SpectrumReport preconditioned_spectrum(const Mat& Ahat, Index dense_cap) {
  return dense_spectrum(Ahat, nullptr, 0, dense_cap);
}

SpectrumReport preconditioned_spectrum(const Mat& Ahat, const SipicTransform& T,
                                       Index dense_cap) {
  (void)Ahat;  // the builder already carries Tᵀ Â T
  return dense_spectrum(T.transformed, nullptr, 0, dense_cap);
}

SpectrumReport preconditioned_spectrum(const Mat& Ahat, const SchwarzApplier& S,
                                       Index dense_cap) {
  if (Ahat.rows() > dense_cap) throw DenseCapExceeded("schwarz spectrum");
  Mat Sd = S.dense();
  Eigen::SelfAdjointEigenSolver<Mat> es(Sd);
  Vec ev = es.eigenvalues();
  Real emax = ev[ev.size() - 1];
  Vec sq(ev.size());
  Index nullity = 0;
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev[i] > 1e-30L * emax) {
      sq[i] = std::sqrt(ev[i]);
    } else {
      sq[i] = 0;
      ++nullity;
    }
  }
  Mat Shalf = es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().transpose();
  Mat rep = Shalf * Ahat * Shalf;
  rep = ((rep + rep.transpose()) / 2).eval();
  return dense_spectrum(rep, nullptr, nullity, dense_cap);
}

SpectrumReport preconditioned_spectrum(const Mat& Ahat, const DeflationSpace& Z,
                                       Index dense_cap) {
  if (Ahat.rows() > dense_cap) throw DenseCapExceeded("deflated spectrum");
  const Index n = Ahat.rows();
  Mat PA(n, n);
  Vec col(n), out(n);
  for (Index j = 0; j < n; ++j) {
    col = Ahat.col(j);
    Z.project(col, out);
    PA.col(j) = out;
  }
  PA = ((PA + PA.transpose()) / 2).eval();
  return dense_spectrum(PA, nullptr, Z.rank(), dense_cap);
}

ExtremeKappa deflated_extreme_kappa(const SymmetricSparseMatrix& Ahat,
                                    const DeflationSpace& Z, int iters) {
  const Index n = Ahat.rows();
  const auto& idx = Z.indices();
  if (idx.empty()) return extreme_kappa(Ahat.dense(), iters);

  // PÂ has exactly zero rows/columns at the deflation indices; on the
  // complement it is the Schur complement of the coarse block.
  std::vector<Index> keep;
  std::vector<char> is_defl(n, 0);
  for (Index i : idx) is_defl[i] = 1;
  for (Index i = 0; i < n; ++i)
    if (!is_defl[i]) keep.push_back(i);
  const Index m = static_cast<Index>(keep.size());
  const Index r = Z.rank();

  Mat Ass(m, m), Asc(m, r);
  Mat dense = Ahat.dense();
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) Ass(i, j) = dense(keep[i], keep[j]);
    for (Index k = 0; k < r; ++k) Asc(i, k) = dense(keep[i], idx[k]);
  }
  Eigen::LLT<Mat> ellt(Z.coarse());
  if (ellt.info() != Eigen::Success)
    throw CoarseFactorizationFailure("schur route");
  Mat schur = Ass - Asc * ellt.solve(Asc.transpose());
  schur = ((schur + schur.transpose()) / 2).eval();
  return extreme_kappa(schur, iters);
}

SlopeFit slope_fit(const std::vector<Real>& xs, const std::vector<Real>& ys,
                   int reject_outliers) {
  if (xs.size() != ys.size()) throw DimensionMismatch("slope_fit");
  std::vector<Real> lx, ly;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0) || !(ys[i] > 0))
      throw NonpositiveSample("slope_fit sample " + std::to_string(i));
    lx.push_back(std::log(xs[i]));
    ly.push_back(std::log(ys[i]));
  }
  if (lx.size() < 4) throw Error("slope_fit needs >= 4 samples");

  std::vector<size_t> used(lx.size());
  std::iota(used.begin(), used.end(), size_t(0));

  SlopeFit fit;
  for (int round = 0;; ++round) {
    Real sx = 0, sy = 0, sxx = 0, sxy = 0;
    const Real n = static_cast<Real>(used.size());
    for (size_t i : used) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    fit.used = static_cast<Index>(used.size());

    fit.max_rel_dev = 0;
    size_t worst = used[0];
    Real worst_dev = -1;
    for (size_t i : used) {
      Real dev = std::abs(ly[i] - (fit.intercept + fit.slope * lx[i]));
      if (dev > worst_dev) {
        worst_dev = dev;
        worst = i;
      }
      fit.max_rel_dev = std::max(fit.max_rel_dev, std::abs(std::expm1(dev)));
    }
    if (round >= reject_outliers || used.size() <= 4) break;
    used.erase(std::find(used.begin(), used.end(), worst));
  }
  return fit;
}

}  // namespace trimcond
