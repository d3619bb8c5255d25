#include "trimcond/preconditioners.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace trimcond {

JacobiScaling build_jacobi(const SymmetricSparseMatrix& A) {
  JacobiScaling J;
  J.D.resize(A.rows());
  for (Index i = 0; i < A.rows(); ++i) {
    Real d = A.diag(i);
    if (!(d > 0)) throw NonpositiveDiagonal("diag(" + std::to_string(i) + ")");
    J.D[i] = std::sqrt(d);
  }
  return J;
}

SymmetricSparseMatrix scaled_matrix(const SymmetricSparseMatrix& A,
                                    const JacobiScaling& J) {
  Vec dinv(J.D.size());
  for (Index i = 0; i < J.D.size(); ++i) dinv[i] = 1 / J.D[i];
  return A.scaled(dinv, /*force_unit_diag=*/true);
}

// --- SIPIC -------------------------------------------------------------------

namespace {

struct UnionFind {
  std::vector<Index> parent;
  explicit UnionFind(Index n) : parent(n) {
    std::iota(parent.begin(), parent.end(), Index(0));
  }
  Index find(Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

std::vector<std::vector<Index>> flagged_components(const Mat& A, Real zeta) {
  const Index n = A.rows();
  UnionFind uf(n);
  bool any = false;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < i; ++j)
      if (std::abs(A(i, j)) > zeta) {
        uf.unite(i, j);
        any = true;
      }
  std::vector<std::vector<Index>> comps;
  if (!any) return comps;
  std::vector<Index> root_slot(n, -1);
  for (Index i = 0; i < n; ++i) {
    Index r = uf.find(i);
    if (root_slot[r] < 0) {
      root_slot[r] = static_cast<Index>(comps.size());
      comps.push_back({});
    }
    comps[root_slot[r]].push_back(i);
  }
  comps.erase(std::remove_if(comps.begin(), comps.end(),
                             [](const auto& c) { return c.size() < 2; }),
              comps.end());
  return comps;
}

SipicTransform sipic_core(Mat A, Real zeta, int max_sweeps) {
  const Index n = A.rows();
  SipicTransform out;
  Mat T = Mat::Identity(n, n);

  auto comps = flagged_components(A, zeta);
  while (!comps.empty() && out.sweeps < max_sweeps) {
    ++out.sweeps;
    out.components = comps;

    for (const auto& comp : comps) {
      const Index c = static_cast<Index>(comp.size());
      Mat G(c, c);
      for (Index a = 0; a < c; ++a)
        for (Index b = 0; b < c; ++b) G(a, b) = A(comp[a], comp[b]);

      // Modified Gram-Schmidt in the energy inner product, ascending order.
      Mat W = Mat::Identity(c, c);
      for (Index j = 0; j < c; ++j) {
        for (Index k = 0; k < j; ++k) {
          Real coef = W.col(j).dot(G * W.col(k));
          W.col(j) -= coef * W.col(k);
        }
        Real nrm2 = W.col(j).dot(G * W.col(j));
        if (nrm2 < 1e-28L) {
          // numerically dependent column: leave it in place (incomplete step)
          W.col(j).setZero();
          W(j, j) = 1;
          out.skipped.push_back(comp[j]);
        } else {
          W.col(j) /= std::sqrt(nrm2);
        }
      }

      // two-sided panel update A <- Tcᵀ A Tc and accumulate into T
      Mat panel(n, c);
      for (Index a = 0; a < c; ++a) panel.col(a) = A.col(comp[a]);
      Mat newcols = panel * W;
      for (Index a = 0; a < c; ++a) A.col(comp[a]) = newcols.col(a);
      Mat rows(c, n);
      for (Index a = 0; a < c; ++a) rows.row(a) = A.row(comp[a]);
      Mat newrows = W.transpose() * rows;
      for (Index a = 0; a < c; ++a) A.row(comp[a]) = newrows.row(a);

      Mat tcols(n, c);
      for (Index a = 0; a < c; ++a) tcols.col(a) = T.col(comp[a]);
      Mat tnew = tcols * W;
      for (Index a = 0; a < c; ++a) T.col(comp[a]) = tnew.col(a);
    }

    // rescale to a unit diagonal so the next threshold test is meaningful
    Vec dinv(n);
    for (Index i = 0; i < n; ++i) {
      Real d = A(i, i);
      dinv[i] = d > 0 ? 1 / std::sqrt(d) : 1;
    }
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) A(i, j) *= dinv[i] * dinv[j];
    for (Index i = 0; i < n; ++i) A(i, i) = 1;
    for (Index i = 0; i < n; ++i) T.col(i) *= dinv[i];

    comps = flagged_components(A, zeta);
  }
  out.converged = comps.empty();

  out.transformed = std::move(A);
  out.T.resize(n, n);
  {
    std::vector<Eigen::Triplet<Real>> trip;
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i)
        if (T(i, j) != 0) trip.emplace_back(i, j, T(i, j));
    out.T.setFromTriplets(trip.begin(), trip.end());
  }
  return out;
}

}  // namespace

SipicTransform sipic_build(const SymmetricSparseMatrix& Ahat, Real zeta,
                           int max_sweeps) {
  if (!(zeta > 0 && zeta < 1)) throw ParameterOutOfRange("zeta");
  return sipic_core(Ahat.dense(), zeta, max_sweeps);
}

SipicTransform sipic_build_dense(Mat Ahat, Real zeta, int max_sweeps) {
  if (!(zeta > 0 && zeta < 1)) throw ParameterOutOfRange("zeta");
  return sipic_core(std::move(Ahat), zeta, max_sweeps);
}

void SipicTransform::apply_inverse(const Vec& r, Vec& z) const {
  z = T * (T.transpose() * r);
}

// --- Schwarz -----------------------------------------------------------------

namespace {

// active functions supported on element e (all of them are active when e is)
std::vector<Index> functions_on_element(const TensorBasis& basis,
                                        const CartesianMesh& mesh, Index e,
                                        const DofMap& dofs) {
  std::vector<Index> out;
  auto em = mesh.multi(e);
  const Index fx0 = basis.uni(0).first_on_element(em[0]);
  const int nx = basis.uni(0).degree() + 1;
  if (basis.dim() == 1) {
    for (int a = 0; a < nx; ++a) {
      Index g = dofs.global_to_active[basis.flat(fx0 + a)];
      if (g >= 0) out.push_back(g);
    }
  } else {
    const Index fy0 = basis.uni(1).first_on_element(em[1]);
    const int ny = basis.uni(1).degree() + 1;
    for (int a = 0; a < nx; ++a)
      for (int b = 0; b < ny; ++b) {
        Index g = dofs.global_to_active[basis.flat(fx0 + a, fy0 + b)];
        if (g >= 0) out.push_back(g);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// active elements (measure > 0) inside the support box of a global function
std::vector<Index> active_elements_of(const TensorBasis& basis,
                                      const CartesianMesh& mesh,
                                      const CutClassification& cls, Index g) {
  std::vector<Index> out;
  SupportBox box = basis.support(g);
  if (basis.dim() == 1) {
    for (int ex = box.lo[0]; ex <= box.hi[0]; ++ex)
      if (cls.is_active(mesh.flat(ex))) out.push_back(mesh.flat(ex));
  } else {
    for (int ex = box.lo[0]; ex <= box.hi[0]; ++ex)
      for (int ey = box.lo[1]; ey <= box.hi[1]; ++ey)
        if (cls.is_active(mesh.flat(ex, ey))) out.push_back(mesh.flat(ex, ey));
  }
  return out;
}

bool supported_on_cut(const TensorBasis& basis, const CartesianMesh& mesh,
                      const CutClassification& cls, Index g) {
  SupportBox box = basis.support(g);
  for (int ex = box.lo[0]; ex <= box.hi[0]; ++ex) {
    if (basis.dim() == 1) {
      if (cls.status[mesh.flat(ex)] == ElementStatus::Cut) return true;
    } else {
      for (int ey = box.lo[1]; ey <= box.hi[1]; ++ey)
        if (cls.status[mesh.flat(ex, ey)] == ElementStatus::Cut) return true;
    }
  }
  return false;
}

}  // namespace

SchwarzBlocks select_blocks(BlockStrategy strategy, const TensorBasis& basis,
                            const CartesianMesh& mesh,
                            const CutClassification& cls, const DofMap& dofs) {
  SchwarzBlocks out;
  out.strategy = strategy;
  std::vector<char> covered(dofs.n_active(), 0);

  if (strategy == BlockStrategy::CutElements) {
    for (Index e = 0; e < mesh.total_elements(); ++e) {
      if (cls.status[e] != ElementStatus::Cut) continue;
      auto blk = functions_on_element(basis, mesh, e, dofs);
      if (blk.empty()) continue;
      for (Index i : blk) covered[i] = 1;
      out.blocks.push_back(std::move(blk));
    }
  } else {
    // per trimmed basis function
    for (Index a = 0; a < dofs.n_active(); ++a) {
      const Index g = dofs.active[a];
      if (!supported_on_cut(basis, mesh, cls, g)) continue;
      auto mine = active_elements_of(basis, mesh, cls, g);
      std::vector<Index> blk;
      // candidate functions: those supported on an element of my active set
      std::vector<char> seen(dofs.n_active(), 0);
      for (Index e : mine)
        for (Index j : functions_on_element(basis, mesh, e, dofs)) {
          if (seen[j]) continue;
          seen[j] = 1;
          if (strategy == BlockStrategy::SupportIntersection) {
            blk.push_back(j);  // shares an active element with me
          } else {
            auto theirs = active_elements_of(basis, mesh, cls, dofs.active[j]);
            bool subset = std::includes(mine.begin(), mine.end(), theirs.begin(),
                                        theirs.end());
            if (subset) blk.push_back(j);
          }
        }
      std::sort(blk.begin(), blk.end());
      if (blk.empty()) continue;
      for (Index i : blk) covered[i] = 1;
      out.blocks.push_back(std::move(blk));
    }
  }

  for (Index a = 0; a < dofs.n_active(); ++a)
    if (!covered[a]) out.blocks.push_back({a});
  return out;
}

SchwarzApplier SchwarzApplier::build(const SymmetricSparseMatrix& Ahat,
                                     const SchwarzBlocks& blocks, Real drop_tol) {
  SchwarzApplier S;
  S.n_ = Ahat.rows();
  for (const auto& idx : blocks.blocks) {
    Block b;
    b.idx = idx;
    const Index c = static_cast<Index>(idx.size());
    Mat Ab(c, c);
    for (Index i = 0; i < c; ++i)
      for (Index j = 0; j <= i; ++j) {
        Real v = Ahat.coeff(idx[i], idx[j]);
        Ab(i, j) = v;
        Ab(j, i) = v;
      }
    Eigen::LLT<Mat> llt(Ab);
    if (llt.info() == Eigen::Success) {
      b.inverse = llt.solve(Mat::Identity(c, c));
    } else {
      Eigen::SelfAdjointEigenSolver<Mat> es(Ab);
      if (es.info() != Eigen::Success)
        throw BlockFactorizationFailure("block eigendecomposition failed");
      const Vec& ev = es.eigenvalues();
      Real emax = ev[c - 1];
      Vec inv = Vec::Zero(c);
      for (Index i = 0; i < c; ++i)
        if (ev[i] > drop_tol * emax && ev[i] > 0) inv[i] = 1 / ev[i];
      b.inverse = es.eigenvectors() * inv.asDiagonal() *
                  es.eigenvectors().transpose();
    }
    S.blocks_.push_back(std::move(b));
  }
  return S;
}

void SchwarzApplier::apply(const Vec& v, Vec& out) const {
  out.setZero(n_);
  Vec local, sol;
  for (const auto& b : blocks_) {
    const Index c = static_cast<Index>(b.idx.size());
    local.resize(c);
    for (Index i = 0; i < c; ++i) local[i] = v[b.idx[i]];
    sol = b.inverse * local;
    for (Index i = 0; i < c; ++i) out[b.idx[i]] += sol[i];
  }
}

Mat SchwarzApplier::dense() const {
  Mat S = Mat::Zero(n_, n_);
  Vec e = Vec::Zero(n_), col(n_);
  for (Index i = 0; i < n_; ++i) {
    e[i] = 1;
    apply(e, col);
    S.col(i) = col;
    e[i] = 0;
  }
  return S;
}

// --- Deflation ----------------------------------------------------------------

std::vector<Index> weak_support_set(const TensorBasis& basis,
                                    const CartesianMesh& mesh,
                                    const CutClassification& cls,
                                    const DofMap& dofs) {
  std::vector<Index> out;
  for (Index a = 0; a < dofs.n_active(); ++a) {
    SupportBox box = basis.support(dofs.active[a]);
    bool has_inside = false;
    for (int ex = box.lo[0]; ex <= box.hi[0] && !has_inside; ++ex) {
      if (basis.dim() == 1) {
        has_inside = cls.status[mesh.flat(ex)] == ElementStatus::Inside;
      } else {
        for (int ey = box.lo[1]; ey <= box.hi[1]; ++ey)
          if (cls.status[mesh.flat(ex, ey)] == ElementStatus::Inside) {
            has_inside = true;
            break;
          }
      }
    }
    if (!has_inside) out.push_back(a);
  }
  return out;
}

namespace {

struct SupportMeasures {
  std::vector<Index> active_elems;  // sorted flat ids with measure > 0
  std::vector<Index> cut_elems;     // sorted flat ids with status Cut
};

SupportMeasures support_info(const TensorBasis& basis, const CartesianMesh& mesh,
                             const CutClassification& cls, Index g) {
  SupportMeasures s;
  SupportBox box = basis.support(g);
  auto visit = [&](Index e) {
    if (cls.fraction[e] > 0) s.active_elems.push_back(e);
    if (cls.status[e] == ElementStatus::Cut) s.cut_elems.push_back(e);
  };
  for (int ex = box.lo[0]; ex <= box.hi[0]; ++ex) {
    if (basis.dim() == 1)
      visit(mesh.flat(ex));
    else
      for (int ey = box.lo[1]; ey <= box.hi[1]; ++ey) visit(mesh.flat(ex, ey));
  }
  return s;
}

Real sum_measure_union(const std::vector<Index>& a, const std::vector<Index>& b,
                       const std::vector<Real>& m) {
  Real s = 0;
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    Index e;
    if (j >= b.size() || (i < a.size() && a[i] <= b[j])) {
      e = a[i];
      if (j < b.size() && b[j] == e) ++j;
      ++i;
    } else {
      e = b[j++];
    }
    s += m[e];
  }
  return s;
}

Real sum_measure_intersection(const std::vector<Index>& a,
                              const std::vector<Index>& b,
                              const std::vector<Real>& m) {
  Real s = 0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      s += m[a[i]];
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return s;
}

}  // namespace

std::vector<Index> rank_reduce(const std::vector<Index>& I_C, Real tau,
                               const TensorBasis& basis, const CartesianMesh& mesh,
                               const CutClassification& cls, const DofMap& dofs) {
  if (!(tau > 0 && tau <= 1)) throw ParameterOutOfRange("tau");
  const size_t r = I_C.size();
  std::vector<SupportMeasures> info(r);
  for (size_t i = 0; i < r; ++i)
    info[i] = support_info(basis, mesh, cls, dofs.active[I_C[i]]);

  std::vector<Real> elem_vol(mesh.total_elements());
  for (Index e = 0; e < mesh.total_elements(); ++e) elem_vol[e] = mesh.volume(e);

  Real box = 1;
  for (int d = 0; d < mesh.dim; ++d)
    box *= mesh.breakpoints[d].back() - mesh.breakpoints[d].front();
  const Real positive_floor = 1e-14L * box;

  std::vector<char> keep(r, 0);
  for (size_t i = 0; i < r; ++i) {
    for (size_t j = 0; j < r; ++j) {
      if (i == j) continue;
      Real inter = sum_measure_intersection(info[i].active_elems,
                                            info[j].active_elems,
                                            cls.active_measure);
      if (inter <= positive_floor) continue;
      Real supp_union = sum_measure_union(info[i].active_elems,
                                          info[j].active_elems,
                                          cls.active_measure);
      Real cut_union =
          sum_measure_union(info[i].cut_elems, info[j].cut_elems, elem_vol);
      if (cut_union > 0 && supp_union <= tau * cut_union) {
        keep[i] = 1;
        break;
      }
    }
  }
  std::vector<Index> out;
  for (size_t i = 0; i < r; ++i)
    if (keep[i]) out.push_back(I_C[i]);
  return out;
}

DeflationSpace DeflationSpace::build(const SymmetricSparseMatrix& Ahat,
                                     std::vector<Index> indices) {
  std::sort(indices.begin(), indices.end());
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end())
    throw ParameterOutOfRange("duplicate deflation indices");
  if (!indices.empty() &&
      (indices.front() < 0 || indices.back() >= Ahat.rows()))
    throw ParameterOutOfRange("deflation index out of range");

  DeflationSpace d;
  d.n_ = Ahat.rows();
  d.idx_ = std::move(indices);
  const Index rr = d.rank();
  d.E_.resize(rr, rr);
  for (Index i = 0; i < rr; ++i)
    for (Index j = 0; j < rr; ++j) d.E_(i, j) = Ahat.coeff(d.idx_[i], d.idx_[j]);
  if (rr > 0) {
    d.llt_.compute(d.E_);
    if (d.llt_.info() != Eigen::Success)
      throw CoarseFactorizationFailure(
          "coarse matrix not numerically SPD; remove empty dofs");
  }
  d.AZ_.resize(d.n_, rr);
  for (Index k = 0; k < rr; ++k) d.AZ_.col(k) = Ahat.column(d.idx_[k]);
  return d;
}

void DeflationSpace::project(const Vec& v, Vec& out) const {
  if (rank() == 0) {
    out = v;
    return;
  }
  Vec t(rank());
  for (Index k = 0; k < rank(); ++k) t[k] = v[idx_[k]];
  Vec s = llt_.solve(t);
  if (!s.allFinite()) throw CoarseSolveFailure("coarse solve produced non-finite");
  out = v - AZ_ * s;
}

void DeflationSpace::project_t(const Vec& v, Vec& out) const {
  if (rank() == 0) {
    out = v;
    return;
  }
  Vec t = AZ_.transpose() * v;
  Vec s = llt_.solve(t);
  out = v;
  for (Index k = 0; k < rank(); ++k) out[idx_[k]] -= s[k];
}

Vec DeflationSpace::coarse_correction(const Vec& b) const {
  Vec out = Vec::Zero(n_);
  if (rank() == 0) return out;
  Vec t(rank());
  for (Index k = 0; k < rank(); ++k) t[k] = b[idx_[k]];
  Vec s = llt_.solve(t);
  for (Index k = 0; k < rank(); ++k) out[idx_[k]] = s[k];
  return out;
}

Vec DeflationSpace::recover(const Vec& xt, const Vec& b) const {
  Vec pt;
  project_t(xt, pt);
  return coarse_correction(b) + pt;
}

}  // namespace trimcond
