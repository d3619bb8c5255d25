#include "trimcond/assembly.hpp"

#include <algorithm>

namespace trimcond {

DofMap DofMap::build(const TensorBasis& basis, const CartesianMesh& mesh,
                     const CutClassification& cls) {
  DofMap d;
  d.global_to_active.assign(basis.total(), -1);
  const Real floor = kSliverFloor;
  Real box = 1;
  for (int dd = 0; dd < mesh.dim; ++dd)
    box *= mesh.breakpoints[dd].back() - mesh.breakpoints[dd].front();
  for (Index f = 0; f < basis.total(); ++f) {
    auto [supp, cut] = active_support_measure(basis.support(f), mesh, cls);
    (void)cut;
    if (supp > floor * box) {
      d.global_to_active[f] = static_cast<Index>(d.active.size());
      d.active.push_back(f);
    }
  }
  return d;
}

namespace {

struct LocalEval {
  // per-point values and gradients of the (p+1)^dim functions active there
  std::array<Real, kMaxDegree + 1> vx{}, vy{}, dx{}, dy{};
  Index fx = 0, fy = 0;
};

}  // namespace

SymmetricSparseMatrix assemble(MatrixKind kind, const TensorBasis& basis,
                               const CartesianMesh& mesh,
                               const CutClassification& cls,
                               const CutQuadrature& quad, const DofMap& dofs) {
  if (dofs.n_active() == 0) throw EmptyActiveSet("no active dofs");
  const int dim = basis.dim();
  const int px = basis.uni(0).degree();
  const int py = dim == 2 ? basis.uni(1).degree() : 0;
  const int nlx = px + 1, nly = dim == 2 ? py + 1 : 1;
  const int nl = nlx * nly;

  std::vector<SymmetricSparseMatrix::Triplet> ts;
  std::vector<Real> local(nl * nl);
  std::vector<Index> gidx(nl);
  LocalEval ev;

  for (Index e = 0; e < mesh.total_elements(); ++e) {
    if (!cls.is_active(e)) continue;
    const ElementRule& rule = quad.rules[e];
    if (rule.pts.empty()) continue;
    std::fill(local.begin(), local.end(), Real(0));

    for (size_t qp = 0; qp < rule.pts.size(); ++qp) {
      const Pt& x = rule.pts[qp];
      const Real w = rule.w[qp];
      ev.fx = basis.uni(0).eval(x[0], 0, ev.vx);
      if (kind == MatrixKind::Stiffness) basis.uni(0).eval(x[0], 1, ev.dx);
      if (dim == 2) {
        ev.fy = basis.uni(1).eval(x[1], 0, ev.vy);
        if (kind == MatrixKind::Stiffness) basis.uni(1).eval(x[1], 1, ev.dy);
      }
      for (int a = 0; a < nlx; ++a)
        for (int b = 0; b < nly; ++b) {
          const int la = a * nly + b;
          const Real va = dim == 2 ? ev.vx[a] * ev.vy[b] : ev.vx[a];
          Real gax = 0, gay = 0;
          if (kind == MatrixKind::Stiffness) {
            gax = dim == 2 ? ev.dx[a] * ev.vy[b] : ev.dx[a];
            gay = dim == 2 ? ev.vx[a] * ev.dy[b] : 0;
          }
          for (int c = 0; c < nlx; ++c)
            for (int d = 0; d < nly; ++d) {
              const int lc = c * nly + d;
              if (lc < la) continue;
              Real contrib;
              if (kind == MatrixKind::Mass) {
                const Real vc = dim == 2 ? ev.vx[c] * ev.vy[d] : ev.vx[c];
                contrib = va * vc;
              } else {
                const Real gcx = dim == 2 ? ev.dx[c] * ev.vy[d] : ev.dx[c];
                const Real gcy = dim == 2 ? ev.vx[c] * ev.dy[d] : 0;
                contrib = gax * gcx + gay * gcy;
              }
              local[la * nl + lc] += w * contrib;
            }
        }
    }

    // scatter
    const Index fx0 = basis.uni(0).first_on_element(mesh.multi(e)[0]);
    const Index fy0 = dim == 2 ? basis.uni(1).first_on_element(mesh.multi(e)[1]) : 0;
    for (int a = 0; a < nlx; ++a)
      for (int b = 0; b < nly; ++b) {
        const Index g = basis.flat(fx0 + a, fy0 + b);
        gidx[a * nly + b] = dofs.global_to_active[g];
      }
    for (int la = 0; la < nl; ++la)
      for (int lc = la; lc < nl; ++lc) {
        Index i = gidx[la], j = gidx[lc];
        if (i < 0 || j < 0) throw EmptyActiveSet("function on active element inactive");
        ts.push_back({i, j, local[la * nl + lc]});
      }
  }
  return SymmetricSparseMatrix::from_triplets(dofs.n_active(), std::move(ts));
}

Vec assemble_load(const ScalarField& f, const TensorBasis& basis,
                  const CartesianMesh& mesh, const CutQuadrature& quad,
                  const DofMap& dofs) {
  const int dim = basis.dim();
  const int nlx = basis.uni(0).degree() + 1;
  const int nly = dim == 2 ? basis.uni(1).degree() + 1 : 1;
  Vec b = Vec::Zero(dofs.n_active());
  std::array<Real, kMaxDegree + 1> vx{}, vy{};

  for (Index e = 0; e < mesh.total_elements(); ++e) {
    const ElementRule& rule = quad.rules[e];
    for (size_t qp = 0; qp < rule.pts.size(); ++qp) {
      const Pt& x = rule.pts[qp];
      const Real w = rule.w[qp];
      const Real fv = f(x);
      if (fv == 0) continue;
      Index fx = basis.uni(0).eval(x[0], 0, vx);
      Index fy = 0;
      if (dim == 2) fy = basis.uni(1).eval(x[1], 0, vy);
      for (int a = 0; a < nlx; ++a)
        for (int bb = 0; bb < nly; ++bb) {
          const Index g = basis.flat(fx + a, fy + bb);
          const Index i = dofs.global_to_active[g];
          if (i < 0) continue;
          b[i] += w * fv * (dim == 2 ? vx[a] * vy[bb] : vx[a]);
        }
    }
  }
  return b;
}

std::vector<Index> boundary_dofs(const TensorBasis& basis, const DofMap& dofs,
                                 BoxSide side) {
  std::vector<Index> out;
  const int d = (side == BoxSide::XLow || side == BoxSide::XHigh) ? 0 : 1;
  const bool low = (side == BoxSide::XLow || side == BoxSide::YLow);
  const Index edge = low ? 0 : basis.uni(d).dim() - 1;
  for (Index a = 0; a < dofs.n_active(); ++a) {
    auto mi = basis.multi(dofs.active[a]);
    if (mi[d] == edge) out.push_back(a);
  }
  return out;
}

ReducedSystem apply_strong_dirichlet(const SymmetricSparseMatrix& A, const Vec& b,
                                     const TensorBasis& basis, const DofMap& dofs,
                                     const std::vector<Index>& constrained,
                                     const Vec& values) {
  const Index n = A.rows();
  if (b.size() != n || static_cast<Index>(constrained.size()) != values.size())
    throw DimensionMismatch("apply_strong_dirichlet");

  // Constrained dofs must be nodal-interpolatory: any C^0 Lagrange dof, or
  // an open-knot boundary function for B-splines.
  for (Index a : constrained) {
    if (basis.uni(0).kind() == BasisKind::Lagrange) continue;
    auto mi = basis.multi(dofs.active[a]);
    bool ok = false;
    for (int d = 0; d < basis.dim(); ++d)
      ok |= (mi[d] == 0 || mi[d] == basis.uni(d).dim() - 1);
    if (!ok)
      throw NonInterpolatoryDof("dof " + std::to_string(a) +
                                " is not boundary-interpolatory");
  }

  std::vector<Real> g(n, 0);
  std::vector<char> fixed(n, 0);
  for (size_t k = 0; k < constrained.size(); ++k) {
    fixed[constrained[k]] = 1;
    g[constrained[k]] = values[k];
  }

  ReducedSystem out;
  std::vector<Index> new_index(n, -1);
  for (Index i = 0; i < n; ++i)
    if (!fixed[i]) {
      new_index[i] = static_cast<Index>(out.kept.size());
      out.kept.push_back(i);
    }
  const Index m = static_cast<Index>(out.kept.size());

  Vec rb = Vec::Zero(m);
  for (Index i = 0; i < m; ++i) rb[i] = b[out.kept[i]];

  std::vector<SymmetricSparseMatrix::Triplet> ts;
  A.for_each_upper([&](Index i, Index j, Real v) {
    const bool fi = fixed[i], fj = fixed[j];
    if (!fi && !fj) {
      ts.push_back({new_index[i], new_index[j], v});
    } else if (fi != fj) {
      // lift: b_S -= A_SD * g_D
      if (fi)
        rb[new_index[j]] -= v * g[i];
      else
        rb[new_index[i]] -= v * g[j];
    }
  });
  out.A = SymmetricSparseMatrix::from_triplets(m, std::move(ts));
  out.b = std::move(rb);
  return out;
}

}  // namespace trimcond
