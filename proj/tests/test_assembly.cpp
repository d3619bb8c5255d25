#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "trimcond/assembly.hpp"
#include "trimcond/catalog.hpp"

using namespace trimcond;

namespace {

struct Problem1D {
  TensorBasis basis;
  CartesianMesh mesh;
  CutClassification cls;
  CutQuadrature quad;
  DofMap dofs;
};

Problem1D untrimmed_line(int n, int p, BasisKind kind, int k = 0) {
  Problem1D pr;
  pr.mesh = CartesianMesh::uniform(1, {0, 0}, {1, 0}, {n, 1});
  TrimmedDomain dom;
  dom.dim = 1;
  dom.box_lo = {0, 0};
  dom.box_hi = {1, 0};
  dom.intervals = {{0, 1}};
  BasisSpec spec;
  spec.kind = kind;
  spec.degree = {p, p};
  spec.continuity = {k, k};
  pr.basis = build_tensor_basis(spec, {pr.mesh.breakpoints[0]});
  pr.cls = classify(pr.mesh, dom);
  pr.quad = build_quadrature(pr.mesh, dom, pr.cls, p + 1);
  pr.dofs = DofMap::build(pr.basis, pr.mesh, pr.cls);
  return pr;
}

}  // namespace

TEST_CASE("1D p=1 mass and stiffness interior rows") {
  auto pr = untrimmed_line(8, 1, BasisKind::Lagrange);
  const Real h = 0.125L;
  auto M = assemble(MatrixKind::Mass, pr.basis, pr.mesh, pr.cls, pr.quad, pr.dofs);
  auto K = assemble(MatrixKind::Stiffness, pr.basis, pr.mesh, pr.cls, pr.quad,
                    pr.dofs);
  // interior hat function i=4
  CHECK(static_cast<double>(M.coeff(4, 3)) ==
        doctest::Approx(static_cast<double>(h / 6)).epsilon(1e-14));
  CHECK(static_cast<double>(M.coeff(4, 4)) ==
        doctest::Approx(static_cast<double>(2 * h / 3)).epsilon(1e-14));
  CHECK(static_cast<double>(M.coeff(4, 5)) ==
        doctest::Approx(static_cast<double>(h / 6)).epsilon(1e-14));
  CHECK(static_cast<double>(K.coeff(4, 4)) ==
        doctest::Approx(static_cast<double>(2 / h)).epsilon(1e-14));
  CHECK(static_cast<double>(K.coeff(4, 3)) ==
        doctest::Approx(static_cast<double>(-1 / h)).epsilon(1e-14));
}

TEST_CASE("sum of mass entries equals |Omega|") {
  CatalogParams p;
  p.delta = 2.3e-3L;
  p.subdivisions = 8;
  auto g = catalog("stretched_square", p);
  BasisSpec spec;
  spec.kind = BasisKind::BSpline;
  spec.degree = {2, 2};
  spec.continuity = {1, 1};
  auto basis =
      build_tensor_basis(spec, {g.mesh.breakpoints[0], g.mesh.breakpoints[1]});
  auto cls = classify(g.mesh, g.domain);
  auto quad = build_quadrature(g.mesh, g.domain, cls, 3);
  auto dofs = DofMap::build(basis, g.mesh, cls);
  auto M = assemble(MatrixKind::Mass, basis, g.mesh, cls, quad, dofs);
  Real total = 0;
  M.for_each_upper([&](Index i, Index j, Real v) { total += (i == j) ? v : 2 * v; });
  CHECK(std::abs(static_cast<double>(total - *g.domain.analytic_area)) < 1e-12);
}

TEST_CASE("combine is the plain linear combination") {
  auto pr = untrimmed_line(4, 2, BasisKind::BSpline, 1);
  auto M = assemble(MatrixKind::Mass, pr.basis, pr.mesh, pr.cls, pr.quad, pr.dofs);
  auto K = assemble(MatrixKind::Stiffness, pr.basis, pr.mesh, pr.cls, pr.quad,
                    pr.dofs);
  auto A1 = combine(1, M, 0, K);
  auto A2 = combine(0, M, 1, K);
  auto A3 = combine(1, M, 0.25L, K);
  CHECK((A1.dense() - M.dense()).norm() == 0.0L);
  CHECK((A2.dense() - K.dense()).norm() == 0.0L);
  CHECK((A3.dense() - (M.dense() + 0.25L * K.dense())).norm() < 1e-18L);
  CHECK_THROWS_AS(combine(0, M, 0, K), ParameterOutOfRange);
}

TEST_CASE("load vector: constants, zero, and mass columns") {
  auto pr = untrimmed_line(8, 2, BasisKind::BSpline, 1);
  auto M = assemble(MatrixKind::Mass, pr.basis, pr.mesh, pr.cls, pr.quad, pr.dofs);
  Vec b1 = assemble_load([](Pt) { return Real(1); }, pr.basis, pr.mesh, pr.quad,
                         pr.dofs);
  CHECK(std::abs(static_cast<double>(b1.sum() - 1)) < 1e-14);

  Vec b0 = assemble_load([](Pt) { return Real(0); }, pr.basis, pr.mesh, pr.quad,
                         pr.dofs);
  CHECK(b0.norm() == 0.0L);

  // f = basis function j -> column j of M
  const Index j = 4;
  const auto& uni = pr.basis.uni(0);
  ScalarField fj = [&](Pt x) {
    std::array<Real, kMaxDegree + 1> v{};
    Index first = uni.eval(x[0], 0, v);
    return (j >= first && j <= first + uni.degree()) ? v[j - first] : Real(0);
  };
  // quadrature must integrate phi_i * phi_j exactly: q = p+1 suffices
  Vec bj = assemble_load(fj, pr.basis, pr.mesh, pr.quad, pr.dofs);
  Vec col = M.column(j);
  CHECK((bj - col).norm() < 1e-12L);
}

TEST_CASE("strong Dirichlet: hand-assembled 1D example") {
  auto pr = untrimmed_line(2, 1, BasisKind::Lagrange);
  const Real h = 0.5L;
  auto K = assemble(MatrixKind::Stiffness, pr.basis, pr.mesh, pr.cls, pr.quad,
                    pr.dofs);
  Vec b = Vec::Zero(3);
  auto red = apply_strong_dirichlet(K, b, pr.basis, pr.dofs, {0}, Vec::Zero(1));
  REQUIRE(red.A.rows() == 2);
  CHECK(static_cast<double>(red.A.coeff(0, 0)) ==
        doctest::Approx(static_cast<double>(2 / h)));
  CHECK(static_cast<double>(red.A.coeff(0, 1)) ==
        doctest::Approx(static_cast<double>(-1 / h)));
  CHECK(static_cast<double>(red.A.coeff(1, 1)) ==
        doctest::Approx(static_cast<double>(1 / h)));

  // constrain everything -> empty system
  std::vector<Index> all = {0, 1, 2};
  auto red2 = apply_strong_dirichlet(K, b, pr.basis, pr.dofs, all, Vec::Zero(3));
  CHECK(red2.A.rows() == 0);

  // an interior smooth B-spline dof is not boundary-interpolatory
  auto bs = untrimmed_line(4, 2, BasisKind::BSpline, 1);
  auto Kb = assemble(MatrixKind::Stiffness, bs.basis, bs.mesh, bs.cls, bs.quad,
                     bs.dofs);
  Vec bb = Vec::Zero(Kb.rows());
  CHECK_THROWS_AS(
      apply_strong_dirichlet(Kb, bb, bs.basis, bs.dofs, {2}, Vec::Zero(1)),
      NonInterpolatoryDof);
}

TEST_CASE("Dirichlet lifting moves inhomogeneous data to the rhs") {
  auto pr = untrimmed_line(4, 1, BasisKind::Lagrange);
  auto K = assemble(MatrixKind::Stiffness, pr.basis, pr.mesh, pr.cls, pr.quad,
                    pr.dofs);
  Vec b = Vec::Zero(5);
  Vec g(1);
  g[0] = 2;
  auto red = apply_strong_dirichlet(K, b, pr.basis, pr.dofs, {0}, g);
  // first remaining row picks up -K(1,0)*g = 4*2
  CHECK(static_cast<double>(red.b[0]) == doctest::Approx(8.0));
  for (Index i = 1; i < red.b.size(); ++i)
    CHECK(static_cast<double>(red.b[i]) == doctest::Approx(0.0));
}

TEST_CASE("mass SPD and stiffness nullspace on a trimmed geometry") {
  CatalogParams p;
  p.delta = 0.0125L;  // 0.1h: kappa stays within extended-precision reach
  p.variant = "corner";
  auto g = catalog("ridge", p);
  BasisSpec spec;
  spec.kind = BasisKind::BSpline;
  spec.degree = {2, 2};
  spec.continuity = {1, 1};
  auto basis =
      build_tensor_basis(spec, {g.mesh.breakpoints[0], g.mesh.breakpoints[1]});
  auto cls = classify(g.mesh, g.domain);
  auto quad = build_quadrature(g.mesh, g.domain, cls, 3);
  auto dofs = DofMap::build(basis, g.mesh, cls);
  auto M = assemble(MatrixKind::Mass, basis, g.mesh, cls, quad, dofs);
  auto K = assemble(MatrixKind::Stiffness, basis, g.mesh, cls, quad, dofs);

  // positivity through the pivots of the extended-precision factorization
  Eigen::LDLT<Mat> ldlt(M.dense());
  REQUIRE(ldlt.info() == Eigen::Success);
  CHECK(ldlt.vectorD().minCoeff() > 0.0L);

  // constants lie in the stiffness nullspace (pure Neumann)
  Vec ones = Vec::Ones(dofs.n_active());
  Vec Kc = K * ones;
  Real rq = ones.dot(Kc) / ones.dot(ones);
  Eigen::SelfAdjointEigenSolver<Mat> esK(K.dense());
  Real knorm = esK.eigenvalues().cwiseAbs().maxCoeff();
  CHECK(static_cast<double>(rq) <= 1e-12 * static_cast<double>(knorm));
}

TEST_CASE("untrimmed-limit consistency with boundary-fitted assembly") {
  // trim exactly on the mesh line 0.75 of a 16-element mesh
  CartesianMesh mesh = CartesianMesh::uniform(1, {0, 0}, {1, 0}, {16, 1});
  TrimmedDomain dom;
  dom.dim = 1;
  dom.box_lo = {0, 0};
  dom.box_hi = {1, 0};
  dom.intervals = {{0, 0.75L}};
  BasisSpec spec;
  spec.kind = BasisKind::Lagrange;
  spec.degree = {2, 2};
  auto basis = build_tensor_basis(spec, {mesh.breakpoints[0]});
  auto cls = classify(mesh, dom);
  auto quad = build_quadrature(mesh, dom, cls, 3);
  auto dofs = DofMap::build(basis, mesh, cls);
  auto M = assemble(MatrixKind::Mass, basis, mesh, cls, quad, dofs);

  // boundary-fitted: 12 elements on (0, 0.75)
  auto mesh2 = CartesianMesh::uniform(1, {0, 0}, {0.75L, 0}, {12, 1});
  TrimmedDomain dom2 = dom;
  dom2.box_hi = {0.75L, 0};
  auto basis2 = build_tensor_basis(spec, {mesh2.breakpoints[0]});
  auto cls2 = classify(mesh2, dom2);
  auto quad2 = build_quadrature(mesh2, dom2, cls2, 3);
  auto dofs2 = DofMap::build(basis2, mesh2, cls2);
  auto M2 = assemble(MatrixKind::Mass, basis2, mesh2, cls2, quad2, dofs2);

  REQUIRE(M.rows() == M2.rows());
  CHECK((M.dense() - M2.dense()).cwiseAbs().maxCoeff() < 1e-12L);
}

TEST_CASE("empty active set raises") {
  auto pr = untrimmed_line(4, 1, BasisKind::Lagrange);
  DofMap empty;
  empty.global_to_active.assign(pr.basis.total(), -1);
  CHECK_THROWS_AS(assemble(MatrixKind::Mass, pr.basis, pr.mesh, pr.cls, pr.quad,
                           empty),
                  EmptyActiveSet);
}
