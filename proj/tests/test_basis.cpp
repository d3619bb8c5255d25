#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "trimcond/basis.hpp"

using namespace trimcond;

namespace {

std::vector<Real> uniform_breaks(int n, Real lo = 0, Real hi = 1) {
  std::vector<Real> b(n + 1);
  for (int i = 0; i <= n; ++i) b[i] = lo + (hi - lo) * Real(i) / n;
  return b;
}

}  // namespace

TEST_CASE("knot vector: quadratic C1 over 4 elements") {
  auto kv = build_knot_vector(2, uniform_breaks(4), 1);
  std::vector<Real> expect = {0, 0, 0, 0.25L, 0.5L, 0.75L, 1, 1, 1};
  REQUIRE(kv.values.size() == expect.size());
  for (size_t i = 0; i < expect.size(); ++i)
    CHECK(kv.values[i] == doctest::Approx(static_cast<double>(expect[i])));
  CHECK(kv.num_functions() == 6);
}

TEST_CASE("knot vector: p=1 single element and p=3 C0 interior") {
  auto kv1 = build_knot_vector(1, {0, 1}, 0);
  CHECK(kv1.values == std::vector<Real>{0, 0, 1, 1});
  CHECK(kv1.num_functions() == 2);

  auto kv3 = build_knot_vector(3, {0, 0.5L, 1}, 0);
  CHECK(kv3.num_functions() == 7);  // Ns(p-k)+k+1 = 2*3+0+1
  int mult = 0;
  for (Real t : kv3.values)
    if (t == 0.5L) ++mult;
  CHECK(mult == 3);
}

TEST_CASE("knot vector errors") {
  CHECK_THROWS_AS(build_knot_vector(2, uniform_breaks(4), 2), InvalidContinuity);
  CHECK_THROWS_AS(build_knot_vector(2, uniform_breaks(4), -1), InvalidContinuity);
  CHECK_THROWS_AS(build_knot_vector(2, {0, 0, 1}, 1), NonMonotoneBreakpoints);
}

TEST_CASE("bspline_eval: partition of unity and hats") {
  auto kv = build_knot_vector(1, {0, 0.5L, 1}, 0);  // knots 0 0 .5 1 1
  std::array<Real, kMaxDegree + 1> v{};
  Index first = bspline_eval(kv, 0.25L, 0, v);
  CHECK(first == 0);
  CHECK(v[0] == doctest::Approx(0.5));
  CHECK(v[1] == doctest::Approx(0.5));

  // interpolatory at the open left end
  first = bspline_eval(kv, 0.0L, 0, v);
  CHECK(v[0] == doctest::Approx(1.0));
  CHECK(v[1] == doctest::Approx(0.0));
}

TEST_CASE("bspline_eval: out of domain") {
  auto kv = build_knot_vector(2, uniform_breaks(4), 1);
  std::array<Real, kMaxDegree + 1> v{};
  CHECK_THROWS_AS(bspline_eval(kv, -0.1L, 0, v), OutOfDomain);
  CHECK_THROWS_AS(bspline_eval(kv, 1.1L, 0, v), OutOfDomain);
}

TEST_CASE("lagrange_eval: interpolation, unity, midpoint") {
  std::vector<Real> nodes = {0, 0.5L, 1};
  std::array<Real, kMaxDegree + 1> v{};
  lagrange_eval(0, 1, nodes, 0.5L, 0, v);
  CHECK(v[0] == doctest::Approx(0.0));
  CHECK(v[1] == doctest::Approx(1.0));
  CHECK(v[2] == doctest::Approx(0.0));

  lagrange_eval(0, 1, nodes, 0.3L, 0, v);
  CHECK(static_cast<double>(v[0] + v[1] + v[2]) == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(lagrange_eval(0, 1, {0, 0, 1}, 0.3L, 0, v), DuplicateNodes);
}

TEST_CASE("partition of unity: both kinds, p<=4, random points") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  for (int p = 1; p <= 4; ++p) {
    for (int k = 0; k <= p - 1; ++k) {
      auto b = UnivariateBasis::bspline(p, uniform_breaks(9), k);
      for (int it = 0; it < 500; ++it) {
        Real x = static_cast<Real>(u(rng));
        std::array<Real, kMaxDegree + 1> v{};
        b.eval(x, 0, v);
        Real s = 0;
        for (int i = 0; i <= p; ++i) {
          CHECK(v[i] >= -1e-15L);
          s += v[i];
        }
        CHECK(std::abs(static_cast<double>(s - 1)) <= 1e-12);
        // derivative sum is zero
        b.eval(x, 1, v);
        Real ds = 0;
        for (int i = 0; i <= p; ++i) ds += v[i];
        CHECK(std::abs(static_cast<double>(ds)) <= 1e-10);
      }
    }
    for (NodeRule rule : {NodeRule::Equispaced, NodeRule::GaussLobatto}) {
      auto b = UnivariateBasis::lagrange(p, uniform_breaks(9), rule);
      for (int it = 0; it < 200; ++it) {
        Real x = static_cast<Real>(u(rng));
        std::array<Real, kMaxDegree + 1> v{};
        b.eval(x, 0, v);
        Real s = 0;
        for (int i = 0; i <= p; ++i) s += v[i];
        CHECK(std::abs(static_cast<double>(s - 1)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("derivative consistency by central differences") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  const Real eps = 1e-7L;
  for (int p = 1; p <= 4; ++p) {
    auto b = UnivariateBasis::bspline(p, uniform_breaks(8), std::max(0, p - 2));
    for (int it = 0; it < 50; ++it) {
      Real x = static_cast<Real>(u(rng));
      std::array<Real, kMaxDegree + 1> vp{}, vm{}, d{};
      Index f1 = b.eval(x + eps, 0, vp);
      Index f2 = b.eval(x - eps, 0, vm);
      Index f3 = b.eval(x, 1, d);
      if (f1 != f2 || f1 != f3) continue;  // straddles a breakpoint
      for (int i = 0; i <= p; ++i) {
        double fd = static_cast<double>((vp[i] - vm[i]) / (2 * eps));
        double an = static_cast<double>(d[i]);
        CHECK(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an)));
      }
    }
  }
}

TEST_CASE("dimension formula across p, k, Ns") {
  for (int p = 1; p <= 4; ++p)
    for (int k = 0; k <= p - 1; ++k)
      for (int ns = 1; ns <= 16; ++ns) {
        auto b = UnivariateBasis::bspline(p, uniform_breaks(ns), k);
        CHECK(b.dim() == Index(ns) * (p - k) + k + 1);
      }
}

TEST_CASE("support boxes are exact") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int p = 2; p <= 4; ++p)
    for (int k : {0, p - 1}) {
      auto b = UnivariateBasis::bspline(p, uniform_breaks(6), k);
      for (Index i = 0; i < b.dim(); ++i) {
        auto [lo, hi] = b.support(i);
        for (int e = 0; e < b.num_elements(); ++e) {
          Real elo = b.breakpoints()[e], ehi = b.breakpoints()[e + 1];
          Real maxv = 0;
          for (int s = 0; s < 50; ++s) {
            Real x = elo + (ehi - elo) * static_cast<Real>(u(rng));
            std::array<Real, kMaxDegree + 1> v{};
            Index first = b.eval(x, 0, v);
            Real val = (i >= first && i <= first + p) ? v[i - first] : 0;
            maxv = std::max(maxv, std::abs(val));
          }
          if (e < lo || e > hi)
            CHECK(static_cast<double>(maxv) <= 1e-14);
          else
            CHECK(static_cast<double>(maxv) >= 1e-10);
        }
      }
    }
}

TEST_CASE("support box example: last C1 quadratic B-spline on 4 elements") {
  auto b = UnivariateBasis::bspline(2, uniform_breaks(4), 1);
  auto [lo, hi] = b.support(b.dim() - 1);
  CHECK(lo == 3);
  CHECK(hi == 3);
}

TEST_CASE("tensor basis dimensions and index maps") {
  BasisSpec spec;
  spec.kind = BasisKind::BSpline;
  spec.degree = {2, 2};
  spec.continuity = {1, 1};
  auto tb = build_tensor_basis(spec, {uniform_breaks(4), uniform_breaks(4)});
  CHECK(tb.total() == 36);  // 6x6

  BasisSpec lag;
  lag.kind = BasisKind::Lagrange;
  lag.degree = {2, 2};
  auto tb1 = build_tensor_basis(lag, {uniform_breaks(128)});
  CHECK(tb1.total() == 257);

  for (Index f : {Index(0), Index(17), Index(35)}) {
    auto mi = tb.multi(f);
    CHECK(tb.flat(mi[0], mi[1]) == f);
  }
}

TEST_CASE("bernstein collocation: p=1 identity, row sums, quadratic middle row") {
  BasisSpec lag;
  lag.kind = BasisKind::Lagrange;
  lag.degree = {1, 1};
  auto tb = build_tensor_basis(lag, {uniform_breaks(3)});
  Mat A = bernstein_collocation(tb);
  CHECK((A - Mat::Identity(4, 4)).norm() < 1e-14L);

  lag.degree = {2, 2};
  auto tb2 = build_tensor_basis(lag, {uniform_breaks(5)});
  Mat A2 = bernstein_collocation(tb2);
  for (Index r = 0; r < A2.rows(); ++r)
    CHECK(std::abs(static_cast<double>(A2.row(r).sum() - 1)) < 1e-14);

  auto tb3 = build_tensor_basis(lag, {uniform_breaks(1)});
  Mat A3 = bernstein_collocation(tb3);
  CHECK(A3(1, 0) == doctest::Approx(0.25));
  CHECK(A3(1, 1) == doctest::Approx(0.5));
  CHECK(A3(1, 2) == doctest::Approx(0.25));
}

TEST_CASE("gauss rules integrate polynomials exactly") {
  std::vector<Real> x, w;
  for (int q = 1; q <= 8; ++q) {
    gauss_legendre(q, x, w);
    for (int deg = 0; deg <= 2 * q - 1; ++deg) {
      Real s = 0;
      for (int i = 0; i < q; ++i) s += w[i] * std::pow(x[i], Real(deg));
      CHECK(std::abs(static_cast<double>(s - Real(1) / (deg + 1))) < 1e-16);
    }
  }
}

TEST_CASE("gauss lobatto nodes include endpoints and are symmetric") {
  for (int p = 1; p <= 6; ++p) {
    auto n = gauss_lobatto_nodes(p);
    REQUIRE(n.size() == size_t(p + 1));
    CHECK(n.front() == 0.0L);
    CHECK(n.back() == 1.0L);
    for (size_t i = 0; i < n.size(); ++i)
      CHECK(std::abs(static_cast<double>(n[i] + n[n.size() - 1 - i] - 1)) < 1e-15);
  }
}
