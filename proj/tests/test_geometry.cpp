#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "trimcond/catalog.hpp"
#include "trimcond/geometry.hpp"

using namespace trimcond;

namespace {
ConvexPolygon unit_square() {
  return ConvexPolygon{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
}
}  // namespace

TEST_CASE("polygon clipping and areas") {
  ConvexPolygon tri{{{0, 0}, {1, 0}, {0, 1}}};
  CHECK(static_cast<double>(tri.area()) == doctest::Approx(0.5));

  auto clipped = clip_rect(tri, {0, 0}, {0.5L, 0.5L});
  // the triangle fills the quarter square except the corner cut
  CHECK(static_cast<double>(clipped.area()) == doctest::Approx(0.25 - 0.0));

  auto half = clip_halfplane(unit_square(), {1, 0}, 0.5L);
  CHECK(static_cast<double>(half.area()) == doctest::Approx(0.5));
}

TEST_CASE("circle-polygon area: analytic cases") {
  Disk d{{0.5L, 0.5L}, 0.25L};
  // disk fully inside the square
  CHECK(static_cast<double>(circle_polygon_area(unit_square(), d)) ==
        doctest::Approx(M_PI * 0.0625).epsilon(1e-14));

  // quarter disk at the corner
  Disk corner{{0, 0}, 0.5L};
  CHECK(static_cast<double>(circle_polygon_area(unit_square(), corner)) ==
        doctest::Approx(M_PI * 0.25 / 4).epsilon(1e-14));

  // half disk crossing an edge
  Disk edge{{0.5L, 0}, 0.25L};
  CHECK(static_cast<double>(circle_polygon_area(unit_square(), edge)) ==
        doctest::Approx(M_PI * 0.0625 / 2).epsilon(1e-14));

  // disk entirely outside
  Disk out{{2, 2}, 0.3L};
  CHECK(static_cast<double>(circle_polygon_area(unit_square(), out)) ==
        doctest::Approx(0.0));
}

TEST_CASE("classify: 1D trimmed line cut fraction delta/h") {
  CatalogParams p;
  p.delta = 1e-3L;
  p.subdivisions = 16;
  auto g = catalog("trimmed_line", p);
  auto cls = classify(g.mesh, g.domain);
  // boundary at 0.75 + delta: element 12 is the cut one
  const Real h = g.h;
  CHECK(cls.status[11] == ElementStatus::Inside);
  CHECK(cls.status[12] == ElementStatus::Cut);
  CHECK(cls.status[13] == ElementStatus::Outside);
  CHECK(static_cast<double>(cls.fraction[12]) ==
        doctest::Approx(static_cast<double>(p.delta / h)).epsilon(1e-14));
  CHECK(static_cast<double>(cls.eta) ==
        doctest::Approx(static_cast<double>(p.delta / h)).epsilon(1e-14));
}

TEST_CASE("classify: whole box is inside") {
  TrimmedDomain d;
  d.dim = 2;
  d.box_lo = {0, 0};
  d.box_hi = {1, 1};
  d.positive = {unit_square()};
  auto mesh = CartesianMesh::uniform(2, {0, 0}, {1, 1}, {4, 4});
  auto cls = classify(mesh, d);
  CHECK(cls.n_inside == 16);
  CHECK(cls.n_cut == 0);
  CHECK(static_cast<double>(cls.eta) == doctest::Approx(1.0));
}

TEST_CASE("classify: stretched square corner fraction (delta/h)^2") {
  CatalogParams p;
  p.delta = 3e-3L;
  p.subdivisions = 8;
  auto g = catalog("stretched_square", p);
  auto cls = classify(g.mesh, g.domain);
  const Real h = g.h;
  const Real f = p.delta / h;
  // corner element (4,4)
  Index corner = g.mesh.flat(4, 4);
  CHECK(static_cast<double>(cls.fraction[corner]) ==
        doctest::Approx(static_cast<double>(f * f)).epsilon(1e-13));
  CHECK(static_cast<double>(cls.eta) ==
        doctest::Approx(static_cast<double>(f * f)).epsilon(1e-13));
  // sliver element on the edge
  Index sliver = g.mesh.flat(4, 1);
  CHECK(static_cast<double>(cls.fraction[sliver]) ==
        doctest::Approx(static_cast<double>(f)).epsilon(1e-13));
}

TEST_CASE("classify: degenerate domain throws") {
  TrimmedDomain d;
  d.dim = 2;
  d.box_lo = {0, 0};
  d.box_hi = {1, 1};
  d.positive = {};  // empty
  auto mesh = CartesianMesh::uniform(2, {0, 0}, {1, 1}, {2, 2});
  CHECK_THROWS_AS(classify(mesh, d), DegenerateDomain);
}

TEST_CASE("cut_quadrature: uncut tensor rule is polynomially exact") {
  TrimmedDomain d;
  d.dim = 2;
  d.positive = {unit_square()};
  d.box_lo = {0, 0};
  d.box_hi = {1, 1};
  auto mesh = CartesianMesh::uniform(2, {0, 0}, {1, 1}, {2, 2});
  const int q = 3;
  auto rule = cut_quadrature(mesh, mesh.flat(1, 1), d, q, 10, 1e-12L);
  for (int a = 0; a + 0 <= 2 * q - 1; ++a)
    for (int b = 0; a + b <= 2 * q - 1; ++b) {
      Real s = 0;
      for (size_t i = 0; i < rule.pts.size(); ++i)
        s += rule.w[i] * std::pow(rule.pts[i][0], Real(a)) *
             std::pow(rule.pts[i][1], Real(b));
      // element [0.5,1]^2: integral of x^a y^b
      Real exact = (std::pow(Real(1), a + 1) - std::pow(Real(0.5L), a + 1)) /
                   (a + 1) *
                   (std::pow(Real(1), b + 1) - std::pow(Real(0.5L), b + 1)) /
                   (b + 1);
      CHECK(std::abs(static_cast<double>(s - exact)) < 1e-16);
    }
}

TEST_CASE("cut_quadrature: half-plane through edge midpoints gives |T|/2") {
  TrimmedDomain d;
  d.dim = 2;
  d.box_lo = {0, 0};
  d.box_hi = {1, 1};
  // diagonal cut through (0.5, 0) and (1, 0.5) on element [0,1]^2 scaled
  ConvexPolygon poly{{{0, 0}, {0.5L, 0}, {1, 0.5L}, {1, 1}, {0, 1}}};
  d.positive = {poly};
  auto mesh = CartesianMesh::uniform(2, {0, 0}, {1, 1}, {1, 1});
  auto rule = cut_quadrature(mesh, 0, d, 3, 10, 1e-12L);
  Real s = 0;
  for (Real w : rule.w) s += w;
  CHECK(static_cast<double>(s) == doctest::Approx(0.875).epsilon(1e-14));
  for (const auto& pt : rule.pts) CHECK(d.membership(pt));
  for (Real w : rule.w) CHECK(w > 0);
}

TEST_CASE("cut_quadrature: quarter disk via quadtree") {
  TrimmedDomain d;
  d.dim = 2;
  d.box_lo = {0, 0};
  d.box_hi = {1, 1};
  d.positive = {unit_square()};
  d.negative = {Disk{{0, 0}, 0.6L}};  // retain the outside of the disk
  auto mesh = CartesianMesh::uniform(2, {0, 0}, {1, 1}, {1, 1});
  auto rule = cut_quadrature(mesh, 0, d, 3, 10, 1e-10L);
  Real s = 0;
  for (Real w : rule.w) s += w;
  const Real exact = 1 - static_cast<Real>(M_PI) * 0.36L / 4;
  CHECK(std::abs(static_cast<double>(s - exact)) < 1e-10);
  for (const auto& pt : rule.pts) CHECK(d.membership(pt));
}

TEST_CASE("additivity: catalog geometries match analytic areas") {
  for (const auto& [name, delta] :
       std::vector<std::pair<std::string, Real>>{{"trimmed_line", 1e-3L},
                                                 {"stretched_square", 1e-3L},
                                                 {"ridge", 1e-3L},
                                                 {"two_ridges", 1e-3L},
                                                 {"three_ridges", 1e-3L},
                                                 {"square_with_hole", 1e-3L},
                                                 {"slot_plate", 1e-3L},
                                                 {"waveguide", 1e-3L}}) {
    CatalogParams p;
    p.delta = delta;
    if (name == "ridge") p.variant = "decentered";
    if (name == "two_ridges") p.variant = "Cmax";
    auto g = catalog(name, p);
    auto cls = classify(g.mesh, g.domain);
    Real total = 0;
    for (Real m : cls.active_measure) total += m;
    REQUIRE(g.domain.analytic_area.has_value());
    CHECK(std::abs(static_cast<double>(total - *g.domain.analytic_area)) <
          1e-11);
  }
}

TEST_CASE("monotonicity: shrinking delta never increases eta") {
  for (const std::string name :
       {"trimmed_line", "stretched_square", "ridge", "slot_plate"}) {
    Real prev_eta = 2;
    for (Real delta : {3e-3L, 1e-3L, 3e-4L, 1e-4L}) {
      CatalogParams p;
      p.delta = delta;
      if (name == "ridge") p.variant = "corner";
      auto g = catalog(name, p);
      auto cls = classify(g.mesh, g.domain);
      CHECK(cls.eta <= prev_eta * (1 + 1e-12L));
      prev_eta = cls.eta;
    }
  }
}

TEST_CASE("classification/quadrature consistency") {
  CatalogParams p;
  p.delta = 2e-3L;
  p.subdivisions = 16;
  auto g = catalog("square_with_hole", p);
  auto cls = classify(g.mesh, g.domain);
  auto quad = build_quadrature(g.mesh, g.domain, cls, 3);
  for (Index e = 0; e < g.mesh.total_elements(); ++e) {
    if (!cls.is_active(e)) continue;
    Real s = 0;
    for (Real w : quad.rules[e].w) s += w;
    CHECK(std::abs(static_cast<double>(s - cls.active_measure[e])) <= 1e-12);
    const Real vol = g.mesh.volume(e);
    if (cls.status[e] == ElementStatus::Cut) {
      CHECK(s > 0);
      CHECK(s < vol * (1 - 1e-13L));
    }
  }
}

TEST_CASE("active_support_measure") {
  CatalogParams p;
  p.delta = 1e-3L;
  p.subdivisions = 16;
  auto g = catalog("trimmed_line", p);
  auto cls = classify(g.mesh, g.domain);
  // all-inside box
  SupportBox inside_box{{0, 0}, {3, 0}};
  auto [supp0, cut0] = active_support_measure(inside_box, g.mesh, cls);
  CHECK(static_cast<double>(supp0) == doctest::Approx(4.0 / 16));
  CHECK(static_cast<double>(cut0) == doctest::Approx(0.0));
  // the cut element alone: supp = delta, cut region = h
  SupportBox cut_box{{12, 0}, {12, 0}};
  auto [supp1, cut1] = active_support_measure(cut_box, g.mesh, cls);
  CHECK(static_cast<double>(supp1) ==
        doctest::Approx(static_cast<double>(p.delta)).epsilon(1e-13));
  CHECK(static_cast<double>(cut1) == doctest::Approx(1.0 / 16));
}

TEST_CASE("domain serialization round trip") {
  CatalogParams p;
  p.delta = 1e-3L;
  auto g = catalog("slot_plate", p);
  std::string text = serialize_domain(g.domain);
  TrimmedDomain d2 = parse_domain(text);
  CHECK(d2.positive.size() == g.domain.positive.size());
  CHECK(d2.negative.size() == g.domain.negative.size());
  // membership agrees on a grid of probe points
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      Pt x{(i + 0.5L) / 20, (j + 0.5L) / 20};
      CHECK(g.domain.membership(x) == d2.membership(x));
    }
}

TEST_CASE("slot_plate arc centers on grid nodes at h=1/56") {
  CatalogParams p;
  p.delta = 1e-3L;
  auto g = catalog("slot_plate", p);
  CHECK(static_cast<double>(0.5L / g.h) == doctest::Approx(28.0));
  CHECK(static_cast<double>(0.25L / g.h) == doctest::Approx(14.0));
  const Disk& d = std::get<Disk>(g.domain.negative[0]);
  CHECK(static_cast<double>(d.r) ==
        doctest::Approx(static_cast<double>(std::sqrt(5.0L) * g.h - p.delta)));
}

TEST_CASE("trimmed_line delta=h/2 gives one cut element with eta=1/2") {
  CatalogParams p;
  p.subdivisions = 16;
  p.delta = Real(1) / 32;  // h/2
  auto g = catalog("trimmed_line", p);
  auto cls = classify(g.mesh, g.domain);
  CHECK(cls.n_cut == 1);
  CHECK(static_cast<double>(cls.eta) == doctest::Approx(0.5));
}
