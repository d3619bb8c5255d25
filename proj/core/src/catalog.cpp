#include "trimcond/catalog.hpp"

#include <cmath>
#include <random>

namespace trimcond {

namespace {

ConvexPolygon rect(Real x0, Real y0, Real x1, Real y1) {
  return ConvexPolygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

void require(bool cond, const std::string& what) {
  if (!cond) throw ParameterOutOfRange(what);
}

CatalogGeometry trimmed_line(const CatalogParams& p) {
  CatalogGeometry g;
  const int n = p.subdivisions > 0 ? p.subdivisions : 128;
  require(n >= 4, "trimmed_line needs >= 4 subdivisions");
  g.h = Real(1) / n;
  require(p.delta > 0 && p.delta < 0.25L, "trimmed_line delta in (0, 0.25)");
  g.mesh = CartesianMesh::uniform(1, {0, 0}, {1, 0}, {n, 1});
  g.domain.dim = 1;
  g.domain.box_lo = {0, 0};
  g.domain.box_hi = {1, 0};
  g.domain.intervals = {{0, 0.75L + p.delta}};
  g.domain.analytic_area = 0.75L + p.delta;
  return g;
}

CatalogGeometry stretched_square(const CatalogParams& p) {
  CatalogGeometry g;
  const int n = p.subdivisions > 0 ? p.subdivisions : 8;
  require(n >= 4 && n % 2 == 0, "stretched_square needs an even mesh");
  g.h = Real(1) / n;
  require(p.delta > 0 && p.delta < g.h, "stretched_square delta in (0, h)");
  g.mesh = CartesianMesh::uniform(2, {0, 0}, {1, 1}, {n, n});
  g.domain.dim = 2;
  g.domain.box_lo = {0, 0};
  g.domain.box_hi = {1, 1};
  const Real s = 0.5L + p.delta;
  g.domain.positive = {rect(0, 0, s, s)};
  g.domain.analytic_area = s * s;
  return g;
}

CatalogGeometry ridge_like(const CatalogParams& p, Real tip_offset_in_h,
                           const char* name) {
  CatalogGeometry g;
  const int n = p.subdivisions > 0 ? p.subdivisions : 8;
  require(n >= 8 && n % 2 == 0, std::string(name) + " needs an even mesh >= 8");
  g.h = Real(1) / n;
  require(p.delta > 0 && p.delta < 0.45L * g.h,
          std::string(name) + " delta in (0, 0.45h)");
  g.mesh = CartesianMesh::uniform(2, {0, 0}, {1, 1}, {n, n});
  g.domain.dim = 2;
  g.domain.box_lo = {0, 0};
  g.domain.box_hi = {1, 1};

  const Real h = g.h;
  const Real xa = 0.5L + tip_offset_in_h * h;
  const Real ya = 0.5L + p.delta;  // tip pokes delta above the mid grid line
  const Real xl = h, xr = 1 - h;
  const Real yel = ya - (xa - xl);  // slope-1 roof
  const Real yer = ya - (xr - xa);
  ConvexPolygon house;
  house.pts = {{xl, 0}, {xr, 0}, {xr, yer}, {xa, ya}, {xl, yel}};
  g.domain.positive = {house};
  // shoelace of the pentagon
  g.domain.analytic_area = house.area();
  return g;
}

CatalogGeometry ridge(const CatalogParams& p) {
  Real off;
  if (p.variant == "corner" || p.variant.empty())
    off = 0;
  else if (p.variant == "centered")
    off = 0.5L;
  else if (p.variant == "decentered")
    off = 1.0L / 6;
  else
    throw ParameterOutOfRange("ridge variant " + p.variant);
  return ridge_like(p, off, "ridge");
}

CatalogGeometry ridge_perturbed(const CatalogParams& p) {
  CatalogGeometry g = ridge_like(p, 0, "ridge_perturbed");
  // Jitter the interior vertical grid lines. The magnitude is bounded away
  // from zero so roof-line crossings keep a positive distance from element
  // corners, and from 0.25h so the lines stay ordered.
  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> mag(0.05, 0.22);
  std::bernoulli_distribution sign(0.5);
  auto& bx = g.mesh.breakpoints[0];
  for (size_t i = 1; i + 1 < bx.size(); ++i) {
    Real u = static_cast<Real>(mag(rng)) * (sign(rng) ? 1 : -1);
    bx[i] += u * g.h;
  }
  return g;
}

CatalogGeometry multi_ridge(const CatalogParams& p, int n_tips,
                            const std::string& variant) {
  CatalogGeometry g;
  const int ny = 6, base_nx = n_tips == 2 ? 10 : 12;
  require(p.subdivisions == 0, "multi-ridge meshes are fixed-size");
  const int nx = base_nx;
  g.h = Real(0.75L) / ny;  // = 1/8
  g.mesh = CartesianMesh::uniform(2, {0, 0}, {nx * g.h, ny * g.h}, {nx, ny});
  require(p.delta > 0 && p.delta < 0.45L * g.h, "delta in (0, 0.45h)");
  g.domain.dim = 2;
  g.domain.box_lo = {0, 0};
  g.domain.box_hi = {nx * g.h, ny * g.h};

  const Real h = g.h;
  const Real yt = 4 * h;  // tips poke delta above this grid line
  Real w;                 // tent half-width (slope 1)
  std::vector<Real> centers;
  if (n_tips == 2) {
    if (variant == "C0") {
      w = 0.5L * h;
      centers = {4.5L * h, 5.5L * h};
    } else if (variant == "Cmax" || variant.empty()) {
      w = 1.5L * h;
      centers = {3.5L * h, 6.5L * h};
    } else {
      throw ParameterOutOfRange("two_ridges variant " + variant);
    }
  } else {
    w = 1.5L * h;
    centers = {3.5L * h, 6.5L * h, 9.5L * h};
  }
  const Real ybase = yt + p.delta - w;  // tent bases sit on the body top
  const Real xl = h, xr = (n_tips == 2 ? 9 : 11) * h;
  g.domain.positive.push_back(rect(xl, 0, xr, ybase));
  Real area = (xr - xl) * ybase;
  for (Real c : centers) {
    ConvexPolygon tent;
    tent.pts = {{c - w, ybase}, {c + w, ybase}, {c, yt + p.delta}};
    g.domain.positive.push_back(tent);
    area += w * w;  // base 2w, height w
  }
  g.domain.analytic_area = area;
  return g;
}

CatalogGeometry square_with_hole(const CatalogParams& p) {
  CatalogGeometry g;
  const int n = p.subdivisions > 0 ? p.subdivisions : 16;
  require(n >= 12 && n % 2 == 0, "square_with_hole needs an even mesh >= 12");
  g.h = Real(1) / n;
  require(p.delta > 0 && p.delta < 0.5L * g.h, "delta in (0, h/2)");
  g.mesh = CartesianMesh::uniform(2, {0, 0}, {1, 1}, {n, n});
  g.domain.dim = 2;
  g.domain.box_lo = {0, 0};
  g.domain.box_hi = {1, 1};

  const Real r = std::sqrt(Real(5)) * g.h - p.delta;
  const Real side = 0.66L;
  const Real ca = std::cos(p.angle), sa = std::sin(p.angle);
  ConvexPolygon sq;
  for (auto [ux, uy] : {std::pair<Real, Real>{-1, -1},
                        {1, -1},
                        {1, 1},
                        {-1, 1}}) {
    Real x = ux * side / 2, y = uy * side / 2;
    sq.pts.push_back({0.5L + ca * x - sa * y, 0.5L + sa * x + ca * y});
  }
  g.domain.positive = {sq};
  g.domain.negative = {Disk{{0.5L, 0.5L}, r}};
  g.domain.analytic_area = side * side - static_cast<Real>(M_PI) * r * r;
  return g;
}

CatalogGeometry slot_plate(const CatalogParams& p) {
  CatalogGeometry g;
  const int n = p.subdivisions > 0 ? p.subdivisions : 56;
  require(n >= 16 && n % 4 == 0, "slot_plate mesh must be a multiple of 4");
  g.h = Real(1) / n;
  require(p.delta > 0 && p.delta < 0.5L * g.h, "delta in (0, h/2)");
  g.mesh = CartesianMesh::uniform(2, {0, 0}, {1, 1}, {n, n});
  g.domain.dim = 2;
  g.domain.box_lo = {0, 0};
  g.domain.box_hi = {1, 1};

  const Real r = std::sqrt(Real(5)) * g.h - p.delta;
  g.domain.positive = {rect(0, 0, 1, 1)};
  g.domain.negative = {Disk{{0.5L, 0.25L}, r}, Disk{{0.5L, 0.75L}, r},
                       rect(0.5L - r, 0.25L, 0.5L + r, 0.75L)};
  g.domain.analytic_area =
      1 - (static_cast<Real>(M_PI) * r * r + 2 * r * 0.5L);
  return g;
}

CatalogGeometry waveguide(const CatalogParams& p) {
  CatalogGeometry g;
  require(p.subdivisions == 0, "waveguide mesh is fixed at 48x32");
  const int nx = 48, ny = 32;
  g.h = Real(1) / ny;
  require(p.delta > 0 && p.delta < 0.4L * g.h, "delta in (0, 0.4h)");
  require(p.n_spikes >= 1 && p.n_spikes <= 10, "n_spikes in [1, 10]");
  g.mesh = CartesianMesh::uniform(2, {0, 0}, {1.5L, 1}, {nx, ny});
  g.domain.dim = 2;
  g.domain.box_lo = {0, 0};
  g.domain.box_hi = {1.5L, 1};

  const Real h = g.h;
  const Real slab_lo = 12 * h, slab_hi = 28 * h;
  g.domain.positive.push_back(rect(0, slab_lo, 1.5L, slab_hi));
  Real area = 1.5L * (slab_hi - slab_lo);
  // Spikes descend from the slab bottom; tips are squares of side ~delta
  // centered within an element, poking delta below the 10h grid line.
  const Real ytip = 10 * h - p.delta;
  for (int i = 0; i < p.n_spikes; ++i) {
    const Real c = (15.5L + 3 * i) * h;
    const Real wtop = h + p.delta;  // half-width at the slab (side slope 2)
    ConvexPolygon spike;
    spike.pts = {{c - p.delta / 2, ytip},
                 {c + p.delta / 2, ytip},
                 {c + wtop, slab_lo},
                 {c - wtop, slab_lo}};
    g.domain.positive.push_back(spike);
    area += (p.delta + 2 * wtop) / 2 * (slab_lo - ytip);
  }
  g.domain.analytic_area = area;
  return g;
}

}  // namespace

CatalogGeometry catalog(const std::string& name, const CatalogParams& p) {
  CatalogGeometry g;
  if (name == "trimmed_line")
    g = trimmed_line(p);
  else if (name == "stretched_square")
    g = stretched_square(p);
  else if (name == "ridge")
    g = ridge(p);
  else if (name == "ridge_perturbed")
    g = ridge_perturbed(p);
  else if (name == "two_ridges")
    g = multi_ridge(p, 2, p.variant);
  else if (name == "three_ridges")
    g = multi_ridge(p, 3, "Cmax");
  else if (name == "square_with_hole")
    g = square_with_hole(p);
  else if (name == "slot_plate")
    g = slot_plate(p);
  else if (name == "waveguide")
    g = waveguide(p);
  else
    throw UnknownGeometry(name);
  g.name = name;
  g.params = p;
  return g;
}

std::vector<std::string> catalog_names() {
  return {"trimmed_line", "stretched_square",  "ridge",
          "ridge_perturbed", "two_ridges",     "three_ridges",
          "square_with_hole", "slot_plate",    "waveguide"};
}

std::string catalog_describe(const std::string& name) {
  if (name == "trimmed_line")
    return "1D line (0, 0.75+delta) on a uniform unit mesh (default 128)";
  if (name == "stretched_square")
    return "square of side 0.5+delta with its corner at the origin (mesh 8x8)";
  if (name == "ridge")
    return "house pentagon; variant corner|centered|decentered places the tip "
           "on a grid line, at an element center, or at x+h/6 (mesh 8x8)";
  if (name == "ridge_perturbed")
    return "corner ridge with seeded jitter of the vertical grid lines";
  if (name == "two_ridges")
    return "roof split into two tents; variant C0 (tips h apart) or Cmax (3h)";
  if (name == "three_ridges")
    return "three tents 3h apart on a 12x6 mesh";
  if (name == "square_with_hole")
    return "rotated square (angle) with a hole of radius sqrt(5)h-delta "
           "centered at a grid vertex (mesh 16x16)";
  if (name == "slot_plate")
    return "unit plate minus a slot of two arcs (radius sqrt(5)h-delta) "
           "joined by vertical segments (default mesh 56x56)";
  if (name == "waveguide")
    return "1.5x1 slab with n_spikes descending spikes, tips delta past a "
           "grid line (mesh 48x32)";
  throw UnknownGeometry(name);
}

}  // namespace trimcond
