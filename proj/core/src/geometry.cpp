#include "trimcond/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace trimcond {

namespace {

Real cross(Pt a, Pt b) { return a[0] * b[1] - a[1] * b[0]; }

Pt sub(Pt a, Pt b) { return {a[0] - b[0], a[1] - b[1]}; }

}  // namespace

Real ConvexPolygon::area() const {
  Real a = 0;
  const size_t n = pts.size();
  for (size_t i = 0; i < n; ++i) a += cross(pts[i], pts[(i + 1) % n]);
  return a / 2;
}

ConvexPolygon clip_halfplane(const ConvexPolygon& poly, Pt n, Real c) {
  ConvexPolygon out;
  const size_t np = poly.pts.size();
  if (np == 0) return out;
  out.pts.reserve(np + 1);
  for (size_t i = 0; i < np; ++i) {
    Pt a = poly.pts[i], b = poly.pts[(i + 1) % np];
    Real da = n[0] * a[0] + n[1] * a[1] - c;
    Real db = n[0] * b[0] + n[1] * b[1] - c;
    if (da <= 0) out.pts.push_back(a);
    if ((da < 0 && db > 0) || (da > 0 && db < 0)) {
      Real t = da / (da - db);
      out.pts.push_back({a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])});
    }
  }
  return out;
}

ConvexPolygon clip_rect(const ConvexPolygon& poly, Pt lo, Pt hi) {
  ConvexPolygon r = clip_halfplane(poly, {-1, 0}, -lo[0]);
  r = clip_halfplane(r, {1, 0}, hi[0]);
  r = clip_halfplane(r, {0, -1}, -lo[1]);
  r = clip_halfplane(r, {0, 1}, hi[1]);
  return r;
}

namespace {

// Signed area of triangle(0, A, B) ∩ disk(0, r); summing over the edges of a
// ccw polygon (with vertices translated by -center) gives |polygon ∩ disk|.
Real edge_disk_area(Pt A, Pt B, Real r) {
  // Split [A,B] at its circle crossings.
  Pt d = sub(B, A);
  Real a = d[0] * d[0] + d[1] * d[1];
  std::array<Real, 4> ts;
  int nt = 0;
  ts[nt++] = 0;
  if (a > 0) {
    Real b = 2 * (A[0] * d[0] + A[1] * d[1]);
    Real c = A[0] * A[0] + A[1] * A[1] - r * r;
    Real disc = b * b - 4 * a * c;
    if (disc > 0) {
      Real sq = std::sqrt(disc);
      Real t1 = (-b - sq) / (2 * a), t2 = (-b + sq) / (2 * a);
      if (t1 > 0 && t1 < 1) ts[nt++] = t1;
      if (t2 > 0 && t2 < 1) ts[nt++] = t2;
    }
  }
  ts[nt++] = 1;
  Real total = 0;
  for (int i = 0; i + 1 < nt; ++i) {
    Pt P{A[0] + ts[i] * d[0], A[1] + ts[i] * d[1]};
    Pt Q{A[0] + ts[i + 1] * d[0], A[1] + ts[i + 1] * d[1]};
    Pt M{(P[0] + Q[0]) / 2, (P[1] + Q[1]) / 2};
    if (M[0] * M[0] + M[1] * M[1] <= r * r) {
      total += cross(P, Q) / 2;  // chord inside: plain triangle
    } else {
      Real ang = std::atan2(cross(P, Q), P[0] * Q[0] + P[1] * Q[1]);
      total += r * r * ang / 2;  // circular sector
    }
  }
  return total;
}

}  // namespace

Real circle_polygon_area(const ConvexPolygon& poly, const Disk& disk) {
  const size_t n = poly.pts.size();
  if (n < 3) return 0;
  Real area = 0;
  for (size_t i = 0; i < n; ++i) {
    Pt A = sub(poly.pts[i], disk.c);
    Pt B = sub(poly.pts[(i + 1) % n], disk.c);
    area += edge_disk_area(A, B, disk.r);
  }
  return std::max<Real>(0, area);
}

namespace {

bool in_disk(Pt x, const Disk& d) {
  Real dx = x[0] - d.c[0], dy = x[1] - d.c[1];
  return dx * dx + dy * dy <= d.r * d.r;
}

bool in_polygon(Pt x, const ConvexPolygon& p) {
  const size_t n = p.pts.size();
  for (size_t i = 0; i < n; ++i) {
    Pt a = p.pts[i], b = p.pts[(i + 1) % n];
    if (cross(sub(b, a), sub(x, a)) < 0) return false;
  }
  return n >= 3;
}

bool in_negative(Pt x, const NegativePrimitive& n) {
  if (std::holds_alternative<Disk>(n)) return in_disk(x, std::get<Disk>(n));
  return in_polygon(x, std::get<ConvexPolygon>(n));
}

ConvexPolygon rect_polygon(Pt lo, Pt hi) {
  return ConvexPolygon{{{lo[0], lo[1]}, {hi[0], lo[1]}, {hi[0], hi[1]}, {lo[0], hi[1]}}};
}

Real piece_neg_area(const ConvexPolygon& piece, const NegativePrimitive& n) {
  if (std::holds_alternative<Disk>(n))
    return circle_polygon_area(piece, std::get<Disk>(n));
  const auto& q = std::get<ConvexPolygon>(n);
  ConvexPolygon r = piece;
  const size_t m = q.pts.size();
  for (size_t i = 0; i < m && !r.pts.empty(); ++i) {
    Pt a = q.pts[i], b = q.pts[(i + 1) % m];
    Pt nv{-(b[1] - a[1]), b[0] - a[0]};  // inward normal flipped to <= form
    r = clip_halfplane(r, {-nv[0], -nv[1]}, -(nv[0] * a[0] + nv[1] * a[1]));
  }
  return r.pts.size() >= 3 ? r.area() : 0;
}

// |piece ∩ na ∩ nb| for pairwise-overlapping negatives (disk/polygon mixes).
Real piece_neg_pair_area(const ConvexPolygon& piece, const NegativePrimitive& na,
                         const NegativePrimitive& nb) {
  const bool da = std::holds_alternative<Disk>(na);
  const bool db = std::holds_alternative<Disk>(nb);
  if (da && db) {
    const Disk& A = std::get<Disk>(na);
    const Disk& B = std::get<Disk>(nb);
    Real dx = A.c[0] - B.c[0], dy = A.c[1] - B.c[1];
    if (std::sqrt(dx * dx + dy * dy) >= A.r + B.r) return 0;
    throw Error("overlapping disk/disk negatives are not supported");
  }
  if (!da && !db) {
    // polygon ∩ polygon: clip chain
    ConvexPolygon r = piece;
    for (const auto* q : {&std::get<ConvexPolygon>(na), &std::get<ConvexPolygon>(nb)}) {
      const size_t m = q->pts.size();
      for (size_t i = 0; i < m && !r.pts.empty(); ++i) {
        Pt a = q->pts[i], b = q->pts[(i + 1) % m];
        Pt nv{-(b[1] - a[1]), b[0] - a[0]};
        r = clip_halfplane(r, {-nv[0], -nv[1]}, -(nv[0] * a[0] + nv[1] * a[1]));
      }
    }
    return r.pts.size() >= 3 ? r.area() : 0;
  }
  const Disk& d = std::get<Disk>(da ? na : nb);
  const ConvexPolygon& q = std::get<ConvexPolygon>(da ? nb : na);
  ConvexPolygon r = piece;
  const size_t m = q.pts.size();
  for (size_t i = 0; i < m && !r.pts.empty(); ++i) {
    Pt a = q.pts[i], b = q.pts[(i + 1) % m];
    Pt nv{-(b[1] - a[1]), b[0] - a[0]};
    r = clip_halfplane(r, {-nv[0], -nv[1]}, -(nv[0] * a[0] + nv[1] * a[1]));
  }
  return r.pts.size() >= 3 ? circle_polygon_area(r, d) : 0;
}

}  // namespace

bool TrimmedDomain::membership(Pt x) const {
  if (dim == 1) {
    for (const auto& iv : intervals)
      if (x[0] >= iv[0] && x[0] <= iv[1]) return true;
    return false;
  }
  bool pos = false;
  for (const auto& p : positive)
    if (in_polygon(x, p)) {
      pos = true;
      break;
    }
  if (!pos) return false;
  for (const auto& n : negative)
    if (in_negative(x, n)) return false;
  return true;
}

Real TrimmedDomain::measure_box(Pt lo, Pt hi) const {
  if (dim == 1) {
    Real m = 0;
    for (const auto& iv : intervals)
      m += std::max<Real>(0, std::min(hi[0], iv[1]) - std::max(lo[0], iv[0]));
    return m;
  }
  Real m = 0;
  for (const auto& p : positive) {
    ConvexPolygon piece = clip_rect(p, lo, hi);
    if (piece.pts.size() < 3) continue;
    Real mp = piece.area();
    for (const auto& n : negative) mp -= piece_neg_area(piece, n);
    for (size_t a = 0; a < negative.size(); ++a)
      for (size_t b = a + 1; b < negative.size(); ++b)
        mp += piece_neg_pair_area(piece, negative[a], negative[b]);
    m += std::max<Real>(0, mp);
  }
  return m;
}

Real TrimmedDomain::box_measure() const {
  if (dim == 1) return box_hi[0] - box_lo[0];
  return (box_hi[0] - box_lo[0]) * (box_hi[1] - box_lo[1]);
}

void CartesianMesh::bounds(Index e, Pt& lo, Pt& hi) const {
  auto m = multi(e);
  lo = {breakpoints[0][m[0]], 0};
  hi = {breakpoints[0][m[0] + 1], 0};
  if (dim == 2) {
    lo[1] = breakpoints[1][m[1]];
    hi[1] = breakpoints[1][m[1] + 1];
  }
}

Real CartesianMesh::volume(Index e) const {
  Pt lo, hi;
  bounds(e, lo, hi);
  Real v = hi[0] - lo[0];
  if (dim == 2) v *= hi[1] - lo[1];
  return v;
}

CartesianMesh CartesianMesh::uniform(int dim, Pt lo, Pt hi, std::array<int, 2> n) {
  CartesianMesh m;
  m.dim = dim;
  for (int d = 0; d < dim; ++d) {
    m.breakpoints[d].resize(n[d] + 1);
    for (int i = 0; i <= n[d]; ++i)
      m.breakpoints[d][i] = lo[d] + (hi[d] - lo[d]) * Real(i) / n[d];
  }
  return m;
}

CutClassification classify(const CartesianMesh& mesh, const TrimmedDomain& domain,
                           int samples_per_axis) {
  const Index ne = mesh.total_elements();
  CutClassification cls;
  cls.status.resize(ne);
  cls.active_measure.resize(ne);
  cls.fraction.resize(ne);
  const int s = std::max(2, samples_per_axis);

  // Bounding boxes of the positive pieces: elements outside all of them are
  // Outside without touching the exact measure.
  std::vector<std::array<Pt, 2>> bboxes;
  for (const auto& p : domain.positive) {
    Pt blo = p.pts.empty() ? Pt{0, 0} : p.pts[0], bhi = blo;
    for (const auto& v : p.pts) {
      blo[0] = std::min(blo[0], v[0]);
      blo[1] = std::min(blo[1], v[1]);
      bhi[0] = std::max(bhi[0], v[0]);
      bhi[1] = std::max(bhi[1], v[1]);
    }
    bboxes.push_back({blo, bhi});
  }

  for (Index e = 0; e < ne; ++e) {
    Pt lo, hi;
    mesh.bounds(e, lo, hi);
    const Real vol = mesh.volume(e);

    if (mesh.dim == 2 && !bboxes.empty()) {
      bool overlap = false;
      for (const auto& bb : bboxes)
        if (!(hi[0] < bb[0][0] || lo[0] > bb[1][0] || hi[1] < bb[0][1] ||
              lo[1] > bb[1][1])) {
          overlap = true;
          break;
        }
      if (!overlap) {
        cls.status[e] = ElementStatus::Outside;
        continue;
      }
    }

    // Corner/sample vote picks the likely status; the exact clipped measure
    // below confirms it either way.
    int member_samples = 0;
    const int sy = mesh.dim == 2 ? s : 1;
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < sy; ++j) {
        Pt x{lo[0] + (hi[0] - lo[0]) * (i + Real(0.5)) / s,
             mesh.dim == 2 ? lo[1] + (hi[1] - lo[1]) * (j + Real(0.5)) / sy : 0};
        member_samples += domain.membership(x) ? 1 : 0;
      }
    (void)member_samples;

    Real m = domain.measure_box(lo, hi);
    m = std::min(m, vol);
    Real f = m / vol;
    if (f >= 1 - kClassifyTol) {
      cls.status[e] = ElementStatus::Inside;
      cls.active_measure[e] = vol;
      cls.fraction[e] = 1;
    } else if (f <= kClassifyTol || m <= kSliverFloor * domain.box_measure()) {
      cls.status[e] = ElementStatus::Outside;
      cls.active_measure[e] = 0;
      cls.fraction[e] = 0;
    } else {
      cls.status[e] = ElementStatus::Cut;
      cls.active_measure[e] = m;
      cls.fraction[e] = f;
    }
  }

  cls.eta = 1;
  bool any = false;
  for (Index e = 0; e < ne; ++e) {
    if (cls.fraction[e] > 0) {
      cls.eta = std::min(cls.eta, cls.fraction[e]);
      any = true;
    }
    if (cls.status[e] == ElementStatus::Inside) ++cls.n_inside;
    if (cls.status[e] == ElementStatus::Cut) ++cls.n_cut;
  }
  if (!any) throw DegenerateDomain("no element has positive measure");
  return cls;
}

namespace {

void tensor_gauss(Pt lo, Pt hi, int dim, int q, ElementRule& rule) {
  std::vector<Real> gn, gw;
  gauss_legendre(q, gn, gw);
  if (dim == 1) {
    Real len = hi[0] - lo[0];
    for (int i = 0; i < q; ++i) {
      rule.pts.push_back({lo[0] + gn[i] * len, 0});
      rule.w.push_back(gw[i] * len);
    }
    return;
  }
  Real lx = hi[0] - lo[0], ly = hi[1] - lo[1];
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      rule.pts.push_back({lo[0] + gn[i] * lx, lo[1] + gn[j] * ly});
      rule.w.push_back(gw[i] * gw[j] * lx * ly);
    }
}

// Collapsed-quad (Duffy) tensor rule on a triangle; the map Jacobian is
// u * |cross(v1-v0, v2-v0)|, so q points per direction integrate total
// degree 2q-2 exactly with positive weights and interior points.
void triangle_gauss(Pt v0, Pt v1, Pt v2, int q, ElementRule& rule) {
  std::vector<Real> gn, gw;
  gauss_legendre(q, gn, gw);
  const Real a2 = std::abs(cross(sub(v1, v0), sub(v2, v0)));
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      Real u = gn[i], v = gn[j];
      Pt x{v0[0] + u * (v1[0] - v0[0]) + u * v * (v2[0] - v1[0]),
           v0[1] + u * (v1[1] - v0[1]) + u * v * (v2[1] - v1[1])};
      rule.pts.push_back(x);
      rule.w.push_back(gw[i] * gw[j] * u * a2);
    }
}

bool is_axis_rect(const ConvexPolygon& p, Pt& lo, Pt& hi) {
  if (p.pts.size() != 4) return false;
  Real x0 = p.pts[0][0], x1 = x0, y0 = p.pts[0][1], y1 = y0;
  for (const auto& q : p.pts) {
    x0 = std::min(x0, q[0]);
    x1 = std::max(x1, q[0]);
    y0 = std::min(y0, q[1]);
    y1 = std::max(y1, q[1]);
  }
  for (const auto& q : p.pts) {
    bool on_x = (q[0] == x0 || q[0] == x1);
    bool on_y = (q[1] == y0 || q[1] == y1);
    if (!on_x || !on_y) return false;
  }
  lo = {x0, y0};
  hi = {x1, y1};
  return true;
}

void polygon_rule(const ConvexPolygon& piece, int q, ElementRule& rule) {
  if (piece.pts.size() < 3 || piece.area() <= 0) return;
  Pt rlo, rhi;
  if (is_axis_rect(piece, rlo, rhi)) {
    tensor_gauss(rlo, rhi, 2, q, rule);
    return;
  }
  Pt c{0, 0};
  for (const auto& p : piece.pts) {
    c[0] += p[0];
    c[1] += p[1];
  }
  c[0] /= piece.pts.size();
  c[1] /= piece.pts.size();
  // Doubled order on the fan: the Duffy Jacobian raises the u-degree, and
  // 2q points keep the element rule exact for the same integrands as the
  // q-point tensor rule on rectangles.
  const size_t n = piece.pts.size();
  for (size_t i = 0; i < n; ++i)
    triangle_gauss(c, piece.pts[i], piece.pts[(i + 1) % n], 2 * q, rule);
}

bool touches_negative(const TrimmedDomain& dom, Pt lo, Pt hi) {
  ConvexPolygon cell = rect_polygon(lo, hi);
  for (const auto& n : dom.negative) {
    if (std::holds_alternative<Disk>(n)) {
      const Disk& d = std::get<Disk>(n);
      // bbox prefilter then exact area
      if (hi[0] < d.c[0] - d.r || lo[0] > d.c[0] + d.r || hi[1] < d.c[1] - d.r ||
          lo[1] > d.c[1] + d.r)
        continue;
      Real a = circle_polygon_area(cell, d);
      if (a > 0 && a < cell.area()) return true;
      if (a >= cell.area()) return true;  // cell inside the hole
    } else {
      Real a = piece_neg_area(cell, n);
      if (a > 0) return true;
    }
  }
  return false;
}

struct QuadtreeBuilder {
  const TrimmedDomain& dom;
  int q;
  int max_depth;
  ElementRule& rule;

  void recurse(Pt lo, Pt hi, int depth) {
    Real vol = (hi[0] - lo[0]) * (hi[1] - lo[1]);
    Real m = dom.measure_box(lo, hi);
    m = std::min(m, vol);
    if (m <= kSliverFloor * vol) return;
    if (m >= vol * (1 - 1e-14L)) {
      tensor_gauss(lo, hi, 2, q, rule);
      return;
    }
    if (depth < max_depth) {
      Pt mid{(lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2};
      recurse(lo, mid, depth + 1);
      recurse({mid[0], lo[1]}, {hi[0], mid[1]}, depth + 1);
      recurse({lo[0], mid[1]}, {mid[0], hi[1]}, depth + 1);
      recurse(mid, hi, depth + 1);
      return;
    }
    // Partially covered leaf at depth limit: distribute the exact active
    // mass over the member Gauss points.
    std::vector<Real> gn, gw;
    gauss_legendre(q, gn, gw);
    std::vector<Pt> members;
    std::vector<Real> mw;
    Real wsum = 0;
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) {
        Pt x{lo[0] + gn[i] * (hi[0] - lo[0]), lo[1] + gn[j] * (hi[1] - lo[1])};
        if (dom.membership(x)) {
          members.push_back(x);
          mw.push_back(gw[i] * gw[j]);
          wsum += gw[i] * gw[j];
        }
      }
    for (int s : {8, 32, 128}) {
      if (!members.empty()) break;
      for (int i = 0; i < s && members.empty(); ++i)
        for (int j = 0; j < s; ++j) {
          Pt x{lo[0] + (hi[0] - lo[0]) * (i + Real(0.5)) / s,
               lo[1] + (hi[1] - lo[1]) * (j + Real(0.5)) / s};
          if (dom.membership(x)) {
            members.push_back(x);
            mw.push_back(1);
            wsum = 1;
            break;
          }
        }
    }
    if (members.empty()) {
      // No representative point found: the active mass of this leaf is lost,
      // which is the real area error of the rule.
      rule.boundary_unresolved += m;
      return;
    }
    for (size_t i = 0; i < members.size(); ++i) {
      rule.pts.push_back(members[i]);
      rule.w.push_back(m * mw[i] / wsum);
    }
  }
};

}  // namespace

ElementRule cut_quadrature(const CartesianMesh& mesh, Index e,
                           const TrimmedDomain& domain, int gauss_order,
                           int max_depth, Real area_tol) {
  ElementRule rule;
  Pt lo, hi;
  mesh.bounds(e, lo, hi);
  const Real vol = mesh.volume(e);
  Real m = std::min(domain.measure_box(lo, hi), vol);
  rule.measure = m;
  if (m <= kSliverFloor * domain.box_measure()) {
    rule.measure = 0;
    return rule;
  }

  if (mesh.dim == 1) {
    for (const auto& iv : domain.intervals) {
      Real a = std::max(lo[0], iv[0]), b = std::min(hi[0], iv[1]);
      if (b > a) tensor_gauss({a, 0}, {b, 0}, 1, gauss_order, rule);
    }
    return rule;
  }

  if (m >= vol * (1 - kClassifyTol)) {
    tensor_gauss(lo, hi, 2, gauss_order, rule);
    return rule;
  }

  if (!touches_negative(domain, lo, hi)) {
    // Exact clipping path: each positive piece restricted to the element is
    // convex; rect pieces get tensor rules, the rest a Duffy fan.
    for (const auto& p : domain.positive) {
      ConvexPolygon piece = clip_rect(p, lo, hi);
      if (piece.pts.size() < 3) continue;
      polygon_rule(piece, gauss_order, rule);
    }
    return rule;
  }

  QuadtreeBuilder builder{domain, gauss_order, max_depth, rule};
  builder.recurse(lo, hi, 0);
  if (rule.boundary_unresolved > area_tol)
    throw DepthExceeded("achieved area error " +
                        std::to_string(static_cast<double>(rule.boundary_unresolved)));
  return rule;
}

CutQuadrature build_quadrature(const CartesianMesh& mesh,
                               const TrimmedDomain& domain,
                               const CutClassification& cls, int gauss_order,
                               int max_depth, Real area_tol) {
  CutQuadrature q;
  q.gauss_order = gauss_order;
  q.max_depth = max_depth;
  q.area_tol = area_tol;
  q.rules.resize(mesh.total_elements());
  for (Index e = 0; e < mesh.total_elements(); ++e) {
    if (!cls.is_active(e)) continue;
    q.rules[e] = cut_quadrature(mesh, e, domain, gauss_order, max_depth, area_tol);
    q.achieved_area_error =
        std::max(q.achieved_area_error, q.rules[e].boundary_unresolved);
  }
  return q;
}

std::pair<Real, Real> active_support_measure(const SupportBox& box,
                                             const CartesianMesh& mesh,
                                             const CutClassification& cls) {
  Real supp = 0, cut_region = 0;
  if (mesh.dim == 1) {
    for (int ex = box.lo[0]; ex <= box.hi[0]; ++ex) {
      Index e = mesh.flat(ex);
      supp += cls.active_measure[e];
      if (cls.status[e] == ElementStatus::Cut) cut_region += mesh.volume(e);
    }
    return {supp, cut_region};
  }
  for (int ex = box.lo[0]; ex <= box.hi[0]; ++ex)
    for (int ey = box.lo[1]; ey <= box.hi[1]; ++ey) {
      Index e = mesh.flat(ex, ey);
      supp += cls.active_measure[e];
      if (cls.status[e] == ElementStatus::Cut) cut_region += mesh.volume(e);
    }
  return {supp, cut_region};
}

// --- serialization ---------------------------------------------------------

namespace {
using nlohmann::json;

json pt_json(Pt p, int dim) {
  json j = json::array();
  j.push_back(static_cast<double>(p[0]));
  if (dim == 2) j.push_back(static_cast<double>(p[1]));
  return j;
}
}  // namespace

std::string serialize_domain(const TrimmedDomain& d) {
  json j;
  j["dim"] = d.dim;
  j["box"] = {pt_json(d.box_lo, d.dim), pt_json(d.box_hi, d.dim)};
  if (d.dim == 1) {
    json iv = json::array();
    for (const auto& i : d.intervals)
      iv.push_back({static_cast<double>(i[0]), static_cast<double>(i[1])});
    j["intervals"] = iv;
  } else {
    json pos = json::array();
    for (const auto& p : d.positive) {
      json poly = json::array();
      for (const auto& v : p.pts) poly.push_back(pt_json(v, 2));
      pos.push_back({{"polygon", poly}});
    }
    j["positive"] = pos;
    json neg = json::array();
    for (const auto& n : d.negative) {
      if (std::holds_alternative<Disk>(n)) {
        const Disk& disk = std::get<Disk>(n);
        neg.push_back({{"disk", {{"center", pt_json(disk.c, 2)},
                                 {"radius", static_cast<double>(disk.r)}}}});
      } else {
        json poly = json::array();
        for (const auto& v : std::get<ConvexPolygon>(n).pts)
          poly.push_back(pt_json(v, 2));
        neg.push_back({{"polygon", poly}});
      }
    }
    j["negative"] = neg;
  }
  if (d.analytic_area)
    j["analytic_area"] = static_cast<double>(*d.analytic_area);
  return j.dump(2);
}

TrimmedDomain parse_domain(const std::string& text) {
  json j = json::parse(text);
  TrimmedDomain d;
  d.dim = j.at("dim").get<int>();
  auto box = j.at("box");
  d.box_lo = {Real(box[0][0].get<double>()),
              d.dim == 2 ? Real(box[0][1].get<double>()) : 0};
  d.box_hi = {Real(box[1][0].get<double>()),
              d.dim == 2 ? Real(box[1][1].get<double>()) : 0};
  if (d.dim == 1) {
    for (const auto& iv : j.at("intervals"))
      d.intervals.push_back({Real(iv[0].get<double>()), Real(iv[1].get<double>())});
  } else {
    for (const auto& p : j.at("positive")) {
      ConvexPolygon poly;
      for (const auto& v : p.at("polygon"))
        poly.pts.push_back({Real(v[0].get<double>()), Real(v[1].get<double>())});
      d.positive.push_back(std::move(poly));
    }
    if (j.contains("negative")) {
      for (const auto& n : j.at("negative")) {
        if (n.contains("disk")) {
          Disk disk;
          disk.c = {Real(n["disk"]["center"][0].get<double>()),
                    Real(n["disk"]["center"][1].get<double>())};
          disk.r = Real(n["disk"]["radius"].get<double>());
          d.negative.push_back(disk);
        } else {
          ConvexPolygon poly;
          for (const auto& v : n.at("polygon"))
            poly.pts.push_back({Real(v[0].get<double>()), Real(v[1].get<double>())});
          d.negative.push_back(std::move(poly));
        }
      }
    }
  }
  if (j.contains("analytic_area"))
    d.analytic_area = Real(j["analytic_area"].get<double>());
  return d;
}

}  // namespace trimcond
