#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "trimcond/basis.hpp"
#include "trimcond/types.hpp"

namespace trimcond {

using Pt = std::array<Real, 2>;

// Classification tolerances. An element is Inside/Outside when its volume
// fraction is within kClassifyTol of 1/0; active regions below kSliverFloor
// (relative) are reclassified Outside.
inline constexpr Real kClassifyTol = 1e-12L;
inline constexpr Real kSliverFloor = 1e-14L;

struct Disk {
  Pt c;
  Real r;
};

struct ConvexPolygon {
  std::vector<Pt> pts;  // counter-clockwise
  Real area() const;
};

/// Intersection of a convex polygon and an axis-aligned rectangle.
ConvexPolygon clip_rect(const ConvexPolygon& poly, Pt lo, Pt hi);

/// Half-plane clip n.x <= c, the Sutherland-Hodgman primitive step.
ConvexPolygon clip_halfplane(const ConvexPolygon& poly, Pt n, Real c);

/// Exact area of polygon ∩ disk via per-edge circular-segment decomposition.
Real circle_polygon_area(const ConvexPolygon& poly, const Disk& d);

using NegativePrimitive = std::variant<Disk, ConvexPolygon>;

// Trimmed physical domain inside a fictitious box. The membership tree is
// kept in the normal form
//     Ω = (⊔ positive pieces) \ (∪ negative primitives),
// positive pieces with pairwise disjoint interiors. Negative primitives may
// overlap each other pairwise in disk/polygon combinations (handled by
// inclusion-exclusion); disk/disk overlaps are rejected.
struct TrimmedDomain {
  int dim = 2;
  Pt box_lo{0, 0}, box_hi{1, 1};

  std::vector<std::array<Real, 2>> intervals;  // 1D positive parts
  std::vector<ConvexPolygon> positive;         // 2D positive pieces
  std::vector<NegativePrimitive> negative;

  std::optional<Real> analytic_area;  // hint for additivity checks

  bool membership(Pt x) const;
  /// Exact measure of Ω ∩ [lo,hi] (length in 1D, area in 2D).
  Real measure_box(Pt lo, Pt hi) const;
  Real box_measure() const;
};

std::string serialize_domain(const TrimmedDomain& d);
TrimmedDomain parse_domain(const std::string& text);

struct CartesianMesh {
  int dim = 2;
  std::array<std::vector<Real>, 2> breakpoints;

  int ne(int d) const { return static_cast<int>(breakpoints[d].size()) - 1; }
  Index total_elements() const {
    return dim == 1 ? ne(0) : static_cast<Index>(ne(0)) * ne(1);
  }
  Index flat(int ex, int ey = 0) const {
    return dim == 1 ? ex : static_cast<Index>(ex) * ne(1) + ey;
  }
  std::array<int, 2> multi(Index e) const {
    if (dim == 1) return {static_cast<int>(e), 0};
    return {static_cast<int>(e / ne(1)), static_cast<int>(e % ne(1))};
  }
  void bounds(Index e, Pt& lo, Pt& hi) const;
  Real volume(Index e) const;

  static CartesianMesh uniform(int dim, Pt lo, Pt hi, std::array<int, 2> n);
};

enum class ElementStatus { Outside, Inside, Cut };

struct CutClassification {
  std::vector<ElementStatus> status;
  std::vector<Real> active_measure;  // |T ∩ Ω|
  std::vector<Real> fraction;        // |T ∩ Ω| / |T|
  Real eta = 1;                      // smallest positive fraction
  Index n_inside = 0, n_cut = 0;

  bool is_active(Index e) const { return status[e] != ElementStatus::Outside; }
};

/// Classifies every background element against the domain. Sampling is a
/// cheap prefilter; the decision uses the exact clipped measure.
CutClassification classify(const CartesianMesh& mesh, const TrimmedDomain& domain,
                           int samples_per_axis = 4);

struct ElementRule {
  std::vector<Pt> pts;
  std::vector<Real> w;
  Real measure = 0;           // Σw, equals |T ∩ Ω| by construction
  Real boundary_unresolved = 0;  // mass in partially resolved leaves
};

/// Quadrature on one Inside/Cut element. Purely polygonal trims are clipped
/// exactly (rect rules or Duffy rules on a fan triangulation); elements
/// touching a curved or subtracted primitive use quadtree refinement with
/// exact leaf measures.
ElementRule cut_quadrature(const CartesianMesh& mesh, Index e,
                           const TrimmedDomain& domain, int gauss_order,
                           int max_depth, Real area_tol);

struct CutQuadrature {
  int gauss_order = 3;
  int max_depth = 12;
  Real area_tol = 1e-9L;
  std::vector<ElementRule> rules;  // indexed by flat element id
  Real achieved_area_error = 0;
};

CutQuadrature build_quadrature(const CartesianMesh& mesh,
                               const TrimmedDomain& domain,
                               const CutClassification& cls, int gauss_order,
                               int max_depth = 12, Real area_tol = 1e-9L);

/// Measure of supp(φ) ∩ Ω and of the local cut region Ω_i (full-element
/// measure of the cut elements inside the support box).
std::pair<Real, Real> active_support_measure(const SupportBox& box,
                                             const CartesianMesh& mesh,
                                             const CutClassification& cls);

}  // namespace trimcond
