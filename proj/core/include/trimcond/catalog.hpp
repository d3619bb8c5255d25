#pragma once

#include <string>

#include "trimcond/geometry.hpp"

namespace trimcond {

struct CatalogParams {
  Real delta = 1e-2L;
  int subdivisions = 0;   // 0 = geometry default
  Real angle = 0.35L;     // square_with_hole outer-square rotation
  unsigned seed = 1;      // ridge_perturbed
  int n_spikes = 6;       // waveguide
  std::string variant;    // ridge: corner|centered|decentered; two_ridges: C0|Cmax
};

struct CatalogGeometry {
  std::string name;
  CatalogParams params;
  TrimmedDomain domain;
  CartesianMesh mesh;
  Real h = 0;  // reference element size
};

/// Reconstructible-by-name geometries:
///   trimmed_line(delta)          1D line (0, 0.75+delta) on [0,1]
///   stretched_square(delta)      square of side 0.5+delta in the unit box
///   ridge(variant, delta)        house-like pentagon, tip delta above a grid line
///   ridge_perturbed(delta, seed) corner ridge on jittered vertical grid lines
///   two_ridges(variant, delta)   roof split into two tents (C0: h apart, Cmax: 3h)
///   three_ridges(delta)          three tents 3h apart
///   square_with_hole(delta,angle) rotated square, hole radius sqrt(5)h-delta
///   slot_plate(delta)            plate with a slot of two arcs + segments
///   waveguide(delta, n_spikes)   slab with spikes descending to 2h-delta depth
CatalogGeometry catalog(const std::string& name, const CatalogParams& p);

std::vector<std::string> catalog_names();
std::string catalog_describe(const std::string& name);

}  // namespace trimcond
