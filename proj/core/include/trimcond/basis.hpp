#pragma once

#include <array>
#include <utility>
#include <vector>

#include "trimcond/types.hpp"

namespace trimcond {

inline constexpr int kMaxDegree = 6;

enum class BasisKind { Lagrange, BSpline };
enum class NodeRule { Equispaced, GaussLobatto };

/// Gauss-Legendre rule with q points on [0,1]. Cached per q.
void gauss_legendre(int q, std::vector<Real>& nodes, std::vector<Real>& weights);

/// p+1 Gauss-Lobatto points on [0,1] (endpoints included).
std::vector<Real> gauss_lobatto_nodes(int p);

struct BasisSpec {
  BasisKind kind = BasisKind::BSpline;
  std::array<int, 2> degree = {2, 2};
  std::array<int, 2> continuity = {1, 1};  // BSpline only; Lagrange is C^0
  NodeRule node_rule = NodeRule::Equispaced;

  void validate(int dim) const;
};

struct KnotVector {
  std::vector<Real> values;  // non-decreasing, open
  int degree = 0;

  Index num_functions() const {
    return static_cast<Index>(values.size()) - degree - 1;
  }
};

/// Open knot vector with interior multiplicity p-k over the given breakpoints.
/// Basis dimension is Ns*(p-k) + k + 1.
KnotVector build_knot_vector(int p, const std::vector<Real>& breakpoints, int k);

/// Evaluates the p+1 B-splines that may be nonzero at x (triangular
/// recurrence). Returns the index of the first of them. deriv in {0,1}.
Index bspline_eval(const KnotVector& kv, Real x, int deriv,
                   std::array<Real, kMaxDegree + 1>& values);

/// Lagrange polynomials on an element for the given interpolation nodes.
void lagrange_eval(Real elem_lo, Real elem_hi, const std::vector<Real>& nodes,
                   Real x, int deriv, std::array<Real, kMaxDegree + 1>& values);

// Univariate basis over a 1D breakpoint mesh. Both kinds share the same
// index layout: the first function on element e is e*m with m = p-k for
// B-splines and m = p for Lagrange.
class UnivariateBasis {
 public:
  static UnivariateBasis lagrange(int p, std::vector<Real> breakpoints,
                                  NodeRule rule);
  static UnivariateBasis bspline(int p, std::vector<Real> breakpoints, int k);

  BasisKind kind() const { return kind_; }
  int degree() const { return p_; }
  int continuity() const { return k_; }
  int multiplicity() const { return m_; }
  Index dim() const { return dim_; }
  int num_elements() const { return static_cast<int>(breakpoints_.size()) - 1; }
  const std::vector<Real>& breakpoints() const { return breakpoints_; }
  const KnotVector& knots() const { return knots_; }

  int element_of(Real x) const;
  Index first_on_element(int e) const { return static_cast<Index>(e) * m_; }

  /// Inclusive element range on which function i is not identically zero.
  std::pair<int, int> support(Index i) const;

  /// Values (or first derivatives) of the p+1 functions active at x.
  /// Returns the global index of the first one.
  Index eval(Real x, int deriv, std::array<Real, kMaxDegree + 1>& values) const;

  /// Lagrange only: coordinate of the interpolation node owned by function i.
  Real node_coordinate(Index i) const;

 private:
  BasisKind kind_;
  int p_ = 0, k_ = 0, m_ = 0;
  Index dim_ = 0;
  std::vector<Real> breakpoints_;
  KnotVector knots_;                // BSpline
  std::vector<Real> ref_nodes_;     // Lagrange, on [0,1]
};

struct SupportBox {
  std::array<int, 2> lo = {0, 0};
  std::array<int, 2> hi = {0, 0};  // inclusive
};

// Tensor-product basis; 1D or 2D. Flat index is x-major: f = i1*ny + i2.
class TensorBasis {
 public:
  TensorBasis() = default;
  TensorBasis(int dim, UnivariateBasis bx);
  TensorBasis(int dim, UnivariateBasis bx, UnivariateBasis by);

  int dim() const { return dim_; }
  const UnivariateBasis& uni(int d) const { return uni_[d]; }
  Index total() const { return total_; }

  Index flat(Index i1, Index i2 = 0) const {
    return dim_ == 1 ? i1 : i1 * uni_[1].dim() + i2;
  }
  std::array<Index, 2> multi(Index f) const {
    if (dim_ == 1) return {f, 0};
    return {f / uni_[1].dim(), f % uni_[1].dim()};
  }
  SupportBox support(Index f) const;

 private:
  int dim_ = 1;
  std::array<UnivariateBasis, 2> uni_;
  Index total_ = 0;
};

/// Tensor basis from a spec and per-direction breakpoints.
TensorBasis build_tensor_basis(const BasisSpec& spec,
                               const std::vector<std::vector<Real>>& mesh);

/// Collocation matrix of the C^0 B-spline (Bernstein) basis at the Lagrange
/// interpolation nodes of `lagr`, so that Lagrange Gram matrices are
/// congruent to Bernstein ones without forming the inverse explicitly.
Mat bernstein_collocation(const TensorBasis& lagr);

}  // namespace trimcond
