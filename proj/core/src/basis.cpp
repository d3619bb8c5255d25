#include "trimcond/basis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace trimcond {

namespace {

Index div_floor(Index a, Index b) {
  Index q = a / b, r = a % b;
  return (r != 0 && (r < 0) != (b < 0)) ? q - 1 : q;
}
Index div_ceil(Index a, Index b) { return -div_floor(-a, b); }

// Legendre P_n and P_n' at x via the three-term recurrence.
void legendre(int n, Real x, Real& pn, Real& dpn) {
  Real p0 = 1, p1 = x;
  if (n == 0) {
    pn = 1;
    dpn = 0;
    return;
  }
  for (int j = 2; j <= n; ++j) {
    Real p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  pn = p1;
  dpn = n * (x * p1 - p0) / (x * x - 1);
}

}  // namespace

void gauss_legendre(int q, std::vector<Real>& nodes, std::vector<Real>& weights) {
  static std::map<int, std::pair<std::vector<Real>, std::vector<Real>>> cache;
  static std::mutex mtx;
  {
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(q);
    if (it != cache.end()) {
      nodes = it->second.first;
      weights = it->second.second;
      return;
    }
  }
  std::vector<Real> x(q), w(q);
  for (int i = 0; i < q; ++i) {
    Real xi = std::cos(M_PI * (i + 0.75L) / (q + 0.5L));
    for (int it = 0; it < 100; ++it) {
      Real pn, dpn;
      legendre(q, xi, pn, dpn);
      Real dx = pn / dpn;
      xi -= dx;
      if (std::abs(dx) < 1e-19L) break;
    }
    Real pn, dpn;
    legendre(q, xi, pn, dpn);
    x[q - 1 - i] = (1 + xi) / 2;                       // map to [0,1], ascending
    w[q - 1 - i] = 1 / ((1 - xi * xi) * dpn * dpn);    // 2/((1-x^2)P'^2) / 2
  }
  {
    std::lock_guard<std::mutex> lock(mtx);
    cache[q] = {x, w};
  }
  nodes = x;
  weights = w;
}

std::vector<Real> gauss_lobatto_nodes(int p) {
  // p+1 points: endpoints plus the roots of P_p'.
  std::vector<Real> out(p + 1);
  out.front() = 0;
  out.back() = 1;
  for (int i = 1; i < p; ++i) {
    // Chebyshev-Lobatto start, Newton on P_p'.
    Real xi = std::cos(M_PI * i / p);
    for (int it = 0; it < 100; ++it) {
      Real pn, dpn;
      legendre(p, xi, pn, dpn);
      // d/dx P_p' from the Legendre ODE: (1-x^2)P'' = 2xP' - p(p+1)P
      Real ddpn = (2 * xi * dpn - p * (p + 1) * pn) / (1 - xi * xi);
      Real dx = dpn / ddpn;
      xi -= dx;
      if (std::abs(dx) < 1e-19L) break;
    }
    out[p - i] = (1 + xi) / 2;
  }
  std::sort(out.begin(), out.end());
  return out;
}

void BasisSpec::validate(int dim) const {
  for (int d = 0; d < dim; ++d) {
    int p = degree[d];
    if (p < 1 || p > kMaxDegree)
      throw ParameterOutOfRange("degree " + std::to_string(p));
    if (kind == BasisKind::BSpline) {
      int k = continuity[d];
      if (k < 0 || k > p - 1)
        throw InvalidContinuity("k=" + std::to_string(k) +
                                " for p=" + std::to_string(p));
    }
  }
}

KnotVector build_knot_vector(int p, const std::vector<Real>& breakpoints, int k) {
  if (k < 0 || k > p - 1)
    throw InvalidContinuity("k=" + std::to_string(k) + ", p=" + std::to_string(p));
  if (breakpoints.size() < 2) throw NonMonotoneBreakpoints("need >= 2 breakpoints");
  for (size_t i = 1; i < breakpoints.size(); ++i)
    if (!(breakpoints[i - 1] < breakpoints[i]))
      throw NonMonotoneBreakpoints("breakpoints not strictly increasing");

  int m = p - k;
  KnotVector kv;
  kv.degree = p;
  kv.values.reserve((p + 1) * 2 + (breakpoints.size() - 2) * m);
  for (int i = 0; i <= p; ++i) kv.values.push_back(breakpoints.front());
  for (size_t b = 1; b + 1 < breakpoints.size(); ++b)
    for (int i = 0; i < m; ++i) kv.values.push_back(breakpoints[b]);
  for (int i = 0; i <= p; ++i) kv.values.push_back(breakpoints.back());
  return kv;
}

namespace {

Index find_span(const std::vector<Real>& t, int p, Index n, Real x) {
  if (x < t[p] || x > t[n]) throw OutOfDomain("x outside knot range");
  if (x >= t[n]) {
    Index s = n - 1;
    while (s > p && !(t[s] < t[s + 1])) --s;
    return s;
  }
  auto it = std::upper_bound(t.begin() + p, t.begin() + n + 1, x);
  return static_cast<Index>(it - t.begin()) - 1;
}

void basis_funs(const std::vector<Real>& t, int p, Index s, Real x,
                std::array<Real, kMaxDegree + 1>& N) {
  std::array<Real, kMaxDegree + 1> left{}, right{};
  N[0] = 1;
  for (int j = 1; j <= p; ++j) {
    left[j] = x - t[s + 1 - j];
    right[j] = t[s + j] - x;
    Real saved = 0;
    for (int r = 0; r < j; ++r) {
      Real temp = N[r] / (right[r + 1] + left[j - r]);
      N[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    N[j] = saved;
  }
}

}  // namespace

Index bspline_eval(const KnotVector& kv, Real x, int deriv,
                   std::array<Real, kMaxDegree + 1>& values) {
  const auto& t = kv.values;
  const int p = kv.degree;
  const Index n = kv.num_functions();
  const Index s = find_span(t, p, n, x);
  if (deriv == 0) {
    basis_funs(t, p, s, x, values);
  } else {
    // First derivative from the degree p-1 functions on the same span.
    values.fill(0);
    if (p == 0) return s - p;
    std::array<Real, kMaxDegree + 1> lower{};
    basis_funs(t, p - 1, s, x, lower);  // functions s-p+1 .. s of degree p-1
    for (int r = 0; r <= p; ++r) {
      Index i = s - p + r;
      Real a = 0, b = 0;
      if (r > 0 && t[i + p] > t[i]) a = lower[r - 1] / (t[i + p] - t[i]);
      if (r < p && t[i + p + 1] > t[i + 1]) b = lower[r] / (t[i + p + 1] - t[i + 1]);
      values[r] = p * (a - b);
    }
  }
  return s - p;
}

void lagrange_eval(Real elem_lo, Real elem_hi, const std::vector<Real>& nodes,
                   Real x, int deriv, std::array<Real, kMaxDegree + 1>& values) {
  const int np = static_cast<int>(nodes.size());
  if (x < elem_lo || x > elem_hi) throw OutOfDomain("x outside element");
  for (int i = 0; i < np; ++i)
    for (int j = i + 1; j < np; ++j)
      if (nodes[i] == nodes[j]) throw DuplicateNodes("coincident nodes");

  for (int i = 0; i < np; ++i) {
    if (deriv == 0) {
      Real v = 1;
      for (int j = 0; j < np; ++j)
        if (j != i) v *= (x - nodes[j]) / (nodes[i] - nodes[j]);
      values[i] = v;
    } else {
      Real sum = 0;
      for (int k = 0; k < np; ++k) {
        if (k == i) continue;
        Real term = 1 / (nodes[i] - nodes[k]);
        for (int j = 0; j < np; ++j)
          if (j != i && j != k) term *= (x - nodes[j]) / (nodes[i] - nodes[j]);
        sum += term;
      }
      values[i] = sum;
    }
  }
}

UnivariateBasis UnivariateBasis::lagrange(int p, std::vector<Real> breakpoints,
                                          NodeRule rule) {
  UnivariateBasis b;
  b.kind_ = BasisKind::Lagrange;
  b.p_ = p;
  b.k_ = 0;
  b.m_ = p;
  b.breakpoints_ = std::move(breakpoints);
  if (b.breakpoints_.size() < 2)
    throw NonMonotoneBreakpoints("need >= 2 breakpoints");
  for (size_t i = 1; i < b.breakpoints_.size(); ++i)
    if (!(b.breakpoints_[i - 1] < b.breakpoints_[i]))
      throw NonMonotoneBreakpoints("breakpoints not strictly increasing");
  b.dim_ = static_cast<Index>(b.num_elements()) * p + 1;
  if (rule == NodeRule::Equispaced) {
    b.ref_nodes_.resize(p + 1);
    for (int i = 0; i <= p; ++i) b.ref_nodes_[i] = Real(i) / p;
  } else {
    b.ref_nodes_ = gauss_lobatto_nodes(p);
  }
  return b;
}

UnivariateBasis UnivariateBasis::bspline(int p, std::vector<Real> breakpoints,
                                         int k) {
  UnivariateBasis b;
  b.kind_ = BasisKind::BSpline;
  b.p_ = p;
  b.k_ = k;
  b.m_ = p - k;
  b.knots_ = build_knot_vector(p, breakpoints, k);
  b.breakpoints_ = std::move(breakpoints);
  b.dim_ = b.knots_.num_functions();
  return b;
}

int UnivariateBasis::element_of(Real x) const {
  const auto& bp = breakpoints_;
  if (x < bp.front() || x > bp.back()) throw OutOfDomain("x outside mesh");
  auto it = std::upper_bound(bp.begin(), bp.end(), x);
  int e = static_cast<int>(it - bp.begin()) - 1;
  return std::min(e, num_elements() - 1);
}

std::pair<int, int> UnivariateBasis::support(Index i) const {
  int lo = static_cast<int>(std::max<Index>(0, div_ceil(i - p_, m_)));
  int hi = static_cast<int>(
      std::min<Index>(num_elements() - 1, div_floor(i, m_)));
  return {lo, hi};
}

Index UnivariateBasis::eval(Real x, int deriv,
                            std::array<Real, kMaxDegree + 1>& values) const {
  if (kind_ == BasisKind::BSpline) return bspline_eval(knots_, x, deriv, values);
  int e = element_of(x);
  Real lo = breakpoints_[e], hi = breakpoints_[e + 1];
  std::vector<Real> nodes(p_ + 1);
  for (int i = 0; i <= p_; ++i) nodes[i] = lo + ref_nodes_[i] * (hi - lo);
  lagrange_eval(lo, hi, nodes, x, deriv, values);
  return first_on_element(e);
}

Real UnivariateBasis::node_coordinate(Index i) const {
  if (kind_ != BasisKind::Lagrange)
    throw Error("node_coordinate is Lagrange-only");
  Index e = i / p_;
  int l = static_cast<int>(i % p_);
  if (e == num_elements()) return breakpoints_.back();
  Real lo = breakpoints_[e], hi = breakpoints_[e + 1];
  return lo + ref_nodes_[l] * (hi - lo);
}

TensorBasis::TensorBasis(int dim, UnivariateBasis bx) : dim_(dim) {
  uni_[0] = std::move(bx);
  total_ = uni_[0].dim();
}

TensorBasis::TensorBasis(int dim, UnivariateBasis bx, UnivariateBasis by)
    : dim_(dim) {
  uni_[0] = std::move(bx);
  uni_[1] = std::move(by);
  total_ = uni_[0].dim() * uni_[1].dim();
}

SupportBox TensorBasis::support(Index f) const {
  auto mi = multi(f);
  SupportBox box;
  for (int d = 0; d < dim_; ++d) {
    auto [lo, hi] = uni_[d].support(mi[d]);
    box.lo[d] = lo;
    box.hi[d] = hi;
  }
  return box;
}

TensorBasis build_tensor_basis(const BasisSpec& spec,
                               const std::vector<std::vector<Real>>& mesh) {
  const int dim = static_cast<int>(mesh.size());
  spec.validate(dim);
  auto make = [&](int d) {
    if (spec.kind == BasisKind::Lagrange)
      return UnivariateBasis::lagrange(spec.degree[d], mesh[d], spec.node_rule);
    return UnivariateBasis::bspline(spec.degree[d], mesh[d], spec.continuity[d]);
  };
  if (dim == 1) return TensorBasis(1, make(0));
  return TensorBasis(2, make(0), make(1));
}

namespace {

Mat collocation_1d(const UnivariateBasis& lag) {
  const Index n = lag.dim();
  UnivariateBasis bern =
      UnivariateBasis::bspline(lag.degree(), lag.breakpoints(), 0);
  if (bern.dim() != n) throw SingularCollocation("dimension mismatch");
  Mat A = Mat::Zero(n, n);
  std::array<Real, kMaxDegree + 1> vals{};
  for (Index r = 0; r < n; ++r) {
    Real x = lag.node_coordinate(r);
    Index first = bern.eval(x, 0, vals);
    for (int j = 0; j <= bern.degree(); ++j) {
      Index c = first + j;
      if (c >= 0 && c < n && vals[j] != 0) A(r, c) = vals[j];
    }
  }
  return A;
}

}  // namespace

Mat bernstein_collocation(const TensorBasis& lagr) {
  if (lagr.uni(0).kind() != BasisKind::Lagrange)
    throw Error("bernstein_collocation expects a Lagrange basis");
  Mat Ax = collocation_1d(lagr.uni(0));
  Mat A;
  if (lagr.dim() == 1) {
    A = Ax;
  } else {
    Mat Ay = collocation_1d(lagr.uni(1));
    const Index nx = Ax.rows(), ny = Ay.rows();
    A.resize(nx * ny, nx * ny);
    for (Index i1 = 0; i1 < nx; ++i1)
      for (Index i2 = 0; i2 < ny; ++i2)
        for (Index j1 = 0; j1 < nx; ++j1)
          for (Index j2 = 0; j2 < ny; ++j2)
            A(i1 * ny + i2, j1 * ny + j2) = Ax(i1, j1) * Ay(i2, j2);
  }
  // Rank check: the collocation matrix must be safely invertible.
  Eigen::PartialPivLU<Mat> lu(A);
  Real mind = std::numeric_limits<Real>::max();
  for (Index i = 0; i < A.rows(); ++i)
    mind = std::min(mind, std::abs(lu.matrixLU()(i, i)));
  if (!(mind > 1e-14L)) throw SingularCollocation("near-singular node placement");
  return A;
}

}  // namespace trimcond
