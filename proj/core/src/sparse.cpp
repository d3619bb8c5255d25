#include "trimcond/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace trimcond {

SymmetricSparseMatrix SymmetricSparseMatrix::from_triplets(
    Index n, std::vector<Triplet> ts) {
  for (auto& t : ts) {
    if (t.i > t.j) std::swap(t.i, t.j);
    if (t.i < 0 || t.j >= n) throw DimensionMismatch("triplet out of range");
  }
  std::stable_sort(ts.begin(), ts.end(), [](const Triplet& a, const Triplet& b) {
    return a.i < b.i || (a.i == b.i && a.j < b.j);
  });

  SymmetricSparseMatrix A;
  A.n_ = n;
  A.row_ptr_.assign(n + 1, 0);
  size_t k = 0;
  while (k < ts.size()) {
    size_t k2 = k;
    Real sum = 0;
    while (k2 < ts.size() && ts[k2].i == ts[k].i && ts[k2].j == ts[k].j)
      sum += ts[k2++].v;
    A.cols_.push_back(ts[k].j);
    A.vals_.push_back(sum);
    ++A.row_ptr_[ts[k].i + 1];
    k = k2;
  }
  for (Index i = 0; i < n; ++i) A.row_ptr_[i + 1] += A.row_ptr_[i];
  return A;
}

Real SymmetricSparseMatrix::diag(Index i) const { return coeff(i, i); }

Real SymmetricSparseMatrix::coeff(Index i, Index j) const {
  if (i > j) std::swap(i, j);
  auto lo = cols_.begin() + row_ptr_[i], hi = cols_.begin() + row_ptr_[i + 1];
  auto it = std::lower_bound(lo, hi, j);
  if (it == hi || *it != j) return 0;
  return vals_[it - cols_.begin()];
}

void SymmetricSparseMatrix::matvec(const Vec& x, Vec& y) const {
  if (x.size() != n_) throw DimensionMismatch("matvec size");
  y.setZero(n_);
  for (Index i = 0; i < n_; ++i) {
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const Index j = cols_[k];
      const Real v = vals_[k];
      y[i] += v * x[j];
      if (j != i) y[j] += v * x[i];
    }
  }
}

Mat SymmetricSparseMatrix::dense() const {
  Mat A = Mat::Zero(n_, n_);
  for_each_upper([&](Index i, Index j, Real v) {
    A(i, j) = v;
    A(j, i) = v;
  });
  return A;
}

Vec SymmetricSparseMatrix::diagonal() const {
  Vec d(n_);
  for (Index i = 0; i < n_; ++i) d[i] = diag(i);
  return d;
}

SymmetricSparseMatrix SymmetricSparseMatrix::scaled(const Vec& dinv,
                                                    bool force_unit_diag) const {
  SymmetricSparseMatrix A = *this;
  for (Index i = 0; i < n_; ++i)
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const Index j = cols_[k];
      A.vals_[k] = (force_unit_diag && i == j) ? 1 : vals_[k] * dinv[i] * dinv[j];
    }
  return A;
}

Vec SymmetricSparseMatrix::column(Index i) const {
  Vec c = Vec::Zero(n_);
  for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) c[cols_[k]] = vals_[k];
  for (Index r = 0; r < i; ++r) {
    auto lo = cols_.begin() + row_ptr_[r], hi = cols_.begin() + row_ptr_[r + 1];
    auto it = std::lower_bound(lo, hi, i);
    if (it != hi && *it == i) c[r] = vals_[it - cols_.begin()];
  }
  return c;
}

void SymmetricSparseMatrix::for_each_upper(
    const std::function<void(Index, Index, Real)>& f) const {
  for (Index i = 0; i < n_; ++i)
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      f(i, cols_[k], vals_[k]);
}

std::string SymmetricSparseMatrix::export_coordinate_text() const {
  std::ostringstream os;
  os << n_ << " " << n_ << " " << nnz_stored() << "\n";
  char buf[64];
  for_each_upper([&](Index i, Index j, Real v) {
    std::snprintf(buf, sizeof buf, "%lld %lld %.17g\n",
                  static_cast<long long>(i + 1), static_cast<long long>(j + 1),
                  static_cast<double>(v));
    os << buf;
  });
  return os.str();
}

SymmetricSparseMatrix combine(Real a1, const SymmetricSparseMatrix& M, Real a2,
                              const SymmetricSparseMatrix& K) {
  if (M.rows() != K.rows()) throw DimensionMismatch("combine");
  if (!(a1 >= 0 && a2 >= 0 && a1 + a2 > 0))
    throw ParameterOutOfRange("combine coefficients");
  std::vector<SymmetricSparseMatrix::Triplet> ts;
  M.for_each_upper([&](Index i, Index j, Real v) { ts.push_back({i, j, a1 * v}); });
  K.for_each_upper([&](Index i, Index j, Real v) { ts.push_back({i, j, a2 * v}); });
  return SymmetricSparseMatrix::from_triplets(M.rows(), std::move(ts));
}

}  // namespace trimcond
