#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace scgg {

// Dense row-major matrix. Row vectors are modeled as 1 x C matrices.
template <typename Real>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), d_(static_cast<std::size_t>(rows) * cols, Real(0)) {}

  static Matrix filled(int rows, int cols, Real v) {
    Matrix m(rows, cols);
    m.fill(v);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return d_.size(); }
  bool empty() const { return d_.empty(); }

  Real& operator()(int i, int j) { return d_[static_cast<std::size_t>(i) * cols_ + j]; }
  Real operator()(int i, int j) const { return d_[static_cast<std::size_t>(i) * cols_ + j]; }

  Real* row(int i) { return d_.data() + static_cast<std::size_t>(i) * cols_; }
  const Real* row(int i) const { return d_.data() + static_cast<std::size_t>(i) * cols_; }

  Real* data() { return d_.data(); }
  const Real* data() const { return d_.data(); }

  void fill(Real v) { d_.assign(d_.size(), v); }

  bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  Matrix& operator+=(const Matrix& o) {
    assert(same_shape(o));
    for (std::size_t i = 0; i < d_.size(); ++i) d_[i] += o.d_[i];
    return *this;
  }

  bool all_finite() const {
    for (Real v : d_)
      if (!std::isfinite(static_cast<double>(v))) return false;
    return true;
  }

  bool operator==(const Matrix&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Real> d_;
};

// C += A * B
template <typename Real>
void mm_acc(Matrix<Real>& c, const Matrix<Real>& a, const Matrix<Real>& b) {
  assert(a.cols() == b.rows() && c.rows() == a.rows() && c.cols() == b.cols());
  const int n = a.rows(), k = a.cols(), m = b.cols();
  for (int i = 0; i < n; ++i) {
    Real* ci = c.row(i);
    const Real* ai = a.row(i);
    for (int p = 0; p < k; ++p) {
      const Real av = ai[p];
      if (av == Real(0)) continue;
      const Real* bp = b.row(p);
      for (int j = 0; j < m; ++j) ci[j] += av * bp[j];
    }
  }
}

// C += A * B^T
template <typename Real>
void mm_nt_acc(Matrix<Real>& c, const Matrix<Real>& a, const Matrix<Real>& b) {
  assert(a.cols() == b.cols() && c.rows() == a.rows() && c.cols() == b.rows());
  const int n = a.rows(), k = a.cols(), m = b.rows();
  for (int i = 0; i < n; ++i) {
    const Real* ai = a.row(i);
    Real* ci = c.row(i);
    for (int j = 0; j < m; ++j) {
      const Real* bj = b.row(j);
      Real acc(0);
      for (int p = 0; p < k; ++p) acc += ai[p] * bj[p];
      ci[j] += acc;
    }
  }
}

// C += A^T * B
template <typename Real>
void mm_tn_acc(Matrix<Real>& c, const Matrix<Real>& a, const Matrix<Real>& b) {
  assert(a.rows() == b.rows() && c.rows() == a.cols() && c.cols() == b.cols());
  const int n = a.rows(), k = a.cols(), m = b.cols();
  for (int p = 0; p < n; ++p) {
    const Real* ap = a.row(p);
    const Real* bp = b.row(p);
    for (int i = 0; i < k; ++i) {
      const Real av = ap[i];
      if (av == Real(0)) continue;
      Real* ci = c.row(i);
      for (int j = 0; j < m; ++j) ci[j] += av * bp[j];
    }
  }
}

template <typename Real>
Matrix<Real> matmul(const Matrix<Real>& a, const Matrix<Real>& b) {
  Matrix<Real> c(a.rows(), b.cols());
  mm_acc(c, a, b);
  return c;
}

template <typename Real>
Matrix<Real> matmul_nt(const Matrix<Real>& a, const Matrix<Real>& b) {
  Matrix<Real> c(a.rows(), b.rows());
  mm_nt_acc(c, a, b);
  return c;
}

}  // namespace scgg
