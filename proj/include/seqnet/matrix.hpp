#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace seqnet {

// Minimal dense row-major matrix, usable with double and Rational scalars.
// Heavy double-precision work (LU, eigenvalues) converts to Eigen internally;
// this type exists so the certificate path can run in exact arithmetic.
template <typename T>
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, T(0)) {}

  static Mat identity(int n) {
    Mat id(n, n);
    for (int i = 0; i < n; ++i) id(i, i) = T(1);
    return id;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  T& operator()(int i, int j) {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return a_[static_cast<size_t>(i) * cols_ + j];
  }
  const T& operator()(int i, int j) const {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return a_[static_cast<size_t>(i) * cols_ + j];
  }

  friend bool operator==(const Mat& a, const Mat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> a_;
};

template <typename T>
Mat<T> matmul(const Mat<T>& a, const Mat<T>& b) {
  assert(a.cols() == b.rows());
  Mat<T> c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const T& aik = a(i, k);
      if (aik == T(0)) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

template <typename T>
std::vector<T> matvec(const Mat<T>& a, const std::vector<T>& x) {
  assert(a.cols() == static_cast<int>(x.size()));
  std::vector<T> y(a.rows(), T(0));
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

// D A D^{-1} for diagonal D given by d.
template <typename T>
Mat<T> diagonal_similarity(const Mat<T>& a, const std::vector<T>& d) {
  assert(a.rows() == a.cols() && a.rows() == static_cast<int>(d.size()));
  Mat<T> b(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) b(i, j) = d[i] * a(i, j) / d[j];
  return b;
}

}  // namespace seqnet
