#pragma once

#include <Eigen/Dense>

#include <random>
#include <span>
#include <vector>

#include "seqnet/matrix.hpp"

namespace testutil {

inline Eigen::MatrixXd to_eigen(const seqnet::Mat<double>& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  return m;
}

inline double lu_det(const seqnet::Mat<double>& a) {
  return to_eigen(a).partialPivLu().determinant();
}

inline double inf_norm(std::span<const double> v) {
  double best = 0;
  for (double x : v) best = std::max(best, std::abs(x));
  return best;
}

inline double max_abs(const seqnet::Mat<double>& a) {
  double best = 0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) best = std::max(best, std::abs(a(i, j)));
  return best;
}

// deterministic positives in [lo, hi]
struct Rng {
  std::mt19937_64 engine;
  explicit Rng(uint64_t seed) : engine(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * std::ldexp(static_cast<double>(engine() >> 11), -53);
  }
  std::vector<double> positives(int count, double lo = 0.2, double hi = 4.0) {
    std::vector<double> v(count);
    for (auto& x : v) x = uniform(lo, hi);
    return v;
  }
};

// Exact determinant by fraction-free-ish Gaussian elimination.
inline seqnet::Rational exact_det(seqnet::Mat<seqnet::Rational> a) {
  const int n = a.rows();
  seqnet::Rational det(1);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int i = col; i < n; ++i)
      if (a(i, col) != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) return seqnet::Rational(0);
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    for (int i = col + 1; i < n; ++i) {
      if (a(i, col) == 0) continue;
      seqnet::Rational f = a(i, col) / a(col, col);
      for (int j = col; j < n; ++j) a(i, j) -= f * a(col, j);
    }
  }
  return det;
}

// Central finite differences of a vector map.
template <typename Fn>
seqnet::Mat<double> fd_jacobian(const Fn& f, std::span<const double> x, double step_scale = 1e-6) {
  std::vector<double> base(x.begin(), x.end());
  const int n = static_cast<int>(base.size());
  std::vector<double> fp, fm;
  seqnet::Mat<double> J;
  for (int j = 0; j < n; ++j) {
    const double h = step_scale * std::max(1.0, std::abs(base[j]));
    std::vector<double> xp = base, xm = base;
    xp[j] += h;
    xm[j] -= h;
    fp = f(xp);
    fm = f(xm);
    if (J.rows() == 0) J = seqnet::Mat<double>(static_cast<int>(fp.size()), n);
    for (int i = 0; i < J.rows(); ++i) J(i, j) = (fp[i] - fm[i]) / (2 * h);
  }
  return J;
}

}  // namespace testutil
