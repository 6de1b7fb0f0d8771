#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "seqnet/stability.hpp"

// Dense nonsymmetric eigenvalues: Householder reduction to upper Hessenberg
// followed by Francis double-shift QR with deflation. Eigenvalues only; the
// transformations are applied within the active block. Eigenvectors come from
// complex inverse iteration on the original matrix.

namespace seqnet {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void hessenberg_reduce(Mat<double>& A) {
  const int n = A.rows();
  for (int k = 0; k + 2 < n; ++k) {
    double norm = 0;
    for (int i = k + 1; i < n; ++i) norm = std::hypot(norm, A(i, k));
    if (norm == 0.0) continue;
    const double alpha = A(k + 1, k) >= 0 ? -norm : norm;
    std::vector<double> v(n, 0.0);
    v[k + 1] = A(k + 1, k) - alpha;
    for (int i = k + 2; i < n; ++i) v[i] = A(i, k);
    double vnorm2 = 0;
    for (int i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == 0.0) continue;
    const double beta = 2.0 / vnorm2;
    // A <- P A, P = I - beta v v^T
    for (int j = k; j < n; ++j) {
      double dot = 0;
      for (int i = k + 1; i < n; ++i) dot += v[i] * A(i, j);
      dot *= beta;
      for (int i = k + 1; i < n; ++i) A(i, j) -= dot * v[i];
    }
    // A <- A P
    for (int i = 0; i < n; ++i) {
      double dot = 0;
      for (int j = k + 1; j < n; ++j) dot += A(i, j) * v[j];
      dot *= beta;
      for (int j = k + 1; j < n; ++j) A(i, j) -= dot * v[j];
    }
    A(k + 1, k) = alpha;
    for (int i = k + 2; i < n; ++i) A(i, k) = 0.0;
  }
}

void push_2x2_eigenvalues(double a, double b, double c, double d,
                          std::vector<std::complex<double>>& out) {
  const double tr = a + d;
  const double det = a * d - b * c;
  const double disc = 0.25 * tr * tr - det;
  if (disc >= 0) {
    const double root = std::sqrt(disc);
    double l1 = 0.5 * tr + (tr >= 0 ? root : -root);
    double l2 = (l1 != 0.0) ? det / l1 : 0.5 * tr - (tr >= 0 ? root : -root);
    out.emplace_back(l1, 0.0);
    out.emplace_back(l2, 0.0);
  } else {
    const double im = std::sqrt(-disc);
    out.emplace_back(0.5 * tr, im);
    out.emplace_back(0.5 * tr, -im);
  }
}

// One implicit double-shift sweep on the active block [l, u] (inclusive).
void francis_sweep(Mat<double>& H, int l, int u, bool exceptional) {
  double s, t;
  if (exceptional) {
    const double sv = std::abs(H(u, u - 1)) + std::abs(H(u - 1, u - 2));
    s = 1.5 * sv;
    t = -0.4375 * sv * sv;
  } else {
    s = H(u - 1, u - 1) + H(u, u);
    t = H(u - 1, u - 1) * H(u, u) - H(u - 1, u) * H(u, u - 1);
  }
  double x = H(l, l) * H(l, l) + H(l, l + 1) * H(l + 1, l) - s * H(l, l) + t;
  double y = H(l + 1, l) * (H(l, l) + H(l + 1, l + 1) - s);
  double z = H(l + 1, l) * H(l + 2, l + 1);

  for (int k = l; k <= u - 1; ++k) {
    // Householder annihilating (y, z) below x; at the last column the
    // reflector is 2-dimensional (z is absent).
    const bool last = k == u - 1;
    double v0 = x, v1 = y, v2 = last ? 0.0 : z;
    const double scale = std::abs(v0) + std::abs(v1) + std::abs(v2);
    if (scale != 0.0) {
      v0 /= scale;
      v1 /= scale;
      v2 /= scale;
      double norm = std::sqrt(v0 * v0 + v1 * v1 + v2 * v2);
      if (v0 < 0) norm = -norm;
      if (norm != 0.0) {
        v0 += norm;
        const double denom = norm * v0;
        // P = I - (1/denom) * v v^T with v = (v0, v1, v2)
        const int row_lo = k;
        const int row_hi = last ? k + 1 : k + 2;
        const int col_lo = std::max(l, k - 1);
        for (int j = col_lo; j <= u; ++j) {
          double dot = v0 * H(row_lo, j) + v1 * H(row_lo + 1, j);
          if (!last) dot += v2 * H(row_hi, j);
          dot /= denom;
          H(row_lo, j) -= dot * v0;
          H(row_lo + 1, j) -= dot * v1;
          if (!last) H(row_hi, j) -= dot * v2;
        }
        const int row_top = std::min(u, k + 3);
        for (int i = l; i <= row_top; ++i) {
          double dot = v0 * H(i, row_lo) + v1 * H(i, row_lo + 1);
          if (!last) dot += v2 * H(i, row_hi);
          dot /= denom;
          H(i, row_lo) -= dot * v0;
          H(i, row_lo + 1) -= dot * v1;
          if (!last) H(i, row_hi) -= dot * v2;
        }
      }
    }
    if (k < u - 1) {
      x = H(k + 1, k);
      y = H(k + 2, k);
      z = (k + 3 <= u) ? H(k + 3, k) : 0.0;
    }
  }
  // restore exact Hessenberg zeros below the bulge path
  for (int i = l + 2; i <= u; ++i)
    for (int j = l; j <= i - 2; ++j) H(i, j) = 0.0;
}

}  // namespace

std::vector<std::complex<double>> eigenvalues(const Mat<double>& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("eigenvalues: square matrix required");
  const int n = A.rows();
  if (n > 64) throw std::invalid_argument("eigenvalues: n <= 64 supported");
  std::vector<std::complex<double>> out;
  if (n == 0) return out;

  Mat<double> H = A;
  hessenberg_reduce(H);

  double anorm = 0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - 1); j < n; ++j) anorm += std::abs(H(i, j));
  if (anorm == 0.0) anorm = 1.0;

  int u = n - 1;
  int iters_in_block = 0;
  int total_iters = 0;
  const int max_total = 100 * n;

  while (u >= 0) {
    // find the start of the active block: smallest l with tiny H(l, l-1)
    int l = u;
    while (l > 0) {
      double s = std::abs(H(l - 1, l - 1)) + std::abs(H(l, l));
      if (s == 0.0) s = anorm;
      if (std::abs(H(l, l - 1)) <= kEps * s) {
        H(l, l - 1) = 0.0;
        break;
      }
      --l;
    }
    if (l == u) {
      out.emplace_back(H(u, u), 0.0);
      --u;
      iters_in_block = 0;
      continue;
    }
    if (l == u - 1) {
      push_2x2_eigenvalues(H(l, l), H(l, u), H(u, l), H(u, u), out);
      u -= 2;
      iters_in_block = 0;
      continue;
    }
    if (++total_iters > max_total)
      throw std::runtime_error("eigenvalues: QR iteration did not converge");
    ++iters_in_block;
    const bool exceptional = iters_in_block % 11 == 10;
    francis_sweep(H, l, u, exceptional);
  }

  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

namespace {

using Cplx = std::complex<double>;

// Dense complex solve with partial pivoting; near-singular pivots are floored
// instead of failing (inverse iteration wants them huge, not fatal).
std::vector<Cplx> solve_complex(Mat<Cplx> a, std::vector<Cplx> b, double floor_scale) {
  const int n = a.rows();
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int i = col + 1; i < n; ++i)
      if (std::abs(a(i, col)) > std::abs(a(pivot, col))) pivot = i;
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
      std::swap(b[pivot], b[col]);
    }
    if (std::abs(a(col, col)) < floor_scale) a(col, col) = Cplx(floor_scale, 0);
    for (int i = col + 1; i < n; ++i) {
      const Cplx f = a(i, col) / a(col, col);
      if (f == Cplx(0)) continue;
      for (int j = col; j < n; ++j) a(i, j) -= f * a(col, j);
      b[i] -= f * b[col];
    }
  }
  std::vector<Cplx> x(n);
  for (int i = n - 1; i >= 0; --i) {
    Cplx s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

}  // namespace

EigenPairs eigenpairs(const Mat<double>& A) {
  EigenPairs out;
  out.values = eigenvalues(A);
  const int n = A.rows();
  double anorm = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) anorm = std::max(anorm, std::abs(A(i, j)));
  if (anorm == 0.0) anorm = 1.0;

  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (const Cplx& lambda : out.values) {
    Mat<Cplx> shifted(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) shifted(i, j) = Cplx(A(i, j), 0) - (i == j ? lambda : Cplx(0));
    std::vector<Cplx> v(n);
    for (auto& vi : v) vi = Cplx(unit(rng), unit(rng));
    for (int it = 0; it < 3; ++it) {
      v = solve_complex(shifted, std::move(v), 1e-300 + kEps * anorm * 1e-3);
      double norm = 0;
      for (const auto& vi : v) norm += std::norm(vi);
      norm = std::sqrt(norm);
      for (auto& vi : v) vi /= norm;
    }
    // backward error ||A v - lambda v||_2 for the unit vector v
    double err = 0;
    for (int i = 0; i < n; ++i) {
      Cplx row(0);
      for (int j = 0; j < n; ++j) row += Cplx(A(i, j), 0) * v[j];
      row -= lambda * v[i];
      err += std::norm(row);
    }
    out.vectors.push_back(std::move(v));
    out.backward_errors.push_back(std::sqrt(err));
  }
  return out;
}

}  // namespace seqnet
