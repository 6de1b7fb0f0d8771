#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "seqnet/massaction.hpp"
#include "seqnet/steady.hpp"

namespace seqnet {

enum class DiscMode { Row, Column };

struct GershgorinDisc {
  double center = 0.0;  // a_ii
  double radius = 0.0;  // off-diagonal absolute sum of the row or column
  DiscMode mode = DiscMode::Row;
  int index = 0;  // 1-based
};

std::vector<GershgorinDisc> gershgorin_discs(const Mat<double>& A, DiscMode mode);

// Signed distance of z to the union of discs (<= 0 when inside).
double disc_union_distance(const std::vector<GershgorinDisc>& discs, std::complex<double> z);

template <typename T>
struct DominanceCheck {
  bool dominant = false;
  T margin{};  // min over i of |a_ii| - (off-diagonal sum); exact for T=Rational
};

template <typename T>
DominanceCheck<T> diagonal_dominance(const Mat<T>& A, DiscMode mode);

enum class DominanceVerdict { NegativeRealParts, Inconclusive };

// Dominance in either mode plus a negative diagonal pins every nonzero
// eigenvalue to the open left half plane.
DominanceVerdict dominance_verdict(const Mat<double>& A);

// ---------------------------------------------------------------------------
// The two families of diagonal similarity scalings used for certificates.

// D = diag(1 + rn2/(r_1 x_1), 1, ..., 1). After scaling, columns 2..n are
// dominated with equality when the eps slots vanish; column 1 is strict
// exactly on the ones-dominance side of the region.
template <typename T>
std::vector<T> ones_scaling(const ModelParams& p, std::span<const T> rates3n,
                            std::span<const T> x);

// The boundary-state scaling: n = 3 uses D = diag(d1, 1, d3), n > 3 uses
// D = diag(d1, 1, ..., 1, d_{n-1}, d_n), with the d solved from the exact
// column-equality conditions. Dominance of the remaining columns is checked
// by the caller, never assumed.
template <typename T>
std::vector<T> boundary_scaling(const ModelParams& p, std::span<const T> rates3n,
                                std::span<const T> x);

// ---------------------------------------------------------------------------
// Dense eigenvalues: Householder Hessenberg reduction + Francis double-shift
// QR. Throws std::runtime_error after 100*n sweeps without full deflation.
// Results are sorted by real part, then imaginary part.
std::vector<std::complex<double>> eigenvalues(const Mat<double>& A);

struct EigenPairs {
  std::vector<std::complex<double>> values;
  std::vector<std::vector<std::complex<double>>> vectors;  // unit 2-norm
  std::vector<double> backward_errors;  // ||A v - lambda v||_2 per pair
};

// Eigenvalues plus inverse-iteration eigenvectors with backward errors.
EigenPairs eigenpairs(const Mat<double>& A);

// ---------------------------------------------------------------------------

enum class StabilityVerdict { CertifiedStable, EigenStable, Unstable, Degenerate };
const char* to_string(StabilityVerdict v);

struct StabilityReport {
  StabilityVerdict verdict = StabilityVerdict::Degenerate;
  std::vector<GershgorinDisc> discs;            // both modes of the unscaled J
  std::optional<std::vector<double>> scaling;   // diag of the certifying D
  std::vector<std::complex<double>> eigenvalues;
  double dominant_margin = 0.0;  // column margin after scaling (or of J itself)
  bool exact_certificate = false;
};

// Certificate-first classification of a bare matrix: direct dominance, then
// eigenvalues with the scale-aware tolerance 1e-9 * ||J||_inf (real parts
// inside the band, or |det| under the degeneracy cutoff, give Degenerate).
StabilityReport classify(const Mat<double>& J);

// Classification of the family Jacobian at (rates, x). Certificates are
// attempted in exact rational arithmetic: plain dominance, then the ones
// scaling, then the boundary scaling. CertifiedStable additionally requires
// nondegeneracy, closing the zero-eigenvalue loophole. Falls back to
// eigenvalues otherwise.
StabilityReport classify(const ModelParams& p, const RateVector& rates,
                         std::span<const double> x);

// Exact-input variant used by tests and by classify itself.
StabilityReport classify_exact(const ModelParams& p, std::span<const Rational> rates3n,
                               std::span<const Rational> x);

// ===========================================================================
// Template implementations

template <typename T>
DominanceCheck<T> diagonal_dominance(const Mat<T>& A, DiscMode mode) {
  if (A.rows() != A.cols()) throw std::invalid_argument("diagonal_dominance: square matrix required");
  const int n = A.rows();
  DominanceCheck<T> out;
  if (n == 0) {
    out.dominant = true;
    out.margin = T(0);
    return out;
  }
  using std::abs;
  bool first = true;
  for (int i = 0; i < n; ++i) {
    T off(0);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      off += abs(mode == DiscMode::Row ? A(i, j) : A(j, i));
    }
    T slack = abs(A(i, i)) - off;
    if (first || slack < out.margin) out.margin = slack;
    first = false;
  }
  out.dominant = !(out.margin < T(0));
  return out;
}

template <typename T>
std::vector<T> ones_scaling(const ModelParams& p, std::span<const T> rates3n,
                            std::span<const T> x) {
  p.require_family();
  detail::require_size(rates3n.size(), 3 * static_cast<size_t>(p.n), "rates");
  detail::require_size(x.size(), static_cast<size_t>(p.n), "state");
  std::vector<T> d(p.n, T(1));
  d[0] = T(1) + rates3n[p.n + 1] / (rates3n[0] * x[0]);  // 1 + rn2/(r1 x1)
  return d;
}

template <typename T>
std::vector<T> boundary_scaling(const ModelParams& p, std::span<const T> r,
                                std::span<const T> x) {
  p.require_family();
  const int n = p.n;
  detail::require_size(r.size(), 3 * static_cast<size_t>(n), "rates");
  detail::require_size(x.size(), static_cast<size_t>(n), "state");
  auto R = [&](int j) -> const T& { return r[j - 1]; };
  auto X = [&](int i) -> const T& { return x[i - 1]; };
  std::vector<T> d(n, T(1));
  if (n == 3) {
    // d1 r1 x1 + d3 r2 x3 = r1 x1 + r2 x3 + r5   (column-2 equality)
    // (1/d3) r2 x2        = r2 x2 + r6           (column-3 equality)
    d[2] = R(2) * X(2) / (R(2) * X(2) + R(6));
    d[0] = (R(1) * X(1) + R(2) * X(3) + R(5) - d[2] * R(2) * X(3)) / (R(1) * X(1));
    return d;
  }
  // d1 r1 x1 = r1 x1 + rn2                                   (column 2)
  // (r_{n-2} x_{n-2})/d_{n-1} + (d_n/d_{n-1}) r_{n-1} x_n
  //   = r_{n-2} x_{n-2} + r_{n-1} x_n + r_{2n-1}             (column n-1)
  // (d_{n-1}/d_n) r_{n-1} x_{n-1} = r_{n-1} x_{n-1} + r_{2n} (column n)
  d[0] = (R(1) * X(1) + R(n + 2)) / (R(1) * X(1));
  const T pn1 = R(n - 1) * X(n - 1);  // r_{n-1} x_{n-1}
  const T pn2 = R(n - 2) * X(n - 2);  // r_{n-2} x_{n-2}
  const T denom = (pn2 + R(2 * n - 1)) * (pn1 + R(2 * n)) + R(2 * n) * R(n - 1) * X(n);
  d[n - 2] = pn2 * (pn1 + R(2 * n)) / denom;
  d[n - 1] = pn2 * pn1 / denom;
  return d;
}

}  // namespace seqnet
