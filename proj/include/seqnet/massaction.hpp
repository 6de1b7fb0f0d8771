#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqnet/matrix.hpp"
#include "seqnet/network.hpp"
#include "seqnet/rational.hpp"

namespace seqnet {

// Production factor m and order n of the open sequestration family.
struct ModelParams {
  int m = 0;
  int n = 0;

  // General mass-action evaluation works for any m >= 1, n >= 2.
  void require_general() const;
  // Everything touching the three-branch construction needs m >= 2, odd n >= 3.
  void require_family() const;
};

// Rate slots carrying the continuation parameter: the outflows that the
// reduced network drops, i.e. indices n+1 and n+3..2n (1-based).
std::vector<int> eps_slots(int n);

enum class RateMode { Free, ConservationSubstituted };

// Full 3n-vector of exact rate constants r_1..r_3n.
// Slot map: 1..n-1 pair annihilations, n production, n+i outflow of X_i,
// 2n+i inflow of X_i.
class RateVector {
 public:
  RateVector(int n, std::vector<Rational> values, RateMode mode);

  int n() const { return n_; }
  RateMode mode() const { return mode_; }
  const std::vector<Rational>& values() const { return v_; }
  const Rational& at(int j) const;  // 1-based
  std::vector<double> as_doubles() const;

 private:
  int n_;
  std::vector<Rational> v_;
  RateMode mode_;
};

// The inputs of the bistability region: r_1..r_n plus the X_2 outflow rate.
struct FrontRates {
  std::vector<Rational> r;  // size n
  Rational rn2;             // slot n+2
};

// r_1..r_{2n} with the eps slots stamped to the given value.
std::vector<Rational> stamped_front(const ModelParams& p, const FrontRates& front,
                                    const Rational& eps);

// Derives the inflows r_{2n+1}..r_{3n} that make (1,...,1) a steady state:
//   r_{2n+1} = r_1 + r_n + r_{n+1}
//   r_{2n+i} = r_{i-1} + r_i + r_{n+i}          (2 <= i <= n-1)
//   r_{3n}   = r_{n-1} - m r_n + r_{2n}
// Requires r_1..r_n, r_{n+2} > 0 and eps slots >= 0; every derived inflow
// must be positive (the error names the violated equality).
RateVector conservation_substitute(const ModelParams& p, std::span<const Rational> front2n);

RateVector assemble_rates(const ModelParams& p, const FrontRates& front, const Rational& eps);

// ---------------------------------------------------------------------------
// Generic mass-action evaluation on an arbitrary network. Rates are indexed
// by rate_index (slot j feeds the reaction labelled r_j).

std::vector<double> ode_rhs(const ReactionNetwork& net, std::span<const double> rates,
                            std::span<const double> x);
Mat<double> ode_jacobian(const ReactionNetwork& net, std::span<const double> rates,
                         std::span<const double> x);

// ---------------------------------------------------------------------------
// Closed forms specialized to the open sequestration family. These agree with
// the generic path term for term and are additionally available in exact
// arithmetic.

template <typename T>
std::vector<T> family_rhs(const ModelParams& p, std::span<const T> rates3n,
                          std::span<const T> x);

template <typename T>
Mat<T> family_jacobian(const ModelParams& p, std::span<const T> rates3n,
                       std::span<const T> x);

// ---------------------------------------------------------------------------
// Boundary chart. The third steady state runs off to x_n -> infinity as the
// eps outflows vanish; the coordinate change
//   x = (y_1,...,y_{n-2}, c y_{n-1}/y_n, y_n/c),   c = r_{2n},
// keeps it at finite y. chart_rhs is the substituted system composed with the
// chart, with the two exact cancellations x_{n-1} x_n = y_{n-1} and
// c x_n = y_n carried out, so it stays defined in the limit c = 0.

template <typename T>
std::vector<T> chart_map(std::span<const T> y, const T& c);

template <typename T>
Mat<T> chart_map_jacobian(std::span<const T> y, const T& c);

// front2n = r_1..r_{2n}; inflows are derived internally as in
// conservation_substitute (values may be zero in the eps slots here).
template <typename T>
std::vector<T> chart_rhs(const ModelParams& p, std::span<const T> front2n,
                         std::span<const T> y);

template <typename T>
Mat<T> chart_jacobian(const ModelParams& p, std::span<const T> front2n,
                      std::span<const T> y);

// Outflow-free limit of the chart system: a polynomial system in y with
// parameters r_1..r_n and rn2 only.
template <typename T>
std::vector<T> chart_limit_rhs(const ModelParams& p, std::span<const T> r, const T& rn2,
                               std::span<const T> y);

template <typename T>
Mat<T> chart_limit_jacobian(const ModelParams& p, std::span<const T> r, const T& rn2,
                            std::span<const T> y);

// Closed-form determinant of chart_limit_jacobian; strictly negative at
// positive (r, y).
template <typename T>
T chart_limit_det(const ModelParams& p, std::span<const T> r, const T& rn2,
                  std::span<const T> y);

// ===========================================================================
// Template implementations
// ===========================================================================

namespace detail {

inline void require_size(size_t got, size_t want, const char* what) {
  if (got != want)
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(want) +
                                " entries, got " + std::to_string(got));
}

}  // namespace detail

template <typename T>
std::vector<T> family_rhs(const ModelParams& p, std::span<const T> r, std::span<const T> x) {
  p.require_general();
  const int n = p.n;
  detail::require_size(r.size(), 3 * static_cast<size_t>(n), "rates");
  detail::require_size(x.size(), static_cast<size_t>(n), "state");
  // 1-based accessors for readability against the slot map.
  auto R = [&](int j) -> const T& { return r[j - 1]; };
  auto X = [&](int i) -> const T& { return x[i - 1]; };
  std::vector<T> f(n);
  f[0] = -R(1) * X(1) * X(2) - R(n) * X(1) - R(n + 1) * X(1) + R(2 * n + 1);
  for (int i = 2; i <= n - 1; ++i)
    f[i - 1] = -R(i - 1) * X(i - 1) * X(i) - R(i) * X(i) * X(i + 1) - R(n + i) * X(i) +
               R(2 * n + i);
  f[n - 1] += -R(n - 1) * X(n - 1) * X(n) + T(p.m) * R(n) * X(1) - R(2 * n) * X(n) + R(3 * n);
  return f;
}

template <typename T>
Mat<T> family_jacobian(const ModelParams& p, std::span<const T> r, std::span<const T> x) {
  p.require_general();
  const int n = p.n;
  detail::require_size(r.size(), 3 * static_cast<size_t>(n), "rates");
  detail::require_size(x.size(), static_cast<size_t>(n), "state");
  auto R = [&](int j) -> const T& { return r[j - 1]; };
  auto X = [&](int i) -> const T& { return x[i - 1]; };
  Mat<T> J(n, n);
  J(0, 0) = -R(1) * X(2) - R(n) - R(n + 1);
  J(0, 1) = -R(1) * X(1);
  for (int i = 2; i <= n - 1; ++i) {
    J(i - 1, i - 2) = -R(i - 1) * X(i);
    J(i - 1, i - 1) = -R(i - 1) * X(i - 1) - R(i) * X(i + 1) - R(n + i);
    J(i - 1, i) = -R(i) * X(i);
  }
  J(n - 1, 0) += T(p.m) * R(n);
  J(n - 1, n - 2) += -R(n - 1) * X(n);
  J(n - 1, n - 1) += -R(n - 1) * X(n - 1) - R(2 * n);
  return J;
}

template <typename T>
std::vector<T> chart_map(std::span<const T> y, const T& c) {
  const int n = static_cast<int>(y.size());
  if (n < 2) throw std::invalid_argument("chart_map: need at least two coordinates");
  if (y[n - 1] == T(0)) throw std::invalid_argument("chart_map: y_n must be nonzero");
  if (c == T(0)) throw std::invalid_argument("chart_map: chart scale must be nonzero");
  std::vector<T> x(y.begin(), y.end());
  x[n - 2] = c * y[n - 2] / y[n - 1];
  x[n - 1] = y[n - 1] / c;
  return x;
}

template <typename T>
Mat<T> chart_map_jacobian(std::span<const T> y, const T& c) {
  const int n = static_cast<int>(y.size());
  if (n < 2) throw std::invalid_argument("chart_map_jacobian: need at least two coordinates");
  if (y[n - 1] == T(0)) throw std::invalid_argument("chart_map_jacobian: y_n must be nonzero");
  if (c == T(0)) throw std::invalid_argument("chart_map_jacobian: chart scale must be nonzero");
  Mat<T> J = Mat<T>::identity(n);
  J(n - 2, n - 2) = c / y[n - 1];
  J(n - 2, n - 1) = -c * y[n - 2] / (y[n - 1] * y[n - 1]);
  J(n - 1, n - 2) = T(0);
  J(n - 1, n - 1) = T(1) / c;
  return J;
}

namespace detail {

// Shared evaluator for chart_rhs / chart_jacobian. The chart substitutes
// x_i = y_i (i <= n-2) and x_{n-1} = w = c y_{n-1}/y_n; x_n only ever occurs
// in the products x_{n-1} x_n = y_{n-1} and c x_n = y_n.
template <typename T>
void chart_eval(const ModelParams& p, std::span<const T> r2n, std::span<const T> y,
                std::vector<T>* rhs, Mat<T>* jac) {
  p.require_family();
  const int n = p.n;
  require_size(r2n.size(), 2 * static_cast<size_t>(n), "front rates");
  require_size(y.size(), static_cast<size_t>(n), "chart point");
  if (y[n - 1] == T(0)) throw std::invalid_argument("chart system: y_n must be nonzero");

  auto R = [&](int j) -> const T& { return r2n[j - 1]; };
  const T& c = R(2 * n);
  const T& yn = y[n - 1];
  const T w = c * y[n - 2] / yn;

  // x_a for a = 1..n-1, plus its (sparse) derivative w.r.t. y.
  auto xv = [&](int a) -> T { return a == n - 1 ? w : y[a - 1]; };

  if (rhs) rhs->assign(n, T(0));
  if (jac) *jac = Mat<T>(n, n);

  // d(term)/dy for term = k * x_a, accumulated into row i-1.
  auto d_linear = [&](int i, const T& k, int a) {
    if (!jac) return;
    if (a == n - 1) {
      (*jac)(i - 1, n - 2) += k * c / yn;
      (*jac)(i - 1, n - 1) += -k * w / yn;
    } else {
      (*jac)(i - 1, a - 1) += k;
    }
  };
  auto add_linear = [&](int i, const T& k, int a) {
    if (rhs) (*rhs)[i - 1] += k * xv(a);
    d_linear(i, k, a);
  };
  auto add_bilinear = [&](int i, const T& k, int a, int b) {
    if (rhs) (*rhs)[i - 1] += k * xv(a) * xv(b);
    d_linear(i, k * xv(b), a);
    d_linear(i, k * xv(a), b);
  };
  auto add_const = [&](int i, const T& k) {
    if (rhs) (*rhs)[i - 1] += k;
  };

  // Species 1: -r_1 x_1 x_2 - r_n x_1 - r_{n+1} x_1 + (r_1 + r_n + r_{n+1}).
  add_bilinear(1, -R(1), 1, 2);
  add_linear(1, -(R(n) + R(n + 1)), 1);
  add_const(1, R(1) + R(n) + R(n + 1));
  // Species 2..n-1: -r_{i-1} x_{i-1} x_i - r_i x_i x_{i+1} - r_{n+i} x_i + c_i,
  // where the i = n-1 middle term collapses to -r_{n-1} y_{n-1}.
  for (int i = 2; i <= n - 1; ++i) {
    add_bilinear(i, -R(i - 1), i - 1, i);
    if (i == n - 1) {
      if (rhs) (*rhs)[i - 1] += -R(n - 1) * y[n - 2];
      if (jac) (*jac)(i - 1, n - 2) += -R(n - 1);
    } else {
      add_bilinear(i, -R(i), i, i + 1);
    }
    add_linear(i, -R(n + i), i);
    add_const(i, R(i - 1) + R(i) + R(n + i));
  }
  // Species n: -r_{n-1} y_{n-1} + m r_n x_1 - y_n + (r_{n-1} - m r_n + r_{2n}).
  if (rhs) (*rhs)[n - 1] += -R(n - 1) * y[n - 2] - yn;
  if (jac) {
    (*jac)(n - 1, n - 2) += -R(n - 1);
    (*jac)(n - 1, n - 1) += T(-1);
  }
  add_linear(n, T(p.m) * R(n), 1);
  add_const(n, R(n - 1) - T(p.m) * R(n) + R(2 * n));
}

}  // namespace detail

template <typename T>
std::vector<T> chart_rhs(const ModelParams& p, std::span<const T> front2n,
                         std::span<const T> y) {
  std::vector<T> f;
  detail::chart_eval(p, front2n, y, &f, static_cast<Mat<T>*>(nullptr));
  return f;
}

template <typename T>
Mat<T> chart_jacobian(const ModelParams& p, std::span<const T> front2n, std::span<const T> y) {
  Mat<T> J;
  detail::chart_eval(p, front2n, y, static_cast<std::vector<T>*>(nullptr), &J);
  return J;
}

template <typename T>
std::vector<T> chart_limit_rhs(const ModelParams& p, std::span<const T> r, const T& rn2,
                               std::span<const T> y) {
  p.require_family();
  const int n = p.n;
  detail::require_size(r.size(), static_cast<size_t>(n), "rates");
  detail::require_size(y.size(), static_cast<size_t>(n), "chart point");
  auto R = [&](int j) -> const T& { return r[j - 1]; };
  auto Y = [&](int i) -> const T& { return y[i - 1]; };
  std::vector<T> g(n);
  if (n == 3) {
    g[0] = R(1) + R(3) - R(3) * Y(1);
    g[1] = R(1) + R(2) + rn2 - R(2) * Y(2);
    g[2] = R(2) - T(p.m) * R(3) - R(2) * Y(2) + T(p.m) * R(3) * Y(1) - Y(3);
    return g;
  }
  g[0] = R(1) + R(n) - R(n) * Y(1) - R(1) * Y(1) * Y(2);
  g[1] = R(1) + R(2) + rn2 - R(1) * Y(1) * Y(2) - R(2) * Y(2) * Y(3) - rn2 * Y(2);
  for (int i = 3; i <= n - 3; ++i)
    g[i - 1] = R(i - 1) + R(i) - R(i - 1) * Y(i - 1) * Y(i) - R(i) * Y(i) * Y(i + 1);
  g[n - 3] = R(n - 3) + R(n - 2) - R(n - 3) * Y(n - 3) * Y(n - 2);
  g[n - 2] = R(n - 2) + R(n - 1) - R(n - 1) * Y(n - 1);
  g[n - 1] = R(n - 1) - T(p.m) * R(n) + T(p.m) * R(n) * Y(1) - R(n - 1) * Y(n - 1) - Y(n);
  return g;
}

template <typename T>
Mat<T> chart_limit_jacobian(const ModelParams& p, std::span<const T> r, const T& rn2,
                            std::span<const T> y) {
  p.require_family();
  const int n = p.n;
  detail::require_size(r.size(), static_cast<size_t>(n), "rates");
  detail::require_size(y.size(), static_cast<size_t>(n), "chart point");
  auto R = [&](int j) -> const T& { return r[j - 1]; };
  auto Y = [&](int i) -> const T& { return y[i - 1]; };
  Mat<T> J(n, n);
  if (n == 3) {
    J(0, 0) = -R(3);
    J(1, 1) = -R(2);
    J(2, 0) = T(p.m) * R(3);
    J(2, 1) = -R(2);
    J(2, 2) = T(-1);
    return J;
  }
  J(0, 0) = -R(n) - R(1) * Y(2);
  J(0, 1) = -R(1) * Y(1);
  J(1, 0) = -R(1) * Y(2);
  J(1, 1) = -R(1) * Y(1) - R(2) * Y(3) - rn2;
  J(1, 2) = -R(2) * Y(2);
  for (int i = 3; i <= n - 3; ++i) {
    J(i - 1, i - 2) = -R(i - 1) * Y(i);
    J(i - 1, i - 1) = -R(i - 1) * Y(i - 1) - R(i) * Y(i + 1);
    J(i - 1, i) = -R(i) * Y(i);
  }
  J(n - 3, n - 4) = -R(n - 3) * Y(n - 2);
  J(n - 3, n - 3) = -R(n - 3) * Y(n - 3);
  J(n - 2, n - 2) = -R(n - 1);
  J(n - 1, 0) = T(p.m) * R(n);
  J(n - 1, n - 2) = -R(n - 1);
  J(n - 1, n - 1) = T(-1);
  return J;
}

template <typename T>
T chart_limit_det(const ModelParams& p, std::span<const T> r, const T& rn2,
                  std::span<const T> y) {
  p.require_family();
  const int n = p.n;
  auto R = [&](int j) -> const T& { return r[j - 1]; };
  auto Y = [&](int i) -> const T& { return y[i - 1]; };
  if (n == 3) return -R(2) * R(3);
  T prod(1);
  for (int i = 2; i <= n - 3; ++i) prod *= R(i) * Y(i);
  return -prod * R(n - 1) * (R(n) * rn2 + R(1) * R(n) * Y(1) + R(1) * rn2 * Y(2));
}

}  // namespace seqnet
