#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "seqnet/massaction.hpp"

namespace seqnet {

enum class Branch { AllOnes, Delta, Boundary };
const char* to_string(Branch b);

struct SteadyState {
  std::vector<double> x;
  double residual_norm = 0.0;  // inf-norm of the full system at x
  double det_jacobian = 0.0;
  bool nondegenerate = false;
  Branch branch = Branch::AllOnes;
  double eps = 0.0;
};

// Scale-aware degeneracy cutoff: |det J| must exceed 1e-9 * (1 + ||J||_inf^n).
double degeneracy_threshold(const Mat<double>& J);

// ---------------------------------------------------------------------------
// Tridiagonal determinant for matrices of the shape
//   [a1+b1  a2                 ]
//   [b1     a2+b2  a3          ]
//   [        ...   ...    a_n  ]
//   [              b_{n-1} a_n ]
// The closed form is a1*a2*...*an; the eliminator runs the bottom-up
// Gaussian sweep that proves it, as an independent route.

double tridiagonal_det(std::span<const double> a, std::span<const double> b);
double tridiagonal_det_eliminated(std::span<const double> a, std::span<const double> b);
Mat<double> tridiagonal_assemble(std::span<const double> a, std::span<const double> b);

// det of the family Jacobian when every eps slot is exactly zero:
//   r_2...r_{n-1} x_2...x_{n-1} ((m-1) r_1 r_n x_1 - (r_n + r_1 x_2) rn2).
// Throws if an eps slot of `rates` is nonzero (the formula does not apply).
template <typename T>
T det_jacobian_reduced(const ModelParams& p, std::span<const T> rates3n, std::span<const T> x);

// ---------------------------------------------------------------------------
// Closed-form branches of the reduced system (eps slots at zero).

struct InteriorPair {
  std::vector<Rational> ones;
  std::vector<Rational> delta;
  bool distinct = false;  // false exactly on the branch-separation equality
};

// The two interior roots: (1,...,1) and the delta point
//   delta_1 = (r_1+r_n) rn2 / ((m-1) r_1 r_n),
//   delta_2 = ((m-1) r_1 - rn2) r_n / (r_1 rn2),
//   delta_i = ((m-1) r_1 (r_{i-1} + (-1)^i m r_n) + (-1)^{i-1} m (r_1+r_n) rn2)
//             / ((m-1) r_1 r_{i-1} delta_{i-1}).
// Positivity preconditions are checked; violations name the failed inequality.
InteriorPair interior_pair(const ModelParams& p, const FrontRates& front);

// Positive root of the outflow-free chart system. For n = 3 the root is
// rational in r; for n > 3 the first coordinate solves a quadratic with
// exactly one positive root (the constant term is negative), picked by sign.
std::vector<double> chart_limit_root(const ModelParams& p, const FrontRates& front);

// ---------------------------------------------------------------------------
// Newton refinement with positivity damping.

struct NewtonOptions {
  double tol = 1e-12;   // absolute, on ||F||_inf
  int max_iter = 50;
  int max_halvings = 40;
};

enum class NewtonStatus { Converged, SingularJacobian, MaxIterations, LeftPositiveOrthant };
const char* to_string(NewtonStatus s);

struct NewtonResult {
  NewtonStatus status = NewtonStatus::MaxIterations;
  std::vector<double> x;
  int iterations = 0;
  double residual_norm = 0.0;
};

// F fills f (and jac when non-null) at x; this lets systems share work.
using SystemFn =
    std::function<void(std::span<const double> x, std::vector<double>& f, Mat<double>* jac)>;

NewtonResult newton_refine(const SystemFn& system, std::span<const double> x0,
                           const NewtonOptions& opts = {});

// ---------------------------------------------------------------------------
// Continuation in the eps outflows.

struct ContinuationOptions {
  int steps = 20;                  // geometric schedule length
  double first_step_factor = 1e-3; // eps_1 = eps_target * this
  double min_step_factor = 1e-6;   // bisection floor, relative to schedule gaps
  NewtonOptions newton;
  double residual_tol = 1e-10;
};

struct ContinuationResult {
  bool ok = false;
  SteadyState state;
  double reached_eps = 0.0;  // largest eps with a refined solution
  std::vector<std::pair<double, bool>> trace;
  std::string error;
};

// Tracks the chosen eps=0 branch point to eps_target. The all-ones branch is
// constant (the substitution keeps it a root for every eps); the delta branch
// is continued in state space; the boundary branch is continued in chart
// coordinates, where it stays O(1), and mapped back only at the target.
ContinuationResult continue_in_eps(const ModelParams& p, const FrontRates& front, Branch branch,
                                   const Rational& eps_target,
                                   const ContinuationOptions& opts = {});

// ===========================================================================
// Template implementation

template <typename T>
T det_jacobian_reduced(const ModelParams& p, std::span<const T> r, std::span<const T> x) {
  p.require_family();
  const int n = p.n;
  detail::require_size(r.size(), 3 * static_cast<size_t>(n), "rates");
  detail::require_size(x.size(), static_cast<size_t>(n), "state");
  for (int j : eps_slots(n))
    if (r[j - 1] != T(0))
      throw std::invalid_argument("det_jacobian_reduced: eps slot r" + std::to_string(j) +
                                  " must be zero for the closed form");
  auto R = [&](int j) -> const T& { return r[j - 1]; };
  auto X = [&](int i) -> const T& { return x[i - 1]; };
  T prod(1);
  for (int i = 2; i <= n - 1; ++i) prod *= R(i) * X(i);
  return prod * (T(p.m - 1) * R(1) * R(n) * X(1) - (R(n) + R(1) * X(2)) * R(n + 2));
}

}  // namespace seqnet
