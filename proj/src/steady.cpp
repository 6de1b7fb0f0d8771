#include "seqnet/steady.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "seqnet/region.hpp"

namespace seqnet {

const char* to_string(Branch b) {
  switch (b) {
    case Branch::AllOnes: return "all-ones";
    case Branch::Delta: return "delta";
    case Branch::Boundary: return "boundary";
  }
  return "?";
}

const char* to_string(NewtonStatus s) {
  switch (s) {
    case NewtonStatus::Converged: return "converged";
    case NewtonStatus::SingularJacobian: return "singular Jacobian";
    case NewtonStatus::MaxIterations: return "iteration limit";
    case NewtonStatus::LeftPositiveOrthant: return "left the positive orthant";
  }
  return "?";
}

namespace {

Eigen::MatrixXd to_eigen(const Mat<double>& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  return m;
}

double inf_norm(const Mat<double>& a) {
  double best = 0;
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0;
    for (int j = 0; j < a.cols(); ++j) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

double inf_norm(std::span<const double> v) {
  double best = 0;
  for (double x : v) best = std::max(best, std::abs(x));
  return best;
}

}  // namespace

double degeneracy_threshold(const Mat<double>& J) { return 1e-9 * (1.0 + inf_norm(J)); }

// ---------------------------------------------------------------------------
// Tridiagonal determinant

Mat<double> tridiagonal_assemble(std::span<const double> a, std::span<const double> b) {
  const int n = static_cast<int>(a.size());
  if (static_cast<int>(b.size()) != n - 1)
    throw std::invalid_argument("tridiagonal: need n-1 subdiagonal entries");
  Mat<double> M(n, n);
  for (int i = 0; i < n; ++i) {
    M(i, i) = (i < n - 1) ? a[i] + b[i] : a[i];
    if (i + 1 < n) {
      M(i, i + 1) = a[i + 1];
      M(i + 1, i) = b[i];
    }
  }
  return M;
}

double tridiagonal_det(std::span<const double> a, std::span<const double> b) {
  if (b.size() + 1 != a.size())
    throw std::invalid_argument("tridiagonal: need n-1 subdiagonal entries");
  double det = 1;
  for (double ai : a) det *= ai;
  return det;
}

double tridiagonal_det_eliminated(std::span<const double> a, std::span<const double> b) {
  // Bottom-up sweep: row i's subdiagonal b_i eliminates against row i+1,
  // whose diagonal is already reduced to a_{i+1}; each diagonal collapses to
  // a_i, making the product explicit. Runs the actual arithmetic as a check.
  const int n = static_cast<int>(a.size());
  if (static_cast<int>(b.size()) != n - 1)
    throw std::invalid_argument("tridiagonal: need n-1 subdiagonal entries");
  Mat<double> M = tridiagonal_assemble(a, b);
  double det = 1;
  for (int i = n - 1; i >= 1; --i) {
    if (M(i, i) == 0.0) {
      // fall back to plain LU on the remaining block
      Eigen::MatrixXd top = to_eigen(M).topLeftCorner(i + 1, i + 1);
      return det * top.partialPivLu().determinant();
    }
    const double factor = M(i - 1, i) / M(i, i);
    M(i - 1, i - 1) -= factor * M(i, i - 1);
    M(i - 1, i) = 0;
    det *= M(i, i);
  }
  return det * M(0, 0);
}

// ---------------------------------------------------------------------------
// Closed-form branches

InteriorPair interior_pair(const ModelParams& p, const FrontRates& front) {
  p.require_family();
  const int n = p.n;
  detail::require_size(front.r.size(), static_cast<size_t>(n), "front rates");
  RegionCheck mss = check_mss(p, front);
  if (!mss.all_satisfied)
    throw std::invalid_argument(std::string("interior_pair: inequality ") +
                                mss.first_failed()->label() + " is violated");
  auto R = [&](int j) -> const Rational& { return front.r[j - 1]; };
  const Rational& rn2 = front.rn2;
  const Rational m1(p.m - 1);
  const Rational mm(p.m);

  InteriorPair out;
  out.ones.assign(n, Rational(1));
  std::vector<Rational> d(n);
  d[0] = (R(1) + R(n)) * rn2 / (m1 * R(1) * R(n));
  d[1] = (m1 * R(1) - rn2) * R(n) / (R(1) * rn2);
  for (int i = 3; i <= n; ++i) {
    const Rational sign = (i % 2 == 0) ? Rational(1) : Rational(-1);
    Rational numer = m1 * R(1) * (R(i - 1) + sign * mm * R(n)) - sign * mm * (R(1) + R(n)) * rn2;
    d[i - 1] = numer / (m1 * R(1) * R(i - 1) * d[i - 2]);
  }
  for (int i = 1; i <= n; ++i)
    if (d[i - 1] <= 0)
      throw std::invalid_argument("interior_pair: delta_" + std::to_string(i) +
                                  " is not positive");
  out.distinct = d[0] != 1;
  out.delta = std::move(d);
  return out;
}

std::vector<double> chart_limit_root(const ModelParams& p, const FrontRates& front) {
  p.require_family();
  const int n = p.n;
  detail::require_size(front.r.size(), static_cast<size_t>(n), "front rates");
  std::vector<double> r = to_doubles(front.r);
  const double rn2 = to_double(front.rn2);
  auto R = [&](int j) { return r[j - 1]; };
  std::vector<double> xi(n);
  if (n == 3) {
    if (!((p.m - 1) * R(1) > rn2))
      throw std::invalid_argument(
          "chart_limit_root: delta-positivity-2 ((m-1) r1 > rn2) is violated");
    xi[0] = (R(1) + R(3)) / R(3);
    xi[1] = (R(1) + R(2) + rn2) / R(2);
    xi[2] = (p.m - 1) * R(1) - rn2;
    return xi;
  }
  // First coordinate: positive root of A y^2 + B y + C with C < 0, so the
  // roots have opposite signs; pick by sign via the stable quadratic formula.
  const double A = R(1) * R(n);
  const double B = R(1) * rn2 + R(n) * rn2 - R(1) * R(n - 2) - R(1) * R(n);
  const double C = -(R(1) + R(n)) * rn2;
  const double disc = B * B - 4 * A * C;
  if (!(disc > 0)) throw std::logic_error("chart_limit_root: quadratic lost its real roots");
  const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
  const double root1 = q / A;
  const double root2 = C / q;
  xi[0] = root1 > 0 ? root1 : root2;
  if (!(xi[0] > 0)) throw std::logic_error("chart_limit_root: no positive root");

  xi[1] = (R(1) + rn2 - R(n - 2)) / (R(1) * xi[0] + rn2);
  for (int i = 3; i <= n - 2; ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    xi[i - 1] = (R(i - 1) - sign * R(n - 2)) / (R(i - 1) * xi[i - 2]);
  }
  xi[n - 2] = (R(n - 2) + R(n - 1)) / R(n - 1);
  xi[n - 1] = p.m * R(n) * (xi[0] - 1) - R(n - 2);

  if (!(xi[1] > 0))
    throw std::invalid_argument(
        "chart_limit_root: chart-positivity-2 (r1 + rn2 > r_{n-2}) is violated");
  for (int i = 3; i <= n - 2; ++i)
    if (!(xi[i - 1] > 0))
      throw std::invalid_argument("chart_limit_root: chart-positivity[" + std::to_string(i) +
                                  "] (r" + std::to_string(i - 1) + " > r" +
                                  std::to_string(n - 2) + ") is violated");
  if (!(xi[n - 1] > 0))
    throw std::invalid_argument(
        "chart_limit_root: last coordinate is not positive "
        "(delta-positivity[n-1] is violated)");
  return xi;
}

// ---------------------------------------------------------------------------
// Newton

NewtonResult newton_refine(const SystemFn& system, std::span<const double> x0,
                           const NewtonOptions& opts) {
  const int n = static_cast<int>(x0.size());
  NewtonResult res;
  res.x.assign(x0.begin(), x0.end());
  for (double v : res.x)
    if (!(v > 0)) {
      res.status = NewtonStatus::LeftPositiveOrthant;
      return res;
    }

  std::vector<double> f(n);
  Mat<double> J(n, n);
  for (int iter = 0; iter <= opts.max_iter; ++iter) {
    system(res.x, f, &J);
    res.residual_norm = inf_norm(f);
    res.iterations = iter;
    if (res.residual_norm < opts.tol) {
      res.status = NewtonStatus::Converged;
      return res;
    }
    if (iter == opts.max_iter) break;

    // The branch points can span many decades per coordinate, so solve the
    // row/column-equilibrated system: rows by their max entry, columns by the
    // current iterate (steps become relative to the coordinate scale).
    Eigen::MatrixXd A = to_eigen(J);
    Eigen::VectorXd col_scale(n), row_scale(n);
    for (int j = 0; j < n; ++j) col_scale(j) = std::max(std::abs(res.x[j]), 1e-300);
    for (int j = 0; j < n; ++j) A.col(j) *= col_scale(j);
    for (int i = 0; i < n; ++i) {
      row_scale(i) = std::max(A.row(i).cwiseAbs().maxCoeff(), 1e-300);
      A.row(i) /= row_scale(i);
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    const auto& U = lu.matrixLU();
    double umin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) umin = std::min(umin, std::abs(U(i, i)));
    if (!(umin > 1e-13)) {  // the equilibrated matrix has unit row scale
      res.status = NewtonStatus::SingularJacobian;
      return res;
    }
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) rhs(i) = -f[i] / row_scale(i);
    Eigen::VectorXd step = lu.solve(rhs);
    for (int j = 0; j < n; ++j) step(j) *= col_scale(j);

    // halving keeps the iterate strictly positive
    double scale = 1.0;
    int halvings = 0;
    std::vector<double> trial(n);
    while (true) {
      bool positive = true;
      for (int i = 0; i < n; ++i) {
        trial[i] = res.x[i] + scale * step(i);
        if (!(trial[i] > 0)) positive = false;
      }
      if (positive) break;
      if (++halvings > opts.max_halvings) {
        res.status = NewtonStatus::LeftPositiveOrthant;
        return res;
      }
      scale *= 0.5;
    }
    res.x = trial;
  }
  res.status = NewtonStatus::MaxIterations;
  return res;
}

// ---------------------------------------------------------------------------
// Continuation

namespace {

struct FamilySystem {
  ModelParams p;
  std::vector<double> rates;  // full 3n

  void operator()(std::span<const double> x, std::vector<double>& f, Mat<double>* jac) const {
    f = family_rhs<double>(p, rates, x);
    if (jac) *jac = family_jacobian<double>(p, std::span<const double>(rates), x);
  }
};

struct ChartSystem {
  ModelParams p;
  std::vector<double> front2n;

  void operator()(std::span<const double> y, std::vector<double>& f, Mat<double>* jac) const {
    f = chart_rhs<double>(p, front2n, y);
    if (jac) *jac = chart_jacobian<double>(p, std::span<const double>(front2n), y);
  }
};

std::vector<double> geometric_schedule(double target, int steps, double first_factor) {
  std::vector<double> s;
  if (steps < 2) steps = 2;
  for (int k = 1; k <= steps; ++k)
    s.push_back(target * std::pow(first_factor, double(steps - k) / double(steps - 1)));
  s.back() = target;
  return s;
}

SteadyState finish_state(const ModelParams& p, const RateVector& rates,
                         std::vector<double> x, Branch branch, double eps) {
  const std::vector<double> rd = rates.as_doubles();
  SteadyState st;
  st.residual_norm = inf_norm(family_rhs<double>(p, rd, x));
  Mat<double> J = family_jacobian<double>(p, std::span<const double>(rd), x);
  st.det_jacobian = to_eigen(J).partialPivLu().determinant();
  st.nondegenerate = std::abs(st.det_jacobian) > degeneracy_threshold(J);
  st.branch = branch;
  st.eps = eps;
  st.x = std::move(x);
  return st;
}

}  // namespace

ContinuationResult continue_in_eps(const ModelParams& p, const FrontRates& front, Branch branch,
                                   const Rational& eps_target, const ContinuationOptions& opts) {
  p.require_family();
  if (eps_target <= 0)
    throw std::invalid_argument("continue_in_eps: eps target must be positive");
  const double target = to_double(eps_target);
  ContinuationResult out;

  if (branch == Branch::AllOnes) {
    // The substitution keeps (1,...,1) a root at every eps; check it exactly.
    RateVector rates = assemble_rates(p, front, eps_target);
    std::vector<Rational> ones(p.n, Rational(1));
    for (const Rational& fi : family_rhs<Rational>(p, rates.values(), ones))
      if (fi != 0) throw std::logic_error("all-ones branch: exact residual is nonzero");
    out.state = finish_state(p, rates, std::vector<double>(p.n, 1.0), branch, target);
    out.state.residual_norm = 0.0;
    out.reached_eps = target;
    out.trace.push_back({target, true});
    out.ok = true;
    return out;
  }

  // eps = 0 seed
  std::vector<double> point;
  if (branch == Branch::Delta)
    point = to_doubles(interior_pair(p, front).delta);
  else
    point = chart_limit_root(p, front);

  const std::vector<double> schedule = geometric_schedule(target, opts.steps,
                                                          opts.first_step_factor);
  double current = 0.0;
  std::vector<double> pending(schedule.rbegin(), schedule.rend());  // stack, next on top

  while (!pending.empty()) {
    const double eps = pending.back();
    RateVector rates = assemble_rates(p, front, rational_of(eps));
    NewtonResult nr;
    if (branch == Branch::Delta) {
      FamilySystem sys{p, rates.as_doubles()};
      nr = newton_refine(sys, point, opts.newton);
    } else {
      std::vector<Rational> f2n = stamped_front(p, front, rational_of(eps));
      ChartSystem sys{p, to_doubles(f2n)};
      nr = newton_refine(sys, point, opts.newton);
    }
    out.trace.push_back({eps, nr.status == NewtonStatus::Converged});
    if (nr.status == NewtonStatus::Converged) {
      point = nr.x;
      current = eps;
      pending.pop_back();
      continue;
    }
    // bisect the failed step (geometric when possible)
    if (eps - current < 1e-6 * target) {
      out.reached_eps = current;
      out.error = std::string("continuation stalled at eps = ") + std::to_string(current) +
                  " (Newton: " + to_string(nr.status) + ")";
      return out;
    }
    const double mid = current > 0 ? std::sqrt(current * eps) : 0.5 * eps;
    pending.push_back(mid);
  }

  RateVector rates = assemble_rates(p, front, eps_target);
  std::vector<double> x = point;
  if (branch == Branch::Boundary) {
    x = chart_map<double>(point, target);
    // one polish in state space; the chart residual already equals the state
    // residual, so this only tightens the last digits
    FamilySystem sys{p, rates.as_doubles()};
    NewtonOptions polish = opts.newton;
    polish.max_iter = 5;
    NewtonResult nr = newton_refine(sys, x, polish);
    if (nr.status == NewtonStatus::Converged) x = nr.x;
  }
  out.state = finish_state(p, rates, std::move(x), branch, target);
  out.reached_eps = target;
  const double rscale = 1.0 + inf_norm(std::span<const double>(rates.as_doubles()));
  if (out.state.residual_norm >= opts.residual_tol * rscale) {
    out.error = "refined state misses the residual tolerance";
    return out;
  }
  out.ok = true;
  return out;
}

}  // namespace seqnet
