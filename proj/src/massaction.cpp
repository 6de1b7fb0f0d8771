#include "seqnet/massaction.hpp"

#include <algorithm>
#include <cmath>

namespace seqnet {

void ModelParams::require_general() const {
  if (m < 1 || n < 2)
    throw std::invalid_argument("params: need m >= 1 and n >= 2, got m=" + std::to_string(m) +
                                ", n=" + std::to_string(n));
}

void ModelParams::require_family() const {
  if (m < 2 || n < 3 || n % 2 == 0)
    throw std::invalid_argument("params: need m >= 2 and odd n >= 3, got m=" + std::to_string(m) +
                                ", n=" + std::to_string(n));
}

std::vector<int> eps_slots(int n) {
  std::vector<int> slots;
  slots.push_back(n + 1);
  for (int i = 3; i <= n; ++i) slots.push_back(n + i);
  return slots;
}

RateVector::RateVector(int n, std::vector<Rational> values, RateMode mode)
    : n_(n), v_(std::move(values)), mode_(mode) {
  if (n_ < 2) throw std::invalid_argument("rate vector: n must be >= 2");
  detail::require_size(v_.size(), 3 * static_cast<size_t>(n_), "rate vector");
  const std::vector<int> eps = eps_slots(n_);
  auto is_eps = [&](int j) { return std::find(eps.begin(), eps.end(), j) != eps.end(); };
  for (int j = 1; j <= 3 * n_; ++j) {
    const Rational& r = v_[j - 1];
    if (r < 0 || (r == 0 && !is_eps(j)))
      throw std::invalid_argument("rate vector: r" + std::to_string(j) + " must be positive");
  }
}

const Rational& RateVector::at(int j) const {
  if (j < 1 || j > 3 * n_)
    throw std::invalid_argument("rate vector: index r" + std::to_string(j) + " out of range");
  return v_[j - 1];
}

std::vector<double> RateVector::as_doubles() const { return to_doubles(v_); }

std::vector<Rational> stamped_front(const ModelParams& p, const FrontRates& front,
                                    const Rational& eps) {
  p.require_family();
  detail::require_size(front.r.size(), static_cast<size_t>(p.n), "front rates");
  if (eps < 0) throw std::invalid_argument("eps must be nonnegative");
  std::vector<Rational> r2n(2 * static_cast<size_t>(p.n), Rational(0));
  for (int i = 1; i <= p.n; ++i) r2n[i - 1] = front.r[i - 1];
  r2n[p.n + 1] = front.rn2;  // slot n+2
  for (int j : eps_slots(p.n)) r2n[j - 1] = eps;
  return r2n;
}

RateVector conservation_substitute(const ModelParams& p, std::span<const Rational> front2n) {
  p.require_family();
  const int n = p.n;
  detail::require_size(front2n.size(), 2 * static_cast<size_t>(n), "front rates");
  const std::vector<int> eps = eps_slots(n);
  auto is_eps = [&](int j) { return std::find(eps.begin(), eps.end(), j) != eps.end(); };
  auto R = [&](int j) -> const Rational& { return front2n[j - 1]; };
  for (int j = 1; j <= 2 * n; ++j) {
    if (R(j) < 0 || (R(j) == 0 && !is_eps(j)))
      throw std::invalid_argument("conservation substitution: r" + std::to_string(j) +
                                  " must be positive");
  }
  std::vector<Rational> full(front2n.begin(), front2n.end());
  full.resize(3 * static_cast<size_t>(n));
  full[2 * n] = R(1) + R(n) + R(n + 1);
  for (int i = 2; i <= n - 1; ++i) full[2 * n + i - 1] = R(i - 1) + R(i) + R(n + i);
  full[3 * n - 1] = R(n - 1) - Rational(p.m) * R(n) + R(2 * n);
  if (full[3 * n - 1] <= 0)
    throw std::invalid_argument(
        "conservation substitution: r" + std::to_string(3 * n) + " = r" + std::to_string(n - 1) +
        " - m*r" + std::to_string(n) + " + r" + std::to_string(2 * n) + " = " +
        to_string(full[3 * n - 1]) + " is not positive");
  // The other inflows are sums of positive front rates, but keep the guard;
  // submitting all-zero eps slots must still yield positive inflows.
  for (int i = 1; i <= n - 1; ++i)
    if (full[2 * n + i - 1] <= 0)
      throw std::invalid_argument("conservation substitution: r" + std::to_string(2 * n + i) +
                                  " is not positive");
  return RateVector(n, std::move(full), RateMode::ConservationSubstituted);
}

RateVector assemble_rates(const ModelParams& p, const FrontRates& front, const Rational& eps) {
  return conservation_substitute(p, stamped_front(p, front, eps));
}

// ---------------------------------------------------------------------------

std::vector<double> ode_rhs(const ReactionNetwork& net, std::span<const double> rates,
                            std::span<const double> x) {
  detail::require_size(rates.size(), static_cast<size_t>(net.reaction_count()), "rates");
  detail::require_size(x.size(), static_cast<size_t>(net.species_count()), "state");
  std::vector<double> f(net.species_count(), 0.0);
  for (const Reaction& rx : net.reactions()) {
    double v = rates[rx.rate_index - 1];
    for (const auto& [i, a] : rx.reactants) v *= std::pow(x[i - 1], static_cast<double>(a));
    for (const auto& [i, a] : rx.reactants) f[i - 1] -= static_cast<double>(a) * v;
    for (const auto& [i, b] : rx.products) f[i - 1] += static_cast<double>(b) * v;
  }
  return f;
}

Mat<double> ode_jacobian(const ReactionNetwork& net, std::span<const double> rates,
                         std::span<const double> x) {
  detail::require_size(rates.size(), static_cast<size_t>(net.reaction_count()), "rates");
  detail::require_size(x.size(), static_cast<size_t>(net.species_count()), "state");
  const int s = net.species_count();
  Mat<double> J(s, s);
  for (const Reaction& rx : net.reactions()) {
    for (const auto& [l, al] : rx.reactants) {
      // d(v_j)/dx_l = r_j * a_l * x_l^{a_l - 1} * prod_{i != l} x_i^{a_i}
      double dv = rates[rx.rate_index - 1] * static_cast<double>(al) *
                  std::pow(x[l - 1], static_cast<double>(al - 1));
      for (const auto& [i, a] : rx.reactants)
        if (i != l) dv *= std::pow(x[i - 1], static_cast<double>(a));
      for (const auto& [i, a] : rx.reactants) J(i - 1, l - 1) -= static_cast<double>(a) * dv;
      for (const auto& [i, b] : rx.products) J(i - 1, l - 1) += static_cast<double>(b) * dv;
    }
  }
  return J;
}

}  // namespace seqnet
