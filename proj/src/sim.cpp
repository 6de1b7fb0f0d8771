#include "seqnet/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "seqnet/massaction.hpp"

namespace seqnet {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b6 = 11.0 / 84;
constexpr double b5 = -2187.0 / 6784;
// embedded 4th-order weights
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

// Flattened mass-action evaluator; the generic map-based path costs too much
// inside a million-step integration.
struct CompiledNet {
  struct Term {
    double rate;
    std::vector<std::pair<int, int>> reactants;  // (species index, order)
    std::vector<std::pair<int, double>> deltas;  // (species index, net change)
  };
  std::vector<Term> terms;

  CompiledNet(const ReactionNetwork& net, std::span<const double> rates) {
    for (const Reaction& rx : net.reactions()) {
      Term t;
      t.rate = rates[rx.rate_index - 1];
      for (const auto& [i, a] : rx.reactants) t.reactants.push_back({i - 1, static_cast<int>(a)});
      std::map<int, double> net_change;
      for (const auto& [i, a] : rx.reactants) net_change[i - 1] -= static_cast<double>(a);
      for (const auto& [i, b] : rx.products) net_change[i - 1] += static_cast<double>(b);
      for (const auto& [i, d] : net_change)
        if (d != 0.0) t.deltas.push_back({i, d});
      terms.push_back(std::move(t));
    }
  }

  void rhs(const std::vector<double>& x, std::vector<double>& f) const {
    std::fill(f.begin(), f.end(), 0.0);
    for (const Term& t : terms) {
      double v = t.rate;
      for (const auto& [i, a] : t.reactants)
        for (int k = 0; k < a; ++k) v *= x[i];
      for (const auto& [i, d] : t.deltas) f[i] += d * v;
    }
  }
};

int match_target(std::span<const double> x, const std::vector<std::vector<double>>& targets,
                 double tol) {
  for (size_t t = 0; t < targets.size(); ++t) {
    double dist = 0;
    for (size_t i = 0; i < x.size(); ++i)
      dist = std::max(dist, std::abs(x[i] - targets[t][i]));
    if (dist < tol) return static_cast<int>(t);
  }
  return -1;
}

}  // namespace

Trajectory integrate(const ReactionNetwork& net, std::span<const double> rates,
                     std::span<const double> x0, const IntegrateOptions& opts,
                     const std::vector<std::vector<double>>& targets) {
  const int n = net.species_count();
  if (static_cast<int>(rates.size()) != net.reaction_count())
    throw std::invalid_argument("integrate: one rate per reaction required");
  if (static_cast<int>(x0.size()) != n)
    throw std::invalid_argument("integrate: initial state has wrong dimension");
  for (double v : x0)
    if (!(v > 0)) throw std::invalid_argument("integrate: initial state must be positive");
  for (const auto& t : targets)
    if (static_cast<int>(t.size()) != n)
      throw std::invalid_argument("integrate: target has wrong dimension");

  const CompiledNet compiled(net, rates);

  Trajectory traj;
  std::vector<double> x(x0.begin(), x0.end());
  double t = 0;
  traj.times.push_back(t);
  traj.states.push_back(x);
  if (int hit = match_target(x, targets, opts.target_tol); hit >= 0) {
    traj.terminal = {TerminalKind::Converged, hit, ""};
    return traj;
  }

  std::vector<double> k1(n);
  compiled.rhs(x, k1);
  // initial step from the explicit Euler scale
  double h = opts.t_max;
  for (int i = 0; i < n; ++i) {
    const double scale = opts.atol + opts.rtol * std::abs(x[i]);
    if (k1[i] != 0) h = std::min(h, 0.1 * scale / std::abs(k1[i]));
  }
  h = std::max(h, opts.h_min);

  std::vector<double> k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), xt(n), x5(n);
  while (t < opts.t_max) {
    h = std::min(h, opts.t_max - t);
    if (h < opts.h_min) {
      traj.terminal = {TerminalKind::LeftDomain, -1,
                       "step size underflow at t = " + std::to_string(t)};
      return traj;
    }
    for (int i = 0; i < n; ++i) xt[i] = x[i] + h * a21 * k1[i];
    compiled.rhs(xt, k2);
    for (int i = 0; i < n; ++i) xt[i] = x[i] + h * (a31 * k1[i] + a32 * k2[i]);
    compiled.rhs(xt, k3);
    for (int i = 0; i < n; ++i) xt[i] = x[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    compiled.rhs(xt, k4);
    for (int i = 0; i < n; ++i)
      xt[i] = x[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    compiled.rhs(xt, k5);
    for (int i = 0; i < n; ++i)
      xt[i] = x[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    compiled.rhs(xt, k6);
    for (int i = 0; i < n; ++i)
      x5[i] = x[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    compiled.rhs(x5, k7);

    bool positive = true;
    for (int i = 0; i < n; ++i) positive = positive && x5[i] > 0;
    double err = 0;
    if (positive) {
      for (int i = 0; i < n; ++i) {
        const double y4 = x[i] + h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                      e6 * k6[i] + e7 * k7[i]);
        const double scale = opts.atol + opts.rtol * std::max(std::abs(x[i]), std::abs(x5[i]));
        err = std::max(err, std::abs(x5[i] - y4) / scale);
      }
    }
    if (!positive) {
      h *= 0.5;
      continue;
    }
    if (err > 1.0) {
      h *= std::max(0.1, 0.9 * std::pow(err, -0.25));
      continue;
    }
    // accepted
    t += h;
    x.swap(x5);
    k1.swap(k7);  // FSAL
    if (opts.record_trajectory || traj.times.size() < 2) {
      traj.times.push_back(t);
      traj.states.push_back(x);
    } else {
      traj.times.back() = t;
      traj.states.back() = x;
    }
    if (int hit = match_target(x, targets, opts.target_tol); hit >= 0) {
      traj.terminal = {TerminalKind::Converged, hit, ""};
      return traj;
    }
    const double grow = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(grow, 0.2, 5.0);
  }
  traj.terminal = {TerminalKind::MaxTime, -1, ""};
  return traj;
}

std::vector<BasinCounts> basin_probe(const ReactionNetwork& net, std::span<const double> rates,
                                     const std::vector<std::vector<double>>& targets,
                                     double radius, int samples, std::uint64_t seed,
                                     const IntegrateOptions& opts, int threads, int probe_index) {
  if (samples < 0) throw std::invalid_argument("basin_probe: samples must be >= 0");
  if (probe_index >= static_cast<int>(targets.size()))
    throw std::invalid_argument("basin_probe: probe_index out of range");
  std::vector<BasinCounts> out(targets.size());
  for (size_t t = 0; t < targets.size(); ++t) {
    out[t].converged.assign(targets.size(), 0);
    out[t].samples = (probe_index < 0 || probe_index == static_cast<int>(t)) ? samples : 0;
  }
  if (samples == 0 || targets.empty()) return out;

  // Draw all starting points up front so the workload split cannot change
  // the outcome.
  std::mt19937_64 rng(seed);
  auto uniform01 = [&]() { return std::ldexp(static_cast<double>(rng() >> 11), -53); };
  struct Job {
    size_t target;
    std::vector<double> x0;
  };
  std::vector<Job> jobs;
  for (size_t t = 0; t < targets.size(); ++t) {
    if (probe_index >= 0 && probe_index != static_cast<int>(t)) continue;
    for (int s = 0; s < samples; ++s) {
      std::vector<double> x0(targets[t].size());
      for (size_t i = 0; i < x0.size(); ++i) {
        const double offset = radius * (2.0 * uniform01() - 1.0);
        x0[i] = std::max(targets[t][i] + offset, 1e-12);
      }
      jobs.push_back({t, std::move(x0)});
    }
  }

  threads = std::max(1, std::min<int>(threads, static_cast<int>(jobs.size())));
  std::atomic<size_t> next{0};
  std::vector<int> hit(jobs.size(), -1);
  IntegrateOptions probe_opts = opts;
  probe_opts.record_trajectory = false;
  auto worker = [&]() {
    for (size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1)) {
      Trajectory traj = integrate(net, rates, jobs[i].x0, probe_opts, targets);
      hit[i] = traj.terminal.kind == TerminalKind::Converged ? traj.terminal.target_index : -1;
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (size_t i = 0; i < jobs.size(); ++i) {
    if (hit[i] >= 0)
      out[jobs[i].target].converged[hit[i]]++;
    else
      out[jobs[i].target].unresolved++;
  }
  return out;
}

std::string trajectory_csv(const Trajectory& t) {
  std::ostringstream out;
  out.precision(17);
  const size_t n = t.states.empty() ? 0 : t.states.front().size();
  out << "t";
  for (size_t i = 1; i <= n; ++i) out << ",x" << i;
  out << "\n";
  for (size_t row = 0; row < t.times.size(); ++row) {
    out << t.times[row];
    for (double v : t.states[row]) out << "," << v;
    out << "\n";
  }
  return out.str();
}

}  // namespace seqnet
