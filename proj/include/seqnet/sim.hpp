#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "seqnet/network.hpp"

namespace seqnet {

enum class TerminalKind { Converged, MaxTime, LeftDomain };

struct Terminal {
  TerminalKind kind = TerminalKind::MaxTime;
  int target_index = -1;   // which registered target was reached
  std::string diagnostic;  // set on LeftDomain
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  Terminal terminal;
};

struct IntegrateOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double t_max = 1e4;
  double target_tol = 1e-8;  // inf-norm distance that counts as converged
  double h_min = 1e-14;      // step underflow => LeftDomain
  bool record_trajectory = true;  // false keeps only the first and last points
};

// Adaptive Dormand-Prince 5(4) on the mass-action ODEs. Steps that would
// leave the positive orthant are halved; termination is early when the state
// comes within target_tol of a registered target.
Trajectory integrate(const ReactionNetwork& net, std::span<const double> rates,
                     std::span<const double> x0, const IntegrateOptions& opts = {},
                     const std::vector<std::vector<double>>& targets = {});

struct BasinCounts {
  std::vector<int> converged;  // per target
  int unresolved = 0;          // max-time or left-domain
  int samples = 0;
};

// Integrates from `samples` uniform draws in the inf-ball of the given radius
// around each target (clamped into the positive orthant) and counts which
// target each trajectory reaches. Deterministic for a fixed seed. When
// probe_index >= 0, only that target's ball is sampled (all targets still
// terminate trajectories); the other rows come back empty.
std::vector<BasinCounts> basin_probe(const ReactionNetwork& net, std::span<const double> rates,
                                     const std::vector<std::vector<double>>& targets,
                                     double radius, int samples, std::uint64_t seed,
                                     const IntegrateOptions& opts = {}, int threads = 1,
                                     int probe_index = -1);

// Header "t,x1,...,xn", one row per accepted step.
std::string trajectory_csv(const Trajectory& t);

}  // namespace seqnet
