#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "seqnet/region.hpp"
#include "seqnet/stability.hpp"
#include "seqnet/steady.hpp"

namespace seqnet {

struct WitnessOptions {
  Rational eps0 = Rational(1, 10);
  Rational shrink = Rational(1, 10);
  int max_rounds = 12;
  ContinuationOptions continuation;
};

// Rate sources for the pipeline: the canonical choices, a region sample, or
// user-provided front rates (validated against the region first).
struct CanonicalSource {
  RateChoice choice = RateChoice::Bistability;
};
struct SampledSource {
  std::uint64_t seed = 0;
};
struct UserSource {
  FrontRates front;
};
using RateSource = std::variant<CanonicalSource, SampledSource, UserSource>;

struct WitnessResult {
  ModelParams params;
  FrontRates front;
  std::optional<RateVector> rates;  // full 3n at the final eps
  Rational eps = 0;
  RegionCheck region;
  std::vector<std::pair<double, bool>> eps_trace;  // (eps, round succeeded)
  std::vector<SteadyState> states;                 // ones, delta, boundary
  std::vector<StabilityReport> reports;
  bool bistable = false;
  std::string failure;  // empty on success
};

// Runs the whole construction: validate/choose front rates, stamp the eps
// slots, substitute the inflows, continue the three branches, classify, and
// shrink eps until at least two of the three are stable and all three are
// nondegenerate. User rates failing both region checks raise
// std::invalid_argument naming the failed records.
WitnessResult find_witness(const ModelParams& p, const RateSource& source,
                           const WitnessOptions& opts = {});

struct SweepCell {
  ModelParams params;
  RateSource source;
};

struct SweepSummary {
  ModelParams params;
  bool valid = false;       // false when the cell's params are rejected
  std::string error;        // validation or pipeline failure text
  bool bistable = false;
  double eps = 0.0;
  int states_found = 0;
  int stable_count = 0;
  int nondegenerate_count = 0;
};

// Runs find_witness per cell; cells are independent and run on `threads`
// workers (env SEQNET_THREADS caps this at the CLI level). Never claims
// exhaustiveness: only the three constructed branches are probed.
std::vector<SweepSummary> sweep(const std::vector<SweepCell>& cells,
                                const WitnessOptions& opts = {}, int threads = 1);

}  // namespace seqnet
