#pragma once

#include <json.hpp>

#include "seqnet/network.hpp"
#include "seqnet/region.hpp"
#include "seqnet/sim.hpp"
#include "seqnet/stability.hpp"
#include "seqnet/witness.hpp"

// All documents carry {"schema": "seqnet/1"}. Rate constants are emitted both
// as doubles ("r") and as exact fraction strings ("r_exact") so a reloaded
// witness re-verifies bit for bit.

namespace seqnet {

inline constexpr const char* kSchema = "seqnet/1";

nlohmann::json network_json(const ReactionNetwork& net);
nlohmann::json region_json(const RegionCheck& check);
nlohmann::json report_json(const StabilityReport& report);
nlohmann::json state_json(const SteadyState& state);
nlohmann::json witness_json(const WitnessResult& result);
nlohmann::json sweep_json(const std::vector<SweepSummary>& summaries);

// Reload for re-verification; prefers "r_exact" when present.
struct WitnessReload {
  ModelParams params;
  std::vector<Rational> rates;  // full 3n
  Rational eps;
  std::vector<std::vector<double>> states;
  std::vector<std::string> branches;
  bool bistable = false;
};
WitnessReload witness_reload(const nlohmann::json& doc);

}  // namespace seqnet
