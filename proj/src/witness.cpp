#include "seqnet/witness.hpp"

#include <atomic>
#include <sstream>
#include <thread>

namespace seqnet {

namespace {

FrontRates resolve_front(const ModelParams& p, const RateSource& source, RegionCheck* region) {
  if (const auto* canonical = std::get_if<CanonicalSource>(&source)) {
    FrontRates front = canonical_rates(p, canonical->choice);
    *region = canonical->choice == RateChoice::Mss
                  ? check_mss(p, front)
                  : check_bistability(p, front, canonical->choice == RateChoice::BistabilityAlt);
    return front;
  }
  if (const auto* sampled = std::get_if<SampledSource>(&source)) {
    FrontRates front = sample_region(p, sampled->seed);
    *region = check_bistability(p, front, false);
    return front;
  }
  const FrontRates& front = std::get<UserSource>(source).front;
  // Users may sit on either side of the dominance split; try both.
  RegionCheck standard = check_bistability(p, front, false);
  if (standard.all_satisfied) {
    *region = std::move(standard);
    return front;
  }
  RegionCheck alt = check_bistability(p, front, true);
  if (alt.all_satisfied) {
    *region = std::move(alt);
    return front;
  }
  std::ostringstream msg;
  msg << "rates are outside the bistability region; failed records:";
  for (const auto& rec : standard.records)
    if (!rec.satisfied) msg << " " << rec.label();
  msg << " (alt mode:";
  for (const auto& rec : alt.records)
    if (!rec.satisfied) msg << " " << rec.label();
  msg << ")";
  throw std::invalid_argument(msg.str());
}

int stable_count(const std::vector<StabilityReport>& reports) {
  int count = 0;
  for (const auto& rep : reports)
    count += rep.verdict == StabilityVerdict::CertifiedStable ||
             rep.verdict == StabilityVerdict::EigenStable;
  return count;
}

}  // namespace

WitnessResult find_witness(const ModelParams& p, const RateSource& source,
                           const WitnessOptions& opts) {
  p.require_family();
  if (opts.eps0 <= 0 || opts.shrink <= 0 || opts.shrink >= 1 || opts.max_rounds < 1)
    throw std::invalid_argument("witness: need eps0 > 0, 0 < shrink < 1, max_rounds >= 1");

  WitnessResult result;
  result.params = p;
  result.front = resolve_front(p, source, &result.region);

  Rational eps = opts.eps0;
  for (int round = 0; round < opts.max_rounds; ++round, eps *= opts.shrink) {
    std::vector<SteadyState> states;
    std::vector<StabilityReport> reports;
    bool round_ok = true;
    std::string round_error;
    for (Branch branch : {Branch::AllOnes, Branch::Delta, Branch::Boundary}) {
      ContinuationResult cont = continue_in_eps(p, result.front, branch, eps, opts.continuation);
      if (!cont.ok) {
        round_ok = false;
        round_error = std::string(to_string(branch)) + " branch: " + cont.error;
        break;
      }
      RateVector rates = assemble_rates(p, result.front, eps);
      reports.push_back(classify(p, rates, cont.state.x));
      states.push_back(std::move(cont.state));
    }
    bool nondeg = round_ok;
    for (const auto& st : states) nondeg = nondeg && st.nondegenerate;
    const bool bistable = round_ok && nondeg && stable_count(reports) >= 2;
    result.eps_trace.push_back({to_double(eps), bistable});
    if (bistable) {
      result.rates = assemble_rates(p, result.front, eps);
      result.eps = eps;
      result.states = std::move(states);
      result.reports = std::move(reports);
      result.bistable = true;
      result.failure.clear();
      return result;
    }
    if (!round_ok)
      result.failure = round_error;
    else if (!nondeg)
      result.failure = "a state fell below the degeneracy threshold";
    else
      result.failure = "fewer than two stable states";
    // keep the last full round's data for diagnostics
    if (round_ok) {
      result.rates = assemble_rates(p, result.front, eps);
      result.eps = eps;
      result.states = std::move(states);
      result.reports = std::move(reports);
    }
  }
  result.failure = "eps schedule exhausted: " + result.failure;
  return result;
}

std::vector<SweepSummary> sweep(const std::vector<SweepCell>& cells, const WitnessOptions& opts,
                                int threads) {
  std::vector<SweepSummary> out(cells.size());
  if (cells.empty()) return out;
  threads = std::max(1, std::min<int>(threads, static_cast<int>(cells.size())));

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
      SweepSummary& s = out[i];
      s.params = cells[i].params;
      try {
        WitnessResult w = find_witness(cells[i].params, cells[i].source, opts);
        s.valid = true;
        s.bistable = w.bistable;
        s.eps = to_double(w.eps);
        s.states_found = static_cast<int>(w.states.size());
        s.stable_count = stable_count(w.reports);
        for (const auto& st : w.states) s.nondegenerate_count += st.nondegenerate;
        s.error = w.failure;
      } catch (const std::exception& e) {
        s.valid = false;
        s.error = e.what();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace seqnet
