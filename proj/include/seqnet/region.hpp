#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seqnet/massaction.hpp"

namespace seqnet {

// Inequalities named by what they guarantee.
//   Distinctness       (r1+rn) rn2 != (m-1) r1 rn   - separates the interior pair
//   InflowPositivity   r_{n-1} > m rn               - keeps the last inflow positive
//   DeltaPositivity2   (m-1) r1 > rn2               - second delta coordinate
//   DeltaPositivity(i) (m-1) r1 (r_{i-1} + (-1)^i m rn) > (-1)^i m (r1+rn) rn2
//   ChartPositivity2   r1 + rn2 > r_{n-2}           - second chart coordinate
//   ChartPositivity(i) r_i > r_{n-2}, i = 3,5,...,n-4
//   OnesDominance      (r1+rn) rn2 > (m-1) r1 rn    - certifies (1,...,1)
//   DeltaDominance     (r1+rn) rn2 < (m-1) r1 rn    - certifies the delta state
enum class IneqId {
  Distinctness,
  InflowPositivity,
  DeltaPositivity2,
  DeltaPositivity,
  ChartPositivity2,
  ChartPositivity,
  OnesDominance,
  DeltaDominance,
};
const char* to_string(IneqId id);

enum class Strictness { Strict, NonStrict, NotEqual };

struct InequalityRecord {
  IneqId id{};
  int index = 0;  // family member for the indexed ids, else 0
  Rational lhs;
  Rational rhs;
  Strictness strictness = Strictness::Strict;
  bool satisfied = false;

  std::string label() const;  // e.g. "delta-positivity[4]"
};

enum class RegionTheorem { Multistationarity, Bistability, BistabilityAlt };
const char* to_string(RegionTheorem t);

struct RegionCheck {
  RegionTheorem theorem{};
  std::vector<InequalityRecord> records;
  bool all_satisfied = false;

  const InequalityRecord* first_failed() const;
};

// Multistationarity region: Distinctness, InflowPositivity, DeltaPositivity2,
// DeltaPositivity(3..n), and for n > 3 also ChartPositivity2 and
// ChartPositivity(3,5,...,n-4). Exact rational evaluation.
RegionCheck check_mss(const ModelParams& p, const FrontRates& front);

// Bistability region: Distinctness replaced by the strict OnesDominance
// (or DeltaDominance when alt is set).
RegionCheck check_bistability(const ModelParams& p, const FrontRates& front, bool alt = false);

enum class RateChoice { Mss, Bistability, BistabilityAlt };

// The explicit rate choices. Mss and Bistability share one vector:
//   n = 3:  r = (2, m+1, 1), rn2 = m-1
//   n > 3:  r1 = 2, evens r2..r_{n-3} = 1, odds r3..r_{n-4} = m+1,
//           r_{n-2} = m, r_{n-1} = m+1, rn = 1, rn2 = m-1.
// BistabilityAlt lands on the opposite side of the dominance split:
//   n = 3:  r = (3, 3m, 2), rn2 = m-1
//   n > 3:  r1 = 3, evens = m, odds = m+1, r_{n-2} = m, r_{n-1} = 3m,
//           rn = 2, rn2 = m-1.
FrontRates canonical_rates(const ModelParams& p, RateChoice mode);

// Membership in the triangular description of the bistability region
// (the sequential bounds that sample_region draws from). Equivalent to
// check_bistability; the equivalence is exercised by tests.
bool region_membership(const ModelParams& p, const FrontRates& front);

// Draws a point of the region, constraint by constraint:
//   r1 ~ U[0.1, 10];  rn2 ~ U(0, (m-1) r1);
//   rn ~ U(0, r1 rn2 / ((m-1) r1 - rn2));
//   r_{n-1} ~ U(m rn, m rn + 10);
//   r_{n-2} ~ U(m ((r1+rn) rn2 - (m-1) r1 rn) / ((m-1) r1), r1 + rn2);
//   r_i ~ U(r_{n-2}, r_{n-2} + 10) for i = 3,5,...,n-4;
//   remaining even slots ~ U[0.1, 10].
// (For n = 3 the last three families are empty and r2 ~ U(m r3, m r3 + 10).)
// Deterministic for a fixed seed; the output always passes check_bistability.
FrontRates sample_region(const ModelParams& p, std::uint64_t seed);

}  // namespace seqnet
