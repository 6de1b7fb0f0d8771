#include "seqnet/region.hpp"

#include <cmath>
#include <random>

namespace seqnet {

const char* to_string(IneqId id) {
  switch (id) {
    case IneqId::Distinctness: return "distinctness";
    case IneqId::InflowPositivity: return "inflow-positivity";
    case IneqId::DeltaPositivity2: return "delta-positivity-2";
    case IneqId::DeltaPositivity: return "delta-positivity";
    case IneqId::ChartPositivity2: return "chart-positivity-2";
    case IneqId::ChartPositivity: return "chart-positivity";
    case IneqId::OnesDominance: return "ones-dominance";
    case IneqId::DeltaDominance: return "delta-dominance";
  }
  return "?";
}

const char* to_string(RegionTheorem t) {
  switch (t) {
    case RegionTheorem::Multistationarity: return "multistationarity";
    case RegionTheorem::Bistability: return "bistability";
    case RegionTheorem::BistabilityAlt: return "bistability-alt";
  }
  return "?";
}

std::string InequalityRecord::label() const {
  std::string s = to_string(id);
  if (index) s += "[" + std::to_string(index) + "]";
  return s;
}

const InequalityRecord* RegionCheck::first_failed() const {
  for (const auto& rec : records)
    if (!rec.satisfied) return &rec;
  return nullptr;
}

namespace {

InequalityRecord make_record(IneqId id, int index, Rational lhs, Rational rhs,
                             Strictness strictness) {
  InequalityRecord rec;
  rec.id = id;
  rec.index = index;
  rec.lhs = std::move(lhs);
  rec.rhs = std::move(rhs);
  rec.strictness = strictness;
  switch (strictness) {
    case Strictness::Strict: rec.satisfied = rec.lhs > rec.rhs; break;
    case Strictness::NonStrict: rec.satisfied = rec.lhs >= rec.rhs; break;
    case Strictness::NotEqual: rec.satisfied = rec.lhs != rec.rhs; break;
  }
  return rec;
}

void require_positive_front(const ModelParams& p, const FrontRates& front) {
  detail::require_size(front.r.size(), static_cast<size_t>(p.n), "front rates");
  for (int i = 1; i <= p.n; ++i)
    if (front.r[i - 1] <= 0)
      throw std::invalid_argument("front rates: r" + std::to_string(i) + " must be positive");
  if (front.rn2 <= 0)
    throw std::invalid_argument("front rates: r" + std::to_string(p.n + 2) +
                                " must be positive");
}

// The inequality families shared by both region checks, appended in order.
void shared_records(const ModelParams& p, const FrontRates& front,
                    std::vector<InequalityRecord>& recs) {
  const int n = p.n;
  auto R = [&](int j) -> const Rational& { return front.r[j - 1]; };
  const Rational& rn2 = front.rn2;
  const Rational m1(p.m - 1);
  const Rational mm(p.m);

  recs.push_back(make_record(IneqId::InflowPositivity, 0, R(n - 1), mm * R(n),
                             Strictness::Strict));
  recs.push_back(make_record(IneqId::DeltaPositivity2, 0, m1 * R(1), rn2, Strictness::Strict));
  for (int i = 3; i <= n; ++i) {
    const Rational sign = (i % 2 == 0) ? Rational(1) : Rational(-1);
    recs.push_back(make_record(IneqId::DeltaPositivity, i,
                               m1 * R(1) * (R(i - 1) + sign * mm * R(n)),
                               sign * mm * (R(1) + R(n)) * rn2, Strictness::Strict));
  }
  if (n > 3) {
    recs.push_back(
        make_record(IneqId::ChartPositivity2, 0, R(1) + rn2, R(n - 2), Strictness::Strict));
    for (int i = 3; i <= n - 4; i += 2)
      recs.push_back(
          make_record(IneqId::ChartPositivity, i, R(i), R(n - 2), Strictness::Strict));
  }
}

RegionCheck finish(RegionTheorem theorem, std::vector<InequalityRecord> recs) {
  RegionCheck check;
  check.theorem = theorem;
  check.records = std::move(recs);
  check.all_satisfied = true;
  for (const auto& rec : check.records) check.all_satisfied = check.all_satisfied && rec.satisfied;
  return check;
}

}  // namespace

RegionCheck check_mss(const ModelParams& p, const FrontRates& front) {
  p.require_family();
  require_positive_front(p, front);
  auto R = [&](int j) -> const Rational& { return front.r[j - 1]; };
  std::vector<InequalityRecord> recs;
  recs.push_back(make_record(IneqId::Distinctness, 0, (R(1) + R(p.n)) * front.rn2,
                             Rational(p.m - 1) * R(1) * R(p.n), Strictness::NotEqual));
  shared_records(p, front, recs);
  return finish(RegionTheorem::Multistationarity, std::move(recs));
}

RegionCheck check_bistability(const ModelParams& p, const FrontRates& front, bool alt) {
  p.require_family();
  require_positive_front(p, front);
  auto R = [&](int j) -> const Rational& { return front.r[j - 1]; };
  const Rational lhs = (R(1) + R(p.n)) * front.rn2;
  const Rational rhs = Rational(p.m - 1) * R(1) * R(p.n);
  std::vector<InequalityRecord> recs;
  if (alt)
    recs.push_back(make_record(IneqId::DeltaDominance, 0, rhs, lhs, Strictness::Strict));
  else
    recs.push_back(make_record(IneqId::OnesDominance, 0, lhs, rhs, Strictness::Strict));
  shared_records(p, front, recs);
  return finish(alt ? RegionTheorem::BistabilityAlt : RegionTheorem::Bistability,
                std::move(recs));
}

FrontRates canonical_rates(const ModelParams& p, RateChoice mode) {
  p.require_family();
  const int n = p.n;
  FrontRates front;
  front.r.assign(n, Rational(0));
  if (mode == RateChoice::BistabilityAlt) {
    if (n == 3) {
      front.r = {Rational(3), Rational(3 * p.m), Rational(2)};
    } else {
      front.r[0] = 3;
      for (int i = 2; i <= n - 3; i += 2) front.r[i - 1] = p.m;
      for (int i = 3; i <= n - 4; i += 2) front.r[i - 1] = p.m + 1;
      front.r[n - 3] = p.m;
      front.r[n - 2] = 3 * p.m;
      front.r[n - 1] = 2;
    }
    front.rn2 = p.m - 1;
    return front;
  }
  // Mss and Bistability share the same explicit point.
  if (n == 3) {
    front.r = {Rational(2), Rational(p.m + 1), Rational(1)};
  } else {
    front.r[0] = 2;
    for (int i = 2; i <= n - 3; i += 2) front.r[i - 1] = 1;
    for (int i = 3; i <= n - 4; i += 2) front.r[i - 1] = p.m + 1;
    front.r[n - 3] = p.m;
    front.r[n - 2] = p.m + 1;
    front.r[n - 1] = 1;
  }
  front.rn2 = p.m - 1;
  return front;
}

bool region_membership(const ModelParams& p, const FrontRates& front) {
  p.require_family();
  detail::require_size(front.r.size(), static_cast<size_t>(p.n), "front rates");
  for (const Rational& v : front.r)
    if (v <= 0) return false;
  if (front.rn2 <= 0) return false;
  const int n = p.n;
  auto R = [&](int j) -> const Rational& { return front.r[j - 1]; };
  const Rational& rn2 = front.rn2;
  const Rational m1(p.m - 1);
  const Rational mm(p.m);

  if (!(rn2 < m1 * R(1))) return false;
  // r_n ((m-1) r_1 - rn2) < r_1 rn2, the cross-multiplied dominance bound
  if (!(R(n) * (m1 * R(1) - rn2) < R(1) * rn2)) return false;
  if (!(R(n - 1) > mm * R(n))) return false;
  if (n == 3) return true;
  const Rational lower = mm * ((R(1) + R(n)) * rn2 - m1 * R(1) * R(n)) / (m1 * R(1));
  if (!(lower < R(n - 2) && R(n - 2) < R(1) + rn2)) return false;
  for (int i = 3; i <= n - 4; i += 2)
    if (!(R(i) > R(n - 2))) return false;
  return true;
}

namespace {

// Engine-independent uniform draw so seeded samples are stable across
// standard libraries.
double uniform01(std::mt19937_64& rng) {
  return std::ldexp(static_cast<double>(rng() >> 11), -53);
}

double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  double u;
  do {
    u = uniform01(rng);
  } while (u == 0.0);
  return lo + (hi - lo) * u;
}

}  // namespace

FrontRates sample_region(const ModelParams& p, std::uint64_t seed) {
  p.require_family();
  const int n = p.n;
  std::mt19937_64 rng(seed);
  std::vector<double> r(n, 0.0);
  const double r1 = uniform_in(rng, 0.1, 10.0);
  r[0] = r1;
  const double rn2 = uniform_in(rng, 0.0, (p.m - 1) * r1);
  // dominance bound on the production rate (for n = 3 this is the constraint
  // the triangular display leaves implicit)
  const double rn_hi = r1 * rn2 / ((p.m - 1) * r1 - rn2);
  r[n - 1] = uniform_in(rng, 0.0, rn_hi);
  r[n - 2] = uniform_in(rng, p.m * r[n - 1], p.m * r[n - 1] + 10.0);
  if (n > 3) {
    const double lower =
        p.m * ((r1 + r[n - 1]) * rn2 - (p.m - 1) * r1 * r[n - 1]) / ((p.m - 1) * r1);
    r[n - 3] = uniform_in(rng, lower, r1 + rn2);
    for (int i = 3; i <= n - 4; i += 2) r[i - 1] = uniform_in(rng, r[n - 3], r[n - 3] + 10.0);
    for (int i = 2; i <= n - 3; i += 2) r[i - 1] = uniform_in(rng, 0.1, 10.0);
  }
  FrontRates front;
  front.r = to_rationals(r);
  front.rn2 = rational_of(rn2);
  return front;
}

}  // namespace seqnet
