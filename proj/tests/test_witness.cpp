#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "seqnet/json_io.hpp"
#include "seqnet/witness.hpp"
#include "test_util.hpp"

using namespace seqnet;

namespace {

FrontRates reference_front() {
  FrontRates front;
  front.r = {Rational(2), Rational(1), Rational(6), Rational(7), Rational(1)};
  front.rn2 = 5;
  return front;
}

FrontRates alt_front() {
  FrontRates front;
  front.r = {Rational(3), Rational(6), Rational(6), Rational(18), Rational(2)};
  front.rn2 = 5;
  return front;
}

bool is_stable(const StabilityReport& rep) {
  return rep.verdict == StabilityVerdict::CertifiedStable ||
         rep.verdict == StabilityVerdict::EigenStable;
}

void check_close(std::span<const double> got, std::span<const double> want, double rel) {
  REQUIRE(got.size() == want.size());
  for (size_t i = 0; i < got.size(); ++i)
    CHECK(std::abs(got[i] - want[i]) <= rel * std::abs(want[i]));
}

}  // namespace

TEST_CASE("reference witness: ones and boundary are the stable pair") {
  WitnessOptions opts;
  opts.eps0 = *parse_rational("0.006");
  opts.max_rounds = 1;
  WitnessResult w = find_witness({6, 5}, UserSource{reference_front()}, opts);
  REQUIRE(w.bistable);
  CHECK(w.eps == *parse_rational("0.006"));
  REQUIRE(w.states.size() == 3);
  REQUIRE(w.reports.size() == 3);

  check_close(w.states[0].x, std::vector<double>(5, 1.0), 1e-12);
  check_close(w.states[1].x, std::vector<double>{1.69795, 0.382186, 12.5363, 0.028445, 54.5727},
              1e-4);
  check_close(w.states[2].x, std::vector<double>{1.92826, 0.276459, 20.0808, 0.0110718, 150.601},
              1e-4);

  CHECK(is_stable(w.reports[0]));
  CHECK_FALSE(is_stable(w.reports[1]));
  CHECK(is_stable(w.reports[2]));
  for (const SteadyState& st : w.states) {
    CHECK(st.nondegenerate);
    CHECK(st.residual_norm < 1e-10 * (1 + 13.006));
  }
}

TEST_CASE("alternate reference witness: delta joins the stable pair") {
  WitnessOptions opts;
  opts.eps0 = *parse_rational("0.06");
  opts.max_rounds = 1;
  WitnessResult w = find_witness({6, 5}, UserSource{alt_front()}, opts);
  REQUIRE(w.bistable);
  CHECK(w.region.theorem == RegionTheorem::BistabilityAlt);
  check_close(w.states[1].x,
              std::vector<double>{0.932124, 1.12282, 0.778704, 1.44839, 0.659961}, 1e-4);
  check_close(w.states[2].x,
              std::vector<double>{1.68739, 0.312906, 5.77995, 0.0248477, 51.8643}, 1e-4);
  CHECK_FALSE(is_stable(w.reports[0]));
  CHECK(is_stable(w.reports[1]));
  CHECK(is_stable(w.reports[2]));
}

TEST_CASE("canonical small case is bistable with the all-ones state stable") {
  WitnessResult w = find_witness({2, 3}, CanonicalSource{RateChoice::Bistability});
  REQUIRE(w.bistable);
  CHECK(is_stable(w.reports[0]));
  check_close(w.states[0].x, std::vector<double>(3, 1.0), 1e-12);
  int stable = 0;
  for (const auto& rep : w.reports) stable += is_stable(rep);
  CHECK(stable >= 2);
  for (const auto& st : w.states) CHECK(st.nondegenerate);
}

TEST_CASE("sampled sources work end to end") {
  WitnessResult w = find_witness({3, 5}, SampledSource{42});
  CHECK(w.bistable);
}

TEST_CASE("user rates outside the region are rejected with names") {
  FrontRates bad;
  bad.r = {Rational(1), Rational(1), Rational(1)};  // violates inflow-positivity: 1 < 2
  bad.rn2 = Rational(10);
  try {
    find_witness({2, 3}, UserSource{bad});
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("inflow-positivity") != std::string::npos);
  }
}

TEST_CASE("witness json reloads and re-verifies exactly") {
  WitnessOptions opts;
  opts.eps0 = *parse_rational("0.006");
  opts.max_rounds = 1;
  WitnessResult w = find_witness({6, 5}, UserSource{reference_front()}, opts);
  REQUIRE(w.bistable);

  nlohmann::json doc = witness_json(w);
  CHECK(doc["schema"] == "seqnet/1");
  WitnessReload reload = witness_reload(doc);
  CHECK(reload.bistable);
  REQUIRE(reload.rates.size() == 15);

  // exact fidelity: the reloaded rates satisfy the conservation equalities
  ModelParams p = reload.params;
  auto R = [&](int j) -> const Rational& { return reload.rates[j - 1]; };
  CHECK(R(11) == R(1) + R(5) + R(6));
  for (int i = 2; i <= 4; ++i) CHECK(R(10 + i) == R(i - 1) + R(i) + R(5 + i));
  CHECK(R(15) == R(4) - Rational(p.m) * R(5) + R(10));

  // numeric re-verification of every state from the document alone
  std::vector<double> rd = to_doubles(reload.rates);
  for (size_t s = 0; s < reload.states.size(); ++s) {
    std::vector<double> f = family_rhs<double>(p, rd, reload.states[s]);
    CHECK(testutil::inf_norm(f) < 1e-10 * (1 + 13.006));
    Mat<double> J = family_jacobian<double>(p, std::span<const double>(rd), reload.states[s]);
    CHECK(std::abs(testutil::lu_det(J)) > degeneracy_threshold(J));
  }
}

TEST_CASE("sweep summarizes each cell and survives bad ones") {
  std::vector<SweepCell> cells;
  for (int mm : {2, 3})
    for (int nn : {3, 5}) {
      SweepCell c;
      c.params = {mm, nn};
      c.source = CanonicalSource{RateChoice::Bistability};
      cells.push_back(c);
    }
  SweepCell bad;
  bad.params = {2, 4};  // even order is rejected per cell, not fatally
  bad.source = CanonicalSource{RateChoice::Bistability};
  cells.push_back(bad);

  auto summaries = sweep(cells, {}, 2);
  REQUIRE(summaries.size() == 5);
  for (int i = 0; i < 4; ++i) {
    CHECK(summaries[i].valid);
    CHECK(summaries[i].bistable);
    CHECK(summaries[i].states_found == 3);
    CHECK(summaries[i].stable_count >= 2);
    CHECK(summaries[i].nondegenerate_count == 3);
  }
  CHECK_FALSE(summaries[4].valid);
  CHECK_FALSE(summaries[4].error.empty());

  CHECK(sweep({}, {}, 4).empty());
}

TEST_CASE("witness options are validated") {
  WitnessOptions opts;
  opts.shrink = Rational(2);
  CHECK_THROWS_AS(find_witness({2, 3}, CanonicalSource{}, opts), std::invalid_argument);
  CHECK_THROWS_AS(find_witness({2, 4}, CanonicalSource{}), std::invalid_argument);
}
