#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "seqnet/massaction.hpp"
#include "seqnet/network.hpp"
#include "test_util.hpp"

using namespace seqnet;
using testutil::Rng;

namespace {

// The reference instance used throughout: m = 6, n = 5,
// (r1..r5) = (2,1,6,7,1), rn2 = 5, eps = 0.006.
FrontRates reference_front() {
  FrontRates front;
  front.r = {Rational(2), Rational(1), Rational(6), Rational(7), Rational(1)};
  front.rn2 = 5;
  return front;
}

// positives with the last-inflow slack r_{n-1} > m r_n that every
// substituted vector needs
inline std::vector<double> front2n_positives(Rng& rng, const ModelParams& p) {
  std::vector<double> v(2 * p.n);
  for (auto& x : v) x = rng.uniform(0.2, 4.0);
  v[p.n - 2] = p.m * v[p.n - 1] + rng.uniform(0.2, 2.0);
  return v;
}

const ModelParams kRef{6, 5};

}  // namespace

TEST_CASE("eps slots are the dropped outflows") {
  CHECK(eps_slots(3) == std::vector<int>{4, 6});
  CHECK(eps_slots(5) == std::vector<int>{6, 8, 9, 10});
}

TEST_CASE("conservation substitution reproduces the reference inflows") {
  RateVector rates = assemble_rates(kRef, reference_front(), *parse_rational("0.006"));
  CHECK(rates.at(11) == *parse_rational("3.006"));
  CHECK(rates.at(12) == Rational(8));
  CHECK(rates.at(13) == *parse_rational("7.006"));
  CHECK(rates.at(14) == *parse_rational("13.006"));
  CHECK(rates.at(15) == *parse_rational("1.006"));
  CHECK(rates.mode() == RateMode::ConservationSubstituted);
}

TEST_CASE("the all-ones point is an exact root after substitution") {
  Rng rng(7);
  for (auto [m, n] : {std::pair{2, 3}, {3, 5}, {5, 7}}) {
    ModelParams p{m, n};
    std::vector<Rational> front2n = to_rationals(front2n_positives(rng, p));
    RateVector rates = conservation_substitute(p, front2n);
    std::vector<Rational> ones(n, Rational(1));
    for (const Rational& fi : family_rhs<Rational>(p, rates.values(), ones)) CHECK(fi == 0);
  }
}

TEST_CASE("a non-positive derived inflow names the violated equality") {
  ModelParams p{2, 3};
  // r2 = 1, r3 = 1, r6 = 0 forces r9 = r2 - 2 r3 + r6 = -1
  std::vector<Rational> front2n = {Rational(1), Rational(1), Rational(1),
                                   Rational(0), Rational(1), Rational(0)};
  try {
    conservation_substitute(p, front2n);
    FAIL("expected a violation");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("r9") != std::string::npos);
  }
}

TEST_CASE("reference system vanishes at the all-ones state") {
  ReactionNetwork net = fully_open_extension(build_sequestration(6, 5));
  RateVector rates = assemble_rates(kRef, reference_front(), *parse_rational("0.006"));
  std::vector<double> x(5, 1.0);
  std::vector<double> f = ode_rhs(net, rates.as_doubles(), x);
  for (double fi : f) CHECK(std::abs(fi) < 1e-12);
}

TEST_CASE("zero rates freeze the dynamics") {
  ReactionNetwork net = fully_open_extension(build_sequestration(2, 3));
  std::vector<double> zeros(9, 0.0), x{0.5, 2.0, 3.0};
  for (double fi : ode_rhs(net, zeros, x)) CHECK(fi == 0.0);
}

TEST_CASE("hand-evaluated unit-rate system") {
  // all rates and concentrations 1 on the open K(2,3):
  // f1 = -1 -1 -1 +1 = -2, f2 = -1 -1 -1 +1 = -2, f3 = -1 +2 -1 +1 = 1
  ReactionNetwork net = fully_open_extension(build_sequestration(2, 3));
  std::vector<double> r(9, 1.0), x(3, 1.0);
  std::vector<double> f = ode_rhs(net, r, x);
  CHECK(f[0] == doctest::Approx(-2).epsilon(1e-14));
  CHECK(f[1] == doctest::Approx(-2).epsilon(1e-14));
  CHECK(f[2] == doctest::Approx(1).epsilon(1e-14));
}

TEST_CASE("generic and family paths agree") {
  Rng rng(11);
  for (auto [m, n] : {std::pair{2, 3}, {6, 5}, {4, 7}}) {
    ModelParams p{m, n};
    ReactionNetwork net = fully_open_extension(build_sequestration(m, n));
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> r = rng.positives(3 * n);
      std::vector<double> x = rng.positives(n);
      std::vector<double> fg = ode_rhs(net, r, x);
      std::vector<double> ff = family_rhs<double>(p, r, x);
      for (int i = 0; i < n; ++i) CHECK(fg[i] == doctest::Approx(ff[i]).epsilon(1e-13));
      Mat<double> Jg = ode_jacobian(net, r, x);
      Mat<double> Jf = family_jacobian<double>(p, std::span<const double>(r), x);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) CHECK(Jg(i, j) == doctest::Approx(Jf(i, j)).epsilon(1e-13));
    }
  }
}

TEST_CASE("jacobian corners and band structure") {
  Rng rng(13);
  for (auto [m, n] : {std::pair{2, 3}, {6, 5}, {3, 9}}) {
    ModelParams p{m, n};
    std::vector<double> r = rng.positives(3 * n);
    std::vector<double> x = rng.positives(n);
    Mat<double> J = family_jacobian<double>(p, std::span<const double>(r), x);
    CHECK(J(n - 1, 0) == doctest::Approx(m * r[n - 1]).epsilon(1e-14));
    CHECK(J(0, n - 1) == 0.0);
    CHECK(J(0, 0) == doctest::Approx(-r[0] * x[1] - r[n - 1] - r[n]).epsilon(1e-14));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (std::abs(i - j) > 1 && !(i == n - 1 && j == 0)) CHECK(J(i, j) == 0.0);
  }
}

TEST_CASE("analytic jacobians match finite differences") {
  Rng rng(17);
  ReactionNetwork net = parse_network("2 X1 + X2 -> 3 X3 ; r1\nX3 -> X1 ; r2\n0 -> X2 ; r3\n");
  std::vector<double> r = rng.positives(3);
  std::vector<double> x = rng.positives(3);
  Mat<double> J = ode_jacobian(net, r, x);
  Mat<double> F = testutil::fd_jacobian(
      [&](const std::vector<double>& xx) { return ode_rhs(net, r, xx); }, x);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(std::abs(J(i, j) - F(i, j)) <= 1e-6 * std::max(1.0, testutil::max_abs(J)));
}

TEST_CASE("chart map fixes the interior and folds the last pair") {
  std::vector<double> ones(4, 1.0);
  std::vector<double> x = chart_map<double>(ones, 1.0);
  for (double xi : x) CHECK(xi == 1.0);

  std::vector<double> y{2.5, 0.1, 70.0, 13.0 / 7.0, 3.0};
  std::vector<double> mapped = chart_map<double>(y, 0.006);
  CHECK(mapped[3] == doctest::Approx(0.006 * (13.0 / 7.0) / 3.0).epsilon(1e-14));
  CHECK(mapped[4] == doctest::Approx(500.0).epsilon(1e-14));

  CHECK_THROWS_AS(chart_map<double>(std::vector<double>{1, 1, 0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(chart_map<double>(y, 0.0), std::invalid_argument);
}

TEST_CASE("chart map jacobian: finite differences and determinant") {
  Rng rng(19);
  std::vector<double> y = rng.positives(5, 0.5, 3.0);
  const double c = 0.37;
  Mat<double> J = chart_map_jacobian<double>(y, c);
  Mat<double> F = testutil::fd_jacobian(
      [&](const std::vector<double>& yy) { return chart_map<double>(yy, c); }, y, 1e-7);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(std::abs(J(i, j) - F(i, j)) <= 1e-6);
  // block-triangular determinant: (c/y_n) * (1/c) = 1/y_n
  CHECK(testutil::lu_det(J) == doctest::Approx(1.0 / y[4]).epsilon(1e-10));
}

TEST_CASE("chart system is the substituted system composed with the chart") {
  Rng rng(23);
  for (auto [m, n] : {std::pair{2, 3}, {6, 5}, {3, 7}}) {
    ModelParams p{m, n};
    for (int rep = 0; rep < 10; ++rep) {
      std::vector<double> front2n = front2n_positives(rng, p);
      std::vector<double> y = rng.positives(n, 0.5, 3.0);
      const double c = front2n[2 * n - 1];

      std::vector<Rational> front2nq = to_rationals(front2n);
      RateVector full = conservation_substitute(p, front2nq);
      std::vector<double> x = chart_map<double>(y, c);
      std::vector<double> direct = family_rhs<double>(p, full.as_doubles(), x);
      std::vector<double> composed = chart_rhs<double>(p, front2n, y);
      for (int i = 0; i < n; ++i)
        CHECK(std::abs(direct[i] - composed[i]) <=
              1e-12 * std::max(1.0, testutil::inf_norm(direct)));

      // chain rule against the state-space jacobian
      std::vector<double> fulld = full.as_doubles();
      Mat<double> lhs = chart_jacobian<double>(p, std::span<const double>(front2n), y);
      Mat<double> rhs = matmul(family_jacobian<double>(p, std::span<const double>(fulld), x),
                               chart_map_jacobian<double>(y, c));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          CHECK(std::abs(lhs(i, j) - rhs(i, j)) <= 1e-12 * std::max(1.0, testutil::max_abs(rhs)));

      // and against finite differences
      Mat<double> F = testutil::fd_jacobian(
          [&](const std::vector<double>& yy) { return chart_rhs<double>(p, front2n, yy); }, y);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          CHECK(std::abs(lhs(i, j) - F(i, j)) <= 1e-6 * std::max(1.0, testutil::max_abs(lhs)));
    }
  }
}

TEST_CASE("zero eps slots collapse the chart system to its polynomial limit") {
  Rng rng(29);
  for (auto [m, n] : {std::pair{2, 3}, {6, 5}, {5, 9}}) {
    ModelParams p{m, n};
    for (int rep = 0; rep < 10; ++rep) {
      std::vector<double> r = rng.positives(n);
      const double rn2 = rng.uniform(0.2, 4.0);
      std::vector<double> front2n(2 * n, 0.0);
      for (int i = 0; i < n; ++i) front2n[i] = r[i];
      front2n[n + 1] = rn2;
      std::vector<double> y = rng.positives(n, 0.5, 3.0);
      std::vector<double> a = chart_rhs<double>(p, front2n, y);
      std::vector<double> b = chart_limit_rhs<double>(p, r, rn2, y);
      for (int i = 0; i < n; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-13));

      Mat<double> Ja = chart_jacobian<double>(p, std::span<const double>(front2n), y);
      Mat<double> Jb = chart_limit_jacobian<double>(p, std::span<const double>(r), rn2, y);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) CHECK(Ja(i, j) == doctest::Approx(Jb(i, j)).epsilon(1e-13));

      // closed-form determinant, negative at positive points
      const double det = chart_limit_det<double>(p, std::span<const double>(r), rn2, y);
      CHECK(det < 0);
      CHECK(det == doctest::Approx(testutil::lu_det(Jb)).epsilon(1e-9));
    }
  }
}

TEST_CASE("order-three chart limit in closed form") {
  ModelParams p{2, 3};
  std::vector<double> r{2, 3, 1};
  const double rn2 = 1;
  std::vector<double> xi{3, 2, 1};  // the canonical root at m = 2
  std::vector<double> g = chart_limit_rhs<double>(p, r, rn2, xi);
  for (double gi : g) CHECK(std::abs(gi) < 1e-12);
  // det is -r2 r3 everywhere
  Rng rng(31);
  std::vector<double> y = rng.positives(3);
  CHECK(chart_limit_det<double>(p, std::span<const double>(r), rn2, y) ==
        doctest::Approx(-3.0).epsilon(1e-14));
}

TEST_CASE("alternating species sum collapses under zero eps slots") {
  // sum_i (-1)^{i-1} f_i = (m-1) r_n x_1 + rn2 x_2 - (m-1) r_n - rn2
  Rng rng(37);
  for (auto [m, n] : {std::pair{2, 3}, {6, 5}, {4, 9}}) {
    ModelParams p{m, n};
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> draw(2 * n, 0.0);
      for (int i = 1; i <= n; ++i) draw[i - 1] = rng.uniform(0.2, 4.0);
      draw[n - 2] = m * draw[n - 1] + rng.uniform(0.2, 2.0);
      draw[n + 1] = rng.uniform(0.2, 4.0);
      std::vector<Rational> front2n = to_rationals(draw);
      RateVector rates = conservation_substitute(p, front2n);
      std::vector<double> x = rng.positives(n);
      std::vector<double> f = family_rhs<double>(p, rates.as_doubles(), x);
      double alt = 0;
      for (int i = 0; i < n; ++i) alt += (i % 2 == 0 ? 1.0 : -1.0) * f[i];
      const double rn = to_double(front2n[n - 1]);
      const double rn2 = to_double(front2n[n + 1]);
      const double expected = (m - 1) * rn * x[0] + rn2 * x[1] - (m - 1) * rn - rn2;
      CHECK(std::abs(alt - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST_CASE("dimension mismatches are rejected") {
  ModelParams p{2, 3};
  std::vector<double> r(9, 1.0), x(2, 1.0);
  CHECK_THROWS_AS(family_rhs<double>(p, r, x), std::invalid_argument);
  ReactionNetwork net = fully_open_extension(build_sequestration(2, 3));
  std::vector<double> bad_rates(5, 1.0), good_x(3, 1.0);
  CHECK_THROWS_AS(ode_rhs(net, bad_rates, good_x), std::invalid_argument);
}
