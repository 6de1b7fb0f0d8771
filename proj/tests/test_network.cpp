#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "seqnet/network.hpp"

using namespace seqnet;

TEST_CASE("pair reactions come first, production last") {
  ReactionNetwork net = build_sequestration(2, 2);
  REQUIRE(net.reaction_count() == 2);
  CHECK(net.reactions()[0].reactants == std::map<int, long long>{{1, 1}, {2, 1}});
  CHECK(net.reactions()[0].products.empty());
  CHECK(net.reactions()[1].reactants == std::map<int, long long>{{1, 1}});
  CHECK(net.reactions()[1].products == std::map<int, long long>{{2, 2}});
  CHECK(net.tag().has_value());
  CHECK(net.tag()->m == 2);
  CHECK(net.tag()->n == 2);
}

TEST_CASE("smallest admissible network") {
  ReactionNetwork net = build_sequestration(1, 2);
  REQUIRE(net.reaction_count() == 2);
  CHECK(net.reactions()[1].products == std::map<int, long long>{{2, 1}});
}

TEST_CASE("order five with production factor six") {
  ReactionNetwork net = build_sequestration(6, 5);
  REQUIRE(net.reaction_count() == 5);
  // production reaction X1 -> 6 X5 carries the last pair-free slot
  const Reaction& prod = net.reactions()[4];
  CHECK(prod.reactants == std::map<int, long long>{{1, 1}});
  CHECK(prod.products == std::map<int, long long>{{5, 6}});
  for (int j = 1; j <= 4; ++j) {
    CHECK(net.reactions()[j - 1].reactants ==
          std::map<int, long long>{{j, 1}, {j + 1, 1}});
  }
}

TEST_CASE("bad parameters are rejected") {
  CHECK_THROWS_AS(build_sequestration(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(build_sequestration(2, 1), std::invalid_argument);
}

TEST_CASE("fully open extension appends outflows then inflows") {
  ReactionNetwork net = fully_open_extension(build_sequestration(2, 3));
  REQUIRE(net.reaction_count() == 9);
  for (int i = 1; i <= 3; ++i) {
    const Reaction& out = net.reactions()[3 + i - 1];
    CHECK(out.rate_index == 3 + i);
    CHECK(out.reactants == std::map<int, long long>{{i, 1}});
    CHECK(out.products.empty());
    const Reaction& in = net.reactions()[6 + i - 1];
    CHECK(in.rate_index == 6 + i);
    CHECK(in.reactants.empty());
    CHECK(in.products == std::map<int, long long>{{i, 1}});
  }
  CHECK(net.tag()->fully_open);

  ReactionNetwork big = fully_open_extension(build_sequestration(6, 5));
  CHECK(big.reaction_count() == 15);
}

TEST_CASE("extension guards") {
  ReactionNetwork net = fully_open_extension(build_sequestration(2, 3));
  CHECK_THROWS_AS(fully_open_extension(net), std::invalid_argument);
  // an untagged network is rejected too
  ReactionNetwork other = parse_network("X1 + X1 -> X2 ; r1\n");
  CHECK_THROWS_AS(fully_open_extension(other), std::invalid_argument);
}

TEST_CASE("stoichiometric matrix columns follow the rate order") {
  ReactionNetwork net = fully_open_extension(build_sequestration(2, 3));
  StoichiometricMatrix N = stoichiometric_matrix(net);
  REQUIRE(N.entries.rows() == 3);
  REQUIRE(N.entries.cols() == 9);
  // production column: consumes X1, produces 2 X3
  CHECK(N.entries(0, 2) == -1);
  CHECK(N.entries(1, 2) == 0);
  CHECK(N.entries(2, 2) == 2);
  // first pair column
  CHECK(N.entries(0, 0) == -1);
  CHECK(N.entries(1, 0) == -1);
  CHECK(N.entries(2, 0) == 0);
  // outflow of X2 is -e2
  CHECK(N.entries(0, 4) == 0);
  CHECK(N.entries(1, 4) == -1);
  CHECK(N.entries(2, 4) == 0);
}

TEST_CASE("open extensions have full rank") {
  for (int m = 1; m <= 10; ++m)
    for (int n = 2; n <= 13; ++n) {
      ReactionNetwork net = fully_open_extension(build_sequestration(m, n));
      CHECK(stoichiometric_matrix(net).rank() == n);
    }
}

TEST_CASE("parser round trip over the whole family") {
  for (int m : {1, 2, 6})
    for (int n : {2, 3, 5, 9}) {
      ReactionNetwork closed = build_sequestration(m, n);
      CHECK(parse_network(format_network(closed)) == closed);
      ReactionNetwork open = fully_open_extension(closed);
      CHECK(parse_network(format_network(open)) == open);
    }
}

TEST_CASE("grammar basics") {
  ReactionNetwork net = parse_network("X1 -> 2 X3 ; r1\nX3 -> 0 ; r2\n0 -> X1 ; r3\n");
  REQUIRE(net.reaction_count() == 3);
  CHECK(net.reactions()[0].reactants == std::map<int, long long>{{1, 1}});
  CHECK(net.reactions()[0].products == std::map<int, long long>{{2, 2}});  // X3 is species 2
  CHECK(net.species()[1].name == "X3");
  CHECK(net.reactions()[2].reactants.empty());
}

TEST_CASE("comments and blank lines are ignored") {
  ReactionNetwork net = parse_network("# a comment\n\nX1 + X2 -> 0 ; r1  # trailing\n");
  CHECK(net.reaction_count() == 1);
}

TEST_CASE("grammar errors carry positions") {
  CHECK_THROWS_AS(parse_network("X1 + X2 -> ; r2\n"), ParseError);
  try {
    parse_network("X1 -> X2 ; r1\nX1 + X2 -> ; r2\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("product side") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_network("X1 -> X2 ; r1\nX2 -> X1 ; r1\n"), ParseError);   // duplicate
  CHECK_THROWS_AS(parse_network("X1 -> X2 ; r5\n"), ParseError);                  // not 1..m
  CHECK_THROWS_AS(parse_network("-> X2 ; r1\n"), ParseError);                     // empty side
  CHECK_THROWS_AS(parse_network("X1 -> X2\n"), ParseError);                       // no label
}

TEST_CASE("species whitelist") {
  std::vector<std::string> known{"X1", "X2"};
  CHECK_NOTHROW(parse_network("X1 -> X2 ; r1\n", known));
  CHECK_THROWS_AS(parse_network("X1 -> X9 ; r1\n", known), ParseError);
}

TEST_CASE("a parsed network matching the family shape is tagged") {
  ReactionNetwork net = fully_open_extension(build_sequestration(3, 5));
  ReactionNetwork reparsed = parse_network(format_network(net));
  REQUIRE(reparsed.tag().has_value());
  CHECK(reparsed.tag()->m == 3);
  CHECK(reparsed.tag()->n == 5);
  CHECK(reparsed.tag()->fully_open);
}
