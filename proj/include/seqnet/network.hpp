#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "seqnet/matrix.hpp"

namespace seqnet {

struct Species {
  int index = 0;  // 1-based, contiguous within a network
  std::string name;

  friend bool operator==(const Species&, const Species&) = default;
};

// One irreversible mass-action reaction. Coefficients are keyed by species
// index; an empty side is the zero complex.
struct Reaction {
  std::map<int, long long> reactants;
  std::map<int, long long> products;
  int rate_index = 0;  // the j of r_j, unique within a network

  friend bool operator==(const Reaction&, const Reaction&) = default;
};

// Provenance marker for networks built as K(m,n) or its fully open extension.
struct SequestrationTag {
  int m = 0;
  int n = 0;
  bool fully_open = false;

  friend bool operator==(const SequestrationTag&, const SequestrationTag&) = default;
};

class ReactionNetwork {
 public:
  // Validates: contiguous 1-based species indices, unique names, rate indices
  // forming a permutation of 1..#reactions, reactions referencing only known
  // species. Reactions are stored sorted by rate index. The sequestration tag
  // is recognized structurally, so parsing a formatted network restores it.
  ReactionNetwork(std::vector<Species> species, std::vector<Reaction> reactions);

  const std::vector<Species>& species() const { return species_; }
  const std::vector<Reaction>& reactions() const { return reactions_; }
  int species_count() const { return static_cast<int>(species_.size()); }
  int reaction_count() const { return static_cast<int>(reactions_.size()); }
  const std::optional<SequestrationTag>& tag() const { return tag_; }

  friend bool operator==(const ReactionNetwork&, const ReactionNetwork&) = default;

 private:
  std::vector<Species> species_;
  std::vector<Reaction> reactions_;    // sorted by rate_index; entry j has rate_index j+1
  std::optional<SequestrationTag> tag_;
};

// K(m,n): pair annihilations X_i + X_{i+1} -> 0 with rates r_1..r_{n-1} and
// the production reaction X_1 -> m X_n with rate r_n. Requires m >= 1, n >= 2.
ReactionNetwork build_sequestration(int m, int n);

// Appends outflows X_i -> 0 (rates r_{n+i}) and inflows 0 -> X_i (rates
// r_{2n+i}). Accepts only a tagged, not-yet-extended K(m,n).
ReactionNetwork fully_open_extension(const ReactionNetwork& net);

struct StoichiometricMatrix {
  // species x reactions; column j-1 belongs to the reaction with rate index j.
  Mat<long long> entries;

  int rank() const;  // exact integer rank
};

StoichiometricMatrix stoichiometric_matrix(const ReactionNetwork& net);

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

// Grammar, one reaction per line:
//   <complex> "->" <complex> ";" "r"<int>
// where <complex> is "0" or "+"-separated coefficient/species terms
// (coefficient defaults to 1). "#" starts a comment. Rate labels must form a
// permutation of 1..#reactions.
ReactionNetwork parse_network(std::string_view text);

// As above, but species outside `known` are rejected.
ReactionNetwork parse_network(std::string_view text, const std::vector<std::string>& known);

// One line per reaction in rate-index order; parse(format(net)) == net.
std::string format_network(const ReactionNetwork& net);

}  // namespace seqnet
