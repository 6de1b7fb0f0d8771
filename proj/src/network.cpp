#include "seqnet/network.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "seqnet/rational.hpp"

namespace seqnet {

namespace {

// Structural recognition of K(m,n) / its fully open extension, so the tag
// survives a format/parse round trip. Reactions are already rate-sorted.
std::optional<SequestrationTag> recognize(const std::vector<Species>& species,
                                          const std::vector<Reaction>& reactions) {
  const int s = static_cast<int>(species.size());
  const int k = static_cast<int>(reactions.size());
  if (s < 2) return std::nullopt;
  const int n = s;
  const bool closed = k == n;
  const bool open = k == 3 * n;
  if (!closed && !open) return std::nullopt;

  auto is_pair = [&](const Reaction& rx, int i) {
    return rx.products.empty() &&
           rx.reactants == std::map<int, long long>{{i, 1}, {i + 1, 1}};
  };
  for (int i = 1; i <= n - 1; ++i)
    if (!is_pair(reactions[i - 1], i)) return std::nullopt;
  const Reaction& prod = reactions[n - 1];
  if (prod.reactants != std::map<int, long long>{{1, 1}}) return std::nullopt;
  if (prod.products.size() != 1) return std::nullopt;
  auto it = prod.products.find(n);
  if (it == prod.products.end() || it->second < 1) return std::nullopt;
  const int m = static_cast<int>(it->second);
  if (closed) return SequestrationTag{m, n, false};

  for (int i = 1; i <= n; ++i) {
    const Reaction& out = reactions[n + i - 1];
    if (!out.products.empty() || out.reactants != std::map<int, long long>{{i, 1}})
      return std::nullopt;
    const Reaction& in = reactions[2 * n + i - 1];
    if (!in.reactants.empty() || in.products != std::map<int, long long>{{i, 1}})
      return std::nullopt;
  }
  return SequestrationTag{m, n, true};
}

}  // namespace

ReactionNetwork::ReactionNetwork(std::vector<Species> species, std::vector<Reaction> reactions)
    : species_(std::move(species)), reactions_(std::move(reactions)) {
  std::set<std::string> names;
  for (size_t i = 0; i < species_.size(); ++i) {
    if (species_[i].index != static_cast<int>(i) + 1)
      throw std::invalid_argument("species indices must be contiguous starting at 1");
    if (species_[i].name.empty()) species_[i].name = "X" + std::to_string(i + 1);
    if (!names.insert(species_[i].name).second)
      throw std::invalid_argument("duplicate species name: " + species_[i].name);
  }
  std::sort(reactions_.begin(), reactions_.end(),
            [](const Reaction& a, const Reaction& b) { return a.rate_index < b.rate_index; });
  for (size_t j = 0; j < reactions_.size(); ++j) {
    const Reaction& rx = reactions_[j];
    if (rx.rate_index != static_cast<int>(j) + 1)
      throw std::invalid_argument("rate indices must form a permutation of 1..#reactions");
    if (rx.reactants.empty() && rx.products.empty())
      throw std::invalid_argument("reaction r" + std::to_string(rx.rate_index) +
                                  " has two zero complexes");
    for (const auto& side : {rx.reactants, rx.products})
      for (const auto& [idx, coeff] : side) {
        if (idx < 1 || idx > static_cast<int>(species_.size()))
          throw std::invalid_argument("reaction r" + std::to_string(rx.rate_index) +
                                      " references unknown species index " +
                                      std::to_string(idx));
        if (coeff < 1)
          throw std::invalid_argument("reaction r" + std::to_string(rx.rate_index) +
                                      " has a non-positive coefficient");
      }
  }
  tag_ = recognize(species_, reactions_);
}

ReactionNetwork build_sequestration(int m, int n) {
  if (m < 1) throw std::invalid_argument("build_sequestration: m must be >= 1");
  if (n < 2) throw std::invalid_argument("build_sequestration: n must be >= 2");
  std::vector<Species> species;
  for (int i = 1; i <= n; ++i) species.push_back({i, "X" + std::to_string(i)});
  std::vector<Reaction> reactions;
  for (int i = 1; i <= n - 1; ++i)
    reactions.push_back({{{i, 1}, {i + 1, 1}}, {}, i});
  reactions.push_back({{{1, 1}}, {{n, static_cast<long long>(m)}}, n});
  return ReactionNetwork(std::move(species), std::move(reactions));
}

ReactionNetwork fully_open_extension(const ReactionNetwork& net) {
  const auto& tag = net.tag();
  if (!tag)
    throw std::invalid_argument("fully_open_extension: network is not a tagged K(m,n)");
  if (tag->fully_open)
    throw std::invalid_argument("fully_open_extension: network is already fully open");
  const int n = tag->n;
  std::vector<Reaction> reactions = net.reactions();
  for (int i = 1; i <= n; ++i) reactions.push_back({{{i, 1}}, {}, n + i});
  for (int i = 1; i <= n; ++i) reactions.push_back({{}, {{i, 1}}, 2 * n + i});
  return ReactionNetwork(net.species(), std::move(reactions));
}

StoichiometricMatrix stoichiometric_matrix(const ReactionNetwork& net) {
  Mat<long long> N(net.species_count(), net.reaction_count());
  for (const Reaction& rx : net.reactions()) {
    const int j = rx.rate_index - 1;
    for (const auto& [i, c] : rx.reactants) N(i - 1, j) -= c;
    for (const auto& [i, c] : rx.products) N(i - 1, j) += c;
  }
  return StoichiometricMatrix{std::move(N)};
}

int StoichiometricMatrix::rank() const {
  // exact Gaussian elimination over the rationals
  Mat<Rational> a(entries.rows(), entries.cols());
  for (int i = 0; i < entries.rows(); ++i)
    for (int j = 0; j < entries.cols(); ++j) a(i, j) = Rational(entries(i, j));
  int rank = 0;
  int row = 0;
  for (int col = 0; col < a.cols() && row < a.rows(); ++col) {
    int pivot = -1;
    for (int i = row; i < a.rows(); ++i)
      if (a(i, col) != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != row)
      for (int j = 0; j < a.cols(); ++j) std::swap(a(pivot, j), a(row, j));
    for (int i = row + 1; i < a.rows(); ++i) {
      if (a(i, col) == 0) continue;
      Rational factor = a(i, col) / a(row, col);
      for (int j = col; j < a.cols(); ++j) a(i, j) -= factor * a(row, j);
    }
    ++row;
    ++rank;
  }
  return rank;
}

// ---------------------------------------------------------------------------
// Parsing

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column) {}

namespace {

struct Cursor {
  std::string_view text;
  size_t pos = 0;
  int line = 1;
  int line_start = 0;

  int column() const { return static_cast<int>(pos) - line_start + 1; }
  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  void advance() {
    if (text[pos] == '\n') {
      ++line;
      line_start = static_cast<int>(pos) + 1;
    }
    ++pos;
  }
  void skip_blanks() {
    while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) advance();
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line, column(), msg); }
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string read_ident(Cursor& c) {
  std::string s;
  while (!c.eof() && ident_char(c.peek())) {
    s.push_back(c.peek());
    c.advance();
  }
  return s;
}

long long read_number(Cursor& c) {
  long long v = 0;
  while (!c.eof() && std::isdigit(static_cast<unsigned char>(c.peek()))) {
    v = v * 10 + (c.peek() - '0');
    if (v > 1'000'000'000) c.fail("coefficient too large");
    c.advance();
  }
  return v;
}

}  // namespace

ReactionNetwork parse_network(std::string_view text) { return parse_network(text, {}); }

ReactionNetwork parse_network(std::string_view text, const std::vector<std::string>& known) {
  Cursor c{text};
  std::vector<std::string> species_order;
  std::map<std::string, int> species_index;
  const std::set<std::string> known_set(known.begin(), known.end());

  // Species get indices in order of first appearance in the text.
  auto lookup = [&](const std::string& name, int line, int col) {
    auto it = species_index.find(name);
    if (it != species_index.end()) return it->second;
    if (!known_set.empty() && !known_set.count(name))
      throw ParseError(line, col, "unknown species: " + name);
    species_order.push_back(name);
    species_index[name] = static_cast<int>(species_order.size());
    return species_index[name];
  };

  // Parses one complex into species-indexed coefficients; {} = zero complex.
  auto read_complex = [&](bool product_side) {
    std::map<int, long long> terms;
    c.skip_blanks();
    if (c.eof() || c.peek() == '\n' || c.peek() == ';' || c.peek() == '#' || c.peek() == '-')
      c.fail(product_side ? "missing product side (write 0 for the zero complex)"
                          : "missing reactant side (write 0 for the zero complex)");
    if (c.peek() == '0') {
      c.advance();
      return terms;
    }
    while (true) {
      c.skip_blanks();
      long long coeff = 1;
      if (!c.eof() && std::isdigit(static_cast<unsigned char>(c.peek()))) {
        coeff = read_number(c);
        if (coeff < 1) c.fail("coefficient must be a positive integer");
        c.skip_blanks();
      }
      if (c.eof() || !ident_start(c.peek())) c.fail("expected a species name");
      const int line = c.line;
      const int col = c.column();
      terms[lookup(read_ident(c), line, col)] += coeff;
      c.skip_blanks();
      if (!c.eof() && c.peek() == '+') {
        c.advance();
        continue;
      }
      break;
    }
    return terms;
  };

  std::vector<Reaction> reactions;
  std::set<int> labels;
  while (!c.eof()) {
    c.skip_blanks();
    if (c.eof()) break;
    if (c.peek() == '\n') {
      c.advance();
      continue;
    }
    if (c.peek() == '#') {
      while (!c.eof() && c.peek() != '\n') c.advance();
      continue;
    }
    const int line_no = c.line;
    Reaction rx;
    rx.reactants = read_complex(false);
    c.skip_blanks();
    if (c.eof() || c.peek() != '-') c.fail("expected '->'");
    c.advance();
    if (c.eof() || c.peek() != '>') c.fail("expected '->'");
    c.advance();
    rx.products = read_complex(true);
    c.skip_blanks();
    if (c.eof() || c.peek() != ';') c.fail("expected ';' before the rate label");
    c.advance();
    c.skip_blanks();
    if (c.eof() || (c.peek() != 'r' && c.peek() != 'R')) c.fail("expected rate label r<j>");
    c.advance();
    if (c.eof() || !std::isdigit(static_cast<unsigned char>(c.peek())))
      c.fail("expected rate label r<j>");
    const int col = c.column();
    long long j = read_number(c);
    if (j < 1) c.fail("rate index must be >= 1");
    if (!labels.insert(static_cast<int>(j)).second)
      throw ParseError(c.line, col, "duplicate rate label r" + std::to_string(j));
    c.skip_blanks();
    if (!c.eof() && c.peek() == '#')
      while (!c.eof() && c.peek() != '\n') c.advance();
    if (!c.eof() && c.peek() != '\n') c.fail("unexpected trailing input");
    if (rx.reactants.empty() && rx.products.empty())
      throw ParseError(line_no, 1, "reaction r" + std::to_string(j) + " has two zero complexes");
    rx.rate_index = static_cast<int>(j);
    reactions.push_back(std::move(rx));
  }

  for (int j = 1; j <= static_cast<int>(reactions.size()); ++j)
    if (!labels.count(j))
      throw ParseError(1, 1, "rate labels must form a permutation of 1.." +
                                 std::to_string(reactions.size()) + " (missing r" +
                                 std::to_string(j) + ")");

  std::vector<Species> species;
  for (size_t i = 0; i < species_order.size(); ++i)
    species.push_back({static_cast<int>(i) + 1, species_order[i]});
  return ReactionNetwork(std::move(species), std::move(reactions));
}

std::string format_network(const ReactionNetwork& net) {
  std::ostringstream out;
  auto side = [&](const std::map<int, long long>& terms) {
    if (terms.empty()) return std::string("0");
    std::string s;
    bool first = true;
    for (const auto& [idx, coeff] : terms) {
      if (!first) s += " + ";
      first = false;
      if (coeff != 1) s += std::to_string(coeff) + " ";
      s += net.species()[idx - 1].name;
    }
    return s;
  };
  for (const Reaction& rx : net.reactions())
    out << side(rx.reactants) << " -> " << side(rx.products) << " ; r" << rx.rate_index << "\n";
  return out.str();
}

}  // namespace seqnet
