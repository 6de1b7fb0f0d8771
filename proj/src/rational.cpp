#include "seqnet/rational.hpp"

#include <cctype>
#include <cmath>

namespace seqnet {

double to_double(const Rational& q) { return q.convert_to<double>(); }

Rational rational_of(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("rational_of: non-finite value");
  return Rational(x);
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

std::optional<BigInt> parse_int(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) return std::nullopt;
  BigInt v{std::string(s)};
  if (neg) v = -v;
  return v;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  // strip surrounding whitespace
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  if (text.empty()) return std::nullopt;

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_int(text.substr(0, slash));
    auto den = parse_int(text.substr(slash + 1));
    if (!num || !den || *den == 0) return std::nullopt;
    return Rational(*num, *den);
  }

  // decimal with optional exponent: [sign] digits [. digits] [e [sign] digits]
  std::string_view mantissa = text;
  long long exp10 = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    auto exp_part = parse_int(text.substr(e + 1));
    if (!exp_part) return std::nullopt;
    if (*exp_part > 100000 || *exp_part < -100000) return std::nullopt;
    exp10 = exp_part->convert_to<long long>();
    mantissa = text.substr(0, e);
  }
  bool neg = false;
  if (!mantissa.empty() && (mantissa[0] == '+' || mantissa[0] == '-')) {
    neg = mantissa[0] == '-';
    mantissa.remove_prefix(1);
  }
  std::string digits;
  long long frac_digits = 0;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    auto head = mantissa.substr(0, dot);
    auto tail = mantissa.substr(dot + 1);
    if (head.empty() && tail.empty()) return std::nullopt;
    if (!head.empty() && !all_digits(head)) return std::nullopt;
    if (!tail.empty() && !all_digits(tail)) return std::nullopt;
    digits = std::string(head) + std::string(tail);
    frac_digits = static_cast<long long>(tail.size());
  } else {
    if (!all_digits(mantissa)) return std::nullopt;
    digits = std::string(mantissa);
  }
  if (digits.empty()) return std::nullopt;
  BigInt num(digits);
  if (neg) num = -num;
  long long net = exp10 - frac_digits;
  BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::llabs(net)));
  if (net >= 0) return Rational(num * scale);
  return Rational(num, scale);
}

std::string to_string(const Rational& q) {
  if (boost::multiprecision::denominator(q) == 1)
    return boost::multiprecision::numerator(q).str();
  return boost::multiprecision::numerator(q).str() + "/" +
         boost::multiprecision::denominator(q).str();
}

std::vector<double> to_doubles(const std::vector<Rational>& qs) {
  std::vector<double> r;
  r.reserve(qs.size());
  for (const auto& q : qs) r.push_back(to_double(q));
  return r;
}

std::vector<Rational> to_rationals(const std::vector<double>& xs) {
  std::vector<Rational> r;
  r.reserve(xs.size());
  for (double x : xs) r.push_back(rational_of(x));
  return r;
}

}  // namespace seqnet
