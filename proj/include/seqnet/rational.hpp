#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace seqnet {

// Exact arithmetic used by the certificate paths. Rate constants and any
// concentration vector that needs certifying are representable exactly
// (decimal input and IEEE doubles are both rationals).
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

double to_double(const Rational& q);

// Exact conversion; every finite double is a dyadic rational.
Rational rational_of(double x);

// Accepts integers ("3", "-12"), fractions ("3006/1000"), and decimals with
// optional exponent ("0.006", "2.5e2"). Returns nullopt on malformed input.
std::optional<Rational> parse_rational(std::string_view text);

std::string to_string(const Rational& q);

std::vector<double> to_doubles(const std::vector<Rational>& qs);
std::vector<Rational> to_rationals(const std::vector<double>& xs);

}  // namespace seqnet
