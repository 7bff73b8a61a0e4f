#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace chorefair {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// p/q in lowest terms with a positive denominator. Throws
// std::invalid_argument when q == 0. Always use this (or plain integer
// construction plus division) instead of cpp_rational's two-argument
// constructor, which requires pre-canonicalized input.
Rational make_rational(const Int& numerator, const Int& denominator);

// Accepts "12", "-3", "7/2", "-4/6" and decimal strings like "2.25"
// (converted via a power-of-ten denominator, so the result is exact).
// Throws std::invalid_argument on anything else.
Rational parse_rational(const std::string& text);

// "p/q" in lowest terms, or just "p" when the value is an integer.
// parse_rational(format_rational(x)) == x for every x.
std::string format_rational(const Rational& value);

// Largest integer <= value.
Int floor_rational(const Rational& value);

}  // namespace chorefair
