#include "chorefair/rational.hpp"

#include <cctype>
#include <cstddef>
#include <stdexcept>

namespace chorefair {

namespace {

bool is_integer_token(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

// Multiply-add instead of the cpp_int string constructor: the latter
// reads a leading zero as an octal prefix, which would corrupt decimal
// fractions like "0.125".
Int int_from_token(const std::string& s) {
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  Int value = 0;
  for (; i < s.size(); ++i) value = value * 10 + (s[i] - '0');
  if (s[0] == '-') value = -value;
  return value;
}

std::string trimmed(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void bad_number(const std::string& text) {
  throw std::invalid_argument("not a rational number: \"" + text + "\"");
}

}  // namespace

Rational make_rational(const Int& numerator, const Int& denominator) {
  if (denominator == 0) {
    throw std::invalid_argument("rational with zero denominator");
  }
  // Division canonicalizes (lowest terms, positive denominator); the
  // two-argument cpp_rational constructor does not and must be avoided.
  return Rational(numerator) / Rational(denominator);
}

Rational parse_rational(const std::string& text) {
  const std::string s = trimmed(text);
  if (s.empty()) bad_number(text);

  const std::size_t slash = s.find('/');
  if (slash != std::string::npos) {
    const std::string num = trimmed(s.substr(0, slash));
    const std::string den = trimmed(s.substr(slash + 1));
    if (!is_integer_token(num) || !is_integer_token(den)) bad_number(text);
    const Int q = int_from_token(den);
    if (q == 0) bad_number(text);
    return make_rational(int_from_token(num), q);
  }

  const std::size_t dot = s.find('.');
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const std::size_t frac_len = s.size() - dot - 1;
    if (frac_len == 0) bad_number(text);
    // ".5" and "-.5" are accepted; normalize to an integer mantissa.
    if (digits.empty() || digits == "-" || digits == "+") bad_number(text);
    if (!is_integer_token(digits)) bad_number(text);
    Int scale = 1;
    for (std::size_t i = 0; i < frac_len; ++i) scale *= 10;
    return make_rational(int_from_token(digits), scale);
  }

  if (!is_integer_token(s)) bad_number(text);
  return Rational(int_from_token(s));
}

std::string format_rational(const Rational& value) {
  const Int num = numerator(value);
  const Int den = denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Int floor_rational(const Rational& value) {
  const Int num = numerator(value);
  const Int den = denominator(value);  // always positive
  Int q = num / den;                   // truncates toward zero
  if (num < 0 && q * den != num) --q;
  return q;
}

}  // namespace chorefair
