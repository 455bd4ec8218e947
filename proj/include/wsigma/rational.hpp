#pragma once

/// Arbitrary-precision rational scalar used by every exact code path.
/// The backend keeps values in canonical reduced form: gcd(num, den) = 1 and
/// den > 0, with 0 represented as 0/1. Tests assert this rather than trust it.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace wsigma {

namespace mp = boost::multiprecision;

using BigInt = mp::number<mp::backends::cpp_int_backend<>, mp::et_off>;
using Rational =
    mp::number<mp::backends::rational_adaptor<mp::backends::cpp_int_backend<>>,
               mp::et_off>;

[[nodiscard]] inline BigInt rat_num(const Rational& x) { return numerator(x); }
[[nodiscard]] inline BigInt rat_den(const Rational& x) { return denominator(x); }

[[nodiscard]] inline bool is_canonical(const Rational& x) {
  const BigInt n = rat_num(x);
  const BigInt d = rat_den(x);
  if (d <= 0) return false;
  if (n == 0) return d == 1;
  return gcd(abs(n), d) == 1;
}

[[nodiscard]] inline bool is_integer(const Rational& x) { return rat_den(x) == 1; }

/// x^e for e >= 0; x^0 = 1 including x = 0.
[[nodiscard]] inline Rational rat_pow(const Rational& x, unsigned e) {
  Rational acc(1);
  Rational base = x;
  for (; e != 0; e >>= 1) {
    if (e & 1u) acc *= base;
    base *= base;
  }
  return acc;
}

[[nodiscard]] inline Rational rat_abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

[[nodiscard]] inline double to_double(const Rational& x) { return static_cast<double>(x); }

[[nodiscard]] inline std::string to_string(const Rational& x) {
  std::string s = rat_num(x).str();
  if (rat_den(x) != 1) s += "/" + rat_den(x).str();
  return s;
}

/// Parses "p", "-p", or "p/q". Throws std::invalid_argument on malformed input.
[[nodiscard]] inline Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(text));
    const BigInt num(text.substr(0, slash));
    const BigInt den(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("not a rational literal: " + text);
  }
}

}  // namespace wsigma
