#pragma once

/// Glue that lets one algebra template run over all three scalar modes:
/// exact rationals, rational functions of formal m, and binary64.

#include "wsigma/polynomial.hpp"
#include "wsigma/rational.hpp"
#include "wsigma/rational_function.hpp"

namespace wsigma {

template <class S>
[[nodiscard]] inline S from_rational(const Rational& q) {
  return S(q);
}
template <>
[[nodiscard]] inline Rational from_rational<Rational>(const Rational& q) {
  return q;
}
template <>
[[nodiscard]] inline double from_rational<double>(const Rational& q) {
  return to_double(q);
}

/// Exact division by a small integer, defined for every scalar mode and for
/// polynomials over them (used by recursions that divide by k or j!).
[[nodiscard]] inline Rational div_int(const Rational& x, long long k) { return x / Rational(k); }
[[nodiscard]] inline double div_int(double x, long long k) { return x / static_cast<double>(k); }
[[nodiscard]] inline RationalFunctionM div_int(const RationalFunctionM& x, long long k) {
  return x / RationalFunctionM(k);
}
template <class F>
[[nodiscard]] Polynomial<F> div_int(const Polynomial<F>& p, long long k) {
  std::vector<F> c = p.coeffs();
  for (auto& ci : c) ci = div_int(ci, k);
  return Polynomial<F>::from_coeffs(std::move(c));
}

template <class S>
[[nodiscard]] S scalar_pow(const S& x, unsigned e) {
  S acc(1);
  S base = x;
  for (; e != 0; e >>= 1) {
    if (e & 1u) acc = acc * base;
    if (e > 1) base = base * base;
  }
  return acc;
}

}  // namespace wsigma
