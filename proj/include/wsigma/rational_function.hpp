#pragma once

/// Rational functions of the formal weight parameter m, with exact rational
/// coefficients. Canonical form invariants, restored after every operation:
///   * denominator is nonzero and monic,
///   * gcd(numerator, denominator) = 1,
///   * zero is represented as 0/1.
/// Symbolic identity checks reduce to is_zero() on a canonical object.

#include <stdexcept>
#include <string>
#include <utility>

#include "wsigma/polynomial.hpp"
#include "wsigma/rational.hpp"

namespace wsigma {

using PolyQ = Polynomial<Rational>;

struct PoleError : std::domain_error {
  explicit PoleError(const std::string& what) : std::domain_error(what) {}
};

class RationalFunctionM {
 public:
  RationalFunctionM() : num_(), den_(PolyQ(Rational(1))) {}
  RationalFunctionM(long long k) : num_(PolyQ(Rational(k))), den_(PolyQ(Rational(1))) {}
  explicit RationalFunctionM(const Rational& q) : num_(PolyQ(q)), den_(PolyQ(Rational(1))) {}
  explicit RationalFunctionM(PolyQ num) : num_(std::move(num)), den_(PolyQ(Rational(1))) {}
  RationalFunctionM(PolyQ num, PolyQ den) : num_(std::move(num)), den_(std::move(den)) {
    canonicalize();
  }

  /// The formal parameter m.
  static RationalFunctionM m() { return RationalFunctionM(PolyQ::variable()); }

  [[nodiscard]] const PolyQ& num() const { return num_; }
  [[nodiscard]] const PolyQ& den() const { return den_; }
  [[nodiscard]] bool is_zero() const { return num_.is_zero(); }

  [[nodiscard]] bool is_canonical() const {
    if (den_.is_zero() || !(den_.leading() == Rational(1))) return false;
    if (num_.is_zero()) return den_.degree() == 0;
    return gcd_monic(num_, den_).degree() == 0;
  }

  friend bool operator==(const RationalFunctionM& a, const RationalFunctionM& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  friend RationalFunctionM operator+(const RationalFunctionM& a, const RationalFunctionM& b) {
    return RationalFunctionM(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFunctionM operator-(const RationalFunctionM& a, const RationalFunctionM& b) {
    return RationalFunctionM(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFunctionM operator-(const RationalFunctionM& a) {
    RationalFunctionM r = a;
    r.num_ = -r.num_;
    return r;
  }
  friend RationalFunctionM operator*(const RationalFunctionM& a, const RationalFunctionM& b) {
    return RationalFunctionM(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RationalFunctionM operator/(const RationalFunctionM& a, const RationalFunctionM& b) {
    if (b.is_zero()) throw std::domain_error("rational function division by zero");
    return RationalFunctionM(a.num_ * b.den_, a.den_ * b.num_);
  }
  RationalFunctionM& operator+=(const RationalFunctionM& o) { return *this = *this + o; }
  RationalFunctionM& operator-=(const RationalFunctionM& o) { return *this = *this - o; }
  RationalFunctionM& operator*=(const RationalFunctionM& o) { return *this = *this * o; }
  RationalFunctionM& operator/=(const RationalFunctionM& o) { return *this = *this / o; }

  [[nodiscard]] RationalFunctionM pow(unsigned e) const {
    RationalFunctionM acc(1);
    RationalFunctionM base = *this;
    for (; e != 0; e >>= 1) {
      if (e & 1u) acc *= base;
      if (e > 1) base *= base;
    }
    return acc;
  }

  /// Substitutes a numeric value for m. Throws PoleError when the canonical
  /// denominator vanishes there (the message carries that denominator).
  [[nodiscard]] Rational eval(const Rational& m_value) const {
    const Rational d = den_.eval(m_value);
    if (d == 0)
      throw PoleError("pole at m = " + wsigma::to_string(m_value) +
                      ": denominator " + to_string_den());
    return num_.eval(m_value) / d;
  }

  [[nodiscard]] std::string to_string() const {
    const auto cs = [](const Rational& q) { return wsigma::to_string(q); };
    std::string n = poly_to_string(num_, "m", cs);
    if (den_.degree() == 0) return n;
    return "(" + n + ") / (" + poly_to_string(den_, "m", cs) + ")";
  }

 private:
  [[nodiscard]] std::string to_string_den() const {
    return poly_to_string(den_, "m", [](const Rational& q) { return wsigma::to_string(q); });
  }

  void canonicalize() {
    if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
    if (num_.is_zero()) {
      den_ = PolyQ(Rational(1));
      return;
    }
    const PolyQ g = gcd_monic(num_, den_);
    if (g.degree() > 0) {
      num_ = divmod(num_, g).first;
      den_ = divmod(den_, g).first;
    }
    const Rational lead = den_.leading();
    if (!(lead == Rational(1))) {
      num_ = num_.scaled_by_inverse(lead);
      den_ = den_.scaled_by_inverse(lead);
    }
  }

  PolyQ num_;
  PolyQ den_;
};

}  // namespace wsigma
