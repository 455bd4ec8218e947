#pragma once

/// Dense univariate polynomials over an exact field (or over double).
/// Coefficients are stored ascending; the representation is normalized so the
/// leading coefficient is nonzero (the zero polynomial has an empty vector).

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wsigma {

template <class F>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(F constant) {
    if (!(constant == F(0))) c_.push_back(std::move(constant));
  }
  Polynomial(std::initializer_list<F> ascending) : c_(ascending) { normalize(); }
  static Polynomial from_coeffs(std::vector<F> ascending) {
    Polynomial p;
    p.c_ = std::move(ascending);
    p.normalize();
    return p;
  }
  /// The indeterminate itself.
  static Polynomial variable() { return Polynomial{F(0), F(1)}; }

  [[nodiscard]] bool is_zero() const { return c_.empty(); }
  /// Degree; -1 for the zero polynomial.
  [[nodiscard]] int degree() const { return static_cast<int>(c_.size()) - 1; }
  [[nodiscard]] F coeff(std::size_t i) const { return i < c_.size() ? c_[i] : F(0); }
  [[nodiscard]] const F& leading() const { return c_.back(); }
  [[nodiscard]] const std::vector<F>& coeffs() const { return c_; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    r.c_.resize(std::max(a.c_.size(), b.c_.size()), F(0));
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.coeff(i) + b.coeff(i);
    r.normalize();
    return r;
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    r.c_.resize(std::max(a.c_.size(), b.c_.size()), F(0));
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.coeff(i) - b.coeff(i);
    r.normalize();
    return r;
  }
  friend Polynomial operator-(const Polynomial& a) { return Polynomial() - a; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    Polynomial r;
    r.c_.assign(a.c_.size() + b.c_.size() - 1, F(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    r.normalize();
    return r;
  }
  friend Polynomial operator*(const F& s, const Polynomial& p) {
    Polynomial r = p;
    for (auto& c : r.c_) c = s * c;
    r.normalize();
    return r;
  }
  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  [[nodiscard]] Polynomial scaled_by_inverse(const F& s) const {
    Polynomial r = *this;
    for (auto& c : r.c_) c = c / s;
    return r;
  }

  [[nodiscard]] Polynomial pow(unsigned e) const {
    Polynomial acc(F(1));
    Polynomial base = *this;
    for (; e != 0; e >>= 1) {
      if (e & 1u) acc *= base;
      if (e > 1) base *= base;
    }
    return acc;
  }

  [[nodiscard]] Polynomial derivative() const {
    Polynomial r;
    if (c_.size() <= 1) return r;
    r.c_.resize(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) r.c_[i - 1] = F(static_cast<long long>(i)) * c_[i];
    r.normalize();
    return r;
  }

  /// Horner evaluation at a point of any compatible scalar type.
  template <class T>
  [[nodiscard]] T eval(const T& x) const {
    T acc(0);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + T(c_[i]);
    return acc;
  }

  /// Exact Euclidean division; requires a field and b != 0.
  friend std::pair<Polynomial, Polynomial> divmod(Polynomial a, const Polynomial& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    Polynomial q;
    if (a.degree() >= b.degree()) q.c_.assign(a.c_.size() - b.c_.size() + 1, F(0));
    while (!a.is_zero() && a.degree() >= b.degree()) {
      const std::size_t shift = a.c_.size() - b.c_.size();
      const F factor = a.leading() / b.leading();
      q.c_[shift] = factor;
      for (std::size_t i = 0; i < b.c_.size(); ++i) a.c_[shift + i] -= factor * b.c_[i];
      a.normalize();
    }
    q.normalize();
    return {q, a};
  }

  /// Monic gcd via Euclid's algorithm; gcd(0, 0) = 0.
  friend Polynomial gcd_monic(Polynomial a, Polynomial b) {
    while (!b.is_zero()) {
      auto [q, r] = divmod(std::move(a), b);
      (void)q;
      a = std::move(b);
      b = std::move(r);
    }
    if (!a.is_zero()) a = a.scaled_by_inverse(a.leading());
    return a;
  }

 private:
  void normalize() {
    while (!c_.empty() && c_.back() == F(0)) c_.pop_back();
  }

  std::vector<F> c_;
};

/// Human-readable form like "3/2 m^2 - m + 5" with the given variable name.
template <class F, class ToStr>
[[nodiscard]] std::string poly_to_string(const Polynomial<F>& p, const std::string& var,
                                         ToStr&& coeff_str) {
  if (p.is_zero()) return "0";
  std::string out;
  for (int i = p.degree(); i >= 0; --i) {
    const F c = p.coeff(static_cast<std::size_t>(i));
    if (c == F(0)) continue;
    if (!out.empty()) out += " + ";
    out += coeff_str(c);
    if (i >= 1) out += " " + var;
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out;
}

}  // namespace wsigma
