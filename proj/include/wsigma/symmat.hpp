#pragma once

/// Dense symmetric matrices over an exact or floating scalar, with just the
/// spectral utilities the Newton-transform layer needs: trace power sums,
/// cyclic Jacobi eigenvalues (float), characteristic-polynomial rational
/// eigenvalues (exact, small n), and a fraction-free positive-definiteness
/// test via elimination pivots.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wsigma/scalars.hpp"

namespace wsigma {

template <class S>
class SymMat {
 public:
  SymMat() : n_(0) {}
  explicit SymMat(int n) : n_(n), a_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), S(0)) {
    if (n < 0) throw std::invalid_argument("SymMat: n >= 0");
  }

  [[nodiscard]] static SymMat identity(int n) {
    SymMat r(n);
    for (int i = 0; i < n; ++i) r(i, i) = S(1);
    return r;
  }

  [[nodiscard]] static SymMat diag(const std::vector<S>& d) {
    SymMat r(static_cast<int>(d.size()));
    for (int i = 0; i < r.n_; ++i) r(i, i) = d[static_cast<std::size_t>(i)];
    return r;
  }

  /// Rejects asymmetric input exactly; float callers symmetrize first.
  [[nodiscard]] static SymMat from_rows(const std::vector<std::vector<S>>& rows) {
    const int n = static_cast<int>(rows.size());
    SymMat r(n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n)
        throw std::invalid_argument("SymMat: ragged rows");
      for (int j = 0; j < n; ++j) r(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (!(r(i, j) == r(j, i))) throw std::invalid_argument("SymMat: asymmetric input");
    return r;
  }

  [[nodiscard]] int n() const { return n_; }

  S& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)]; }
  const S& operator()(int i, int j) const {
    return a_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)];
  }

  friend SymMat operator+(SymMat a, const SymMat& b) {
    for (std::size_t i = 0; i < a.a_.size(); ++i) a.a_[i] = a.a_[i] + b.a_[i];
    return a;
  }
  friend SymMat operator-(SymMat a, const SymMat& b) {
    for (std::size_t i = 0; i < a.a_.size(); ++i) a.a_[i] = a.a_[i] - b.a_[i];
    return a;
  }
  friend SymMat operator*(const S& c, SymMat a) {
    for (auto& x : a.a_) x = c * x;
    return a;
  }
  friend SymMat operator*(const SymMat& a, const SymMat& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("SymMat: size mismatch");
    SymMat r(a.n_);
    for (int i = 0; i < a.n_; ++i)
      for (int l = 0; l < a.n_; ++l) {
        const S& ail = a(i, l);
        if (ail == S(0)) continue;
        for (int j = 0; j < a.n_; ++j) r(i, j) = r(i, j) + ail * b(l, j);
      }
    return r;
  }
  friend bool operator==(const SymMat& a, const SymMat& b) { return a.n_ == b.n_ && a.a_ == b.a_; }

  [[nodiscard]] S trace() const {
    S t(0);
    for (int i = 0; i < n_; ++i) t = t + (*this)(i, i);
    return t;
  }

  /// Frobenius pairing sum_ij A_ij B_ij.
  [[nodiscard]] S inner(const SymMat& b) const {
    S t(0);
    for (std::size_t i = 0; i < a_.size(); ++i) t = t + a_[i] * b.a_[i];
    return t;
  }

  [[nodiscard]] const std::vector<S>& flat() const { return a_; }

 private:
  int n_;
  std::vector<S> a_;
};

template <class S>
[[nodiscard]] double scalar_abs_double(const S& x) {
  if constexpr (std::is_same_v<S, double>) {
    return std::fabs(x);
  } else {
    return std::fabs(to_double(x));
  }
}

template <class S>
[[nodiscard]] double max_abs_entry(const SymMat<S>& a) {
  double m = 0.0;
  for (const S& x : a.flat()) m = std::max(m, scalar_abs_double(x));
  return m;
}

template <class S>
[[nodiscard]] bool is_exact_zero(const SymMat<S>& a) {
  for (const S& x : a.flat())
    if (!(x == S(0))) return false;
  return true;
}

[[nodiscard]] inline SymMat<double> to_double(const SymMat<Rational>& a) {
  SymMat<double> r(a.n());
  for (int i = 0; i < a.n(); ++i)
    for (int j = 0; j < a.n(); ++j) r(i, j) = to_double(a(i, j));
  return r;
}

/// tr P^1 .. tr P^kmax.
template <class S>
[[nodiscard]] std::vector<S> trace_power_sums(const SymMat<S>& p, int kmax) {
  std::vector<S> out;
  out.reserve(static_cast<std::size_t>(kmax));
  SymMat<S> pw = p;
  for (int k = 1; k <= kmax; ++k) {
    out.push_back(pw.trace());
    if (k < kmax) pw = pw * p;
  }
  return out;
}

/// Eigenvalues by cyclic Jacobi rotations, sorted nondecreasing.
[[nodiscard]] inline std::vector<double> jacobi_eigenvalues(SymMat<double> a) {
  const int n = a.n();
  if (n == 0) return {};
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::fabs(a(i, j)));
  if (scale == 0.0) return std::vector<double>(static_cast<std::size_t>(n), 0.0);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) <= 1e-15 * scale * n) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::fabs(apq) <= 1e-18 * scale) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int i = 0; i < n; ++i) {
          const double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          const double api = a(p, i), aqi = a(q, i);
          a(p, i) = c * api - s * aqi;
          a(q, i) = s * api + c * aqi;
        }
      }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Monic characteristic polynomial det(tI - P), exact.
[[nodiscard]] inline PolyQ char_poly(const SymMat<Rational>& p) {
  const int n = p.n();
  const auto psums = trace_power_sums(p, n);
  // e_j of the eigenvalues via the classical Newton recursion
  std::vector<Rational> e(static_cast<std::size_t>(n) + 1, Rational(0));
  e[0] = Rational(1);
  for (int k = 1; k <= n; ++k) {
    Rational acc(0);
    for (int j = 1; j <= k; ++j) {
      const Rational term = e[static_cast<std::size_t>(k - j)] * psums[static_cast<std::size_t>(j - 1)];
      acc = (j % 2 == 1) ? acc + term : acc - term;
    }
    e[static_cast<std::size_t>(k)] = acc / k;
  }
  std::vector<Rational> coeffs(static_cast<std::size_t>(n) + 1, Rational(0));
  for (int j = 0; j <= n; ++j) {
    // coefficient of t^{n-j} is (-1)^j e_j
    coeffs[static_cast<std::size_t>(n - j)] = (j % 2 == 0) ? e[static_cast<std::size_t>(j)] : -e[static_cast<std::size_t>(j)];
  }
  return PolyQ::from_coeffs(std::move(coeffs));
}

namespace detail {

[[nodiscard]] inline std::optional<std::vector<std::int64_t>> small_divisors(const BigInt& v) {
  BigInt a = v < 0 ? BigInt(-v) : v;
  if (a > BigInt(std::int64_t(1) << 62)) return std::nullopt;
  const std::int64_t x = static_cast<std::int64_t>(a);
  std::vector<std::int64_t> div;
  for (std::int64_t d = 1; d * d <= x; ++d) {
    if (x % d == 0) {
      div.push_back(d);
      if (d != x / d) div.push_back(x / d);
    }
  }
  return div;
}

}  // namespace detail

/// All eigenvalues as exact rationals, sorted nondecreasing, when the
/// characteristic polynomial splits over the rationals; nullopt otherwise
/// (irrational spectra, or coefficients too large to factor).
[[nodiscard]] inline std::optional<std::vector<Rational>> rational_eigenvalues(const SymMat<Rational>& p) {
  const int n = p.n();
  if (n == 0) return std::vector<Rational>{};
  PolyQ cp = char_poly(p);
  // clear denominators to integer coefficients
  BigInt den_lcm(1);
  for (const Rational& c : cp.coeffs()) {
    const BigInt d = rat_den(c);
    den_lcm = den_lcm / gcd(den_lcm, d) * d;
  }
  std::vector<BigInt> ic;
  ic.reserve(cp.coeffs().size());
  for (const Rational& c : cp.coeffs()) ic.push_back(rat_num(c * Rational(den_lcm)));

  std::vector<Rational> roots;
  // strip roots at zero
  std::size_t low = 0;
  while (low < ic.size() - 1 && ic[low] == 0) {
    roots.emplace_back(0);
    ++low;
  }
  std::vector<BigInt> w(ic.begin() + static_cast<std::ptrdiff_t>(low), ic.end());
  while (w.size() > 1) {
    const auto ps = detail::small_divisors(w.front());
    const auto qs = detail::small_divisors(w.back());
    if (!ps || !qs) return std::nullopt;
    bool found = false;
    for (std::int64_t q : *qs) {
      for (std::int64_t pp : *ps) {
        for (int sgn = 0; sgn < 2 && !found; ++sgn) {
          const Rational cand = sgn == 0 ? Rational(pp, q) : Rational(-pp, q);
          // Horner in exact arithmetic on the integer coefficients
          Rational acc(0);
          for (std::size_t i = w.size(); i-- > 0;) acc = acc * cand + Rational(w[i]);
          if (acc == 0) {
            roots.push_back(cand);
            // synthetic division by (t - cand): integer coeffs may become rational;
            // rescale afterwards
            std::vector<Rational> quo(w.size() - 1, Rational(0));
            Rational carry(0);
            for (std::size_t i = w.size(); i-- > 1;) {
              carry = Rational(w[i]) + carry * cand;
              quo[i - 1] = carry;
            }
            BigInt l(1);
            for (const Rational& c : quo) {
              const BigInt d = rat_den(c);
              l = l / gcd(l, d) * d;
            }
            w.clear();
            for (const Rational& c : quo) w.push_back(rat_num(c * Rational(l)));
            found = true;
          }
        }
        if (found) break;
      }
      if (found) break;
    }
    if (!found) return std::nullopt;
  }
  if (static_cast<int>(roots.size()) != n) return std::nullopt;
  std::sort(roots.begin(), roots.end());
  return roots;
}

/// Strict positive definiteness via elimination pivots: all leading principal
/// minors positive. Exact for rationals; float callers should prefer Jacobi.
template <class S>
[[nodiscard]] bool is_positive_definite(SymMat<S> a) {
  const int n = a.n();
  for (int k = 0; k < n; ++k) {
    if (!(S(0) < a(k, k))) return false;
    for (int i = k + 1; i < n; ++i) {
      const S f = a(i, k) / a(k, k);
      for (int j = k; j < n; ++j) a(i, j) = a(i, j) - f * a(k, j);
    }
  }
  return true;
}

}  // namespace wsigma
