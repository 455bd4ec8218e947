#pragma once

/// Weighted elementary symmetric polynomials sigma_k^m(lambda; Lambda) and the
/// scalar Newton machinery built on them. One set of templates serves three
/// scalar modes: exact rationals, rational functions of formal m, binary64.
///
/// Internal convention: z := lambda / m is the distinguished entry. All
/// recursions run on (m, z, power sums) so the same driver also serves matrix
/// and geometry callers that never materialize eigenvalues.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsigma/scalars.hpp"

namespace wsigma {

enum class Method { Recursive, Direct };

/// Classical e_0..e_kmax of the given entries (zero beyond the dimension).
template <class S>
[[nodiscard]] std::vector<S> elementary_symmetric(const std::vector<S>& entries, int kmax) {
  std::vector<S> e(static_cast<std::size_t>(kmax) + 1, S(0));
  e[0] = S(1);
  int used = 0;
  for (const S& x : entries) {
    ++used;
    const int top = used < kmax ? used : kmax;
    for (int j = top; j >= 1; --j) e[j] = e[j] + x * e[j - 1];
  }
  return e;
}

/// sigma_0..sigma_kmax from the weighted power-sum data
///   N_j = m z^j + p_j,   sigma_k = (1/k) sum_{j=1}^{k} (-1)^{j-1} sigma_{k-j} N_j.
/// Ring needs +,-,*, construction from small ints, and div_int.
template <class Ring>
[[nodiscard]] std::vector<Ring> sigma_from_power_data(const Ring& m, const Ring& z,
                                                      const std::vector<Ring>& psums, int kmax) {
  if (static_cast<int>(psums.size()) < kmax)
    throw std::invalid_argument("sigma_from_power_data: need kmax power sums");
  std::vector<Ring> zp(static_cast<std::size_t>(kmax) + 1, Ring(1));
  for (int j = 1; j <= kmax; ++j) zp[j] = zp[j - 1] * z;
  std::vector<Ring> nk(static_cast<std::size_t>(kmax) + 1, Ring(0));
  for (int j = 1; j <= kmax; ++j) nk[j] = m * zp[j] + psums[j - 1];
  std::vector<Ring> sig(static_cast<std::size_t>(kmax) + 1, Ring(0));
  sig[0] = Ring(1);
  for (int k = 1; k <= kmax; ++k) {
    Ring acc(0);
    for (int j = 1; j <= k; ++j) {
      const Ring term = sig[k - j] * nk[j];
      acc = (j % 2 == 1) ? acc + term : acc - term;
    }
    sig[k] = div_int(acc, k);
  }
  return sig;
}

/// sigma_0..sigma_kmax by the reduction to classical polynomials:
///   sigma_k = sum_j binom(m, j) z^j e_{k-j},  binom(m, j) = m(m-1)...(m-j+1)/j!.
template <class Ring>
[[nodiscard]] std::vector<Ring> sigma_from_esym(const Ring& m, const Ring& z,
                                                const std::vector<Ring>& esym, int kmax) {
  std::vector<Ring> sig(static_cast<std::size_t>(kmax) + 1, Ring(0));
  Ring binom_zj(1);  // binom(m, j) z^j, updated incrementally
  for (int j = 0; j <= kmax; ++j) {
    if (j > 0) binom_zj = div_int(binom_zj * (m - Ring(j - 1)) * z, j);
    for (int k = j; k <= kmax; ++k) {
      const std::size_t idx = static_cast<std::size_t>(k - j);
      if (idx < esym.size() && !(esym[idx] == Ring(0))) sig[k] = sig[k] + binom_zj * esym[idx];
    }
  }
  return sig;
}

/// A spectrum with the m-weighted distinguished entry lambda/m.
/// Numeric modes validate m > 0 at construction; only m is ever formal.
template <class S>
struct WeightedSpectrum {
  S m;
  S lambda;
  std::vector<S> entries;

  [[nodiscard]] int dim() const { return static_cast<int>(entries.size()); }
  [[nodiscard]] S z() const { return lambda / m; }
};

[[nodiscard]] inline WeightedSpectrum<Rational> make_spectrum(const Rational& m,
                                                              const Rational& lambda,
                                                              std::vector<Rational> entries) {
  if (!(m > 0)) throw std::domain_error("weighted spectrum needs m > 0 in numeric mode");
  return {m, lambda, std::move(entries)};
}

[[nodiscard]] inline WeightedSpectrum<double> make_spectrum(double m, double lambda,
                                                            std::vector<double> entries) {
  if (!(m > 0)) throw std::domain_error("weighted spectrum needs m > 0 in float mode");
  return {m, lambda, std::move(entries)};
}

/// Symbolic mode: m is the formal parameter, lambda and entries stay rational.
[[nodiscard]] inline WeightedSpectrum<RationalFunctionM> make_spectrum_symbolic(
    const Rational& lambda, const std::vector<Rational>& entries) {
  WeightedSpectrum<RationalFunctionM> ws;
  ws.m = RationalFunctionM::m();
  ws.lambda = RationalFunctionM(lambda);
  ws.entries.reserve(entries.size());
  for (const auto& q : entries) ws.entries.emplace_back(q);
  return ws;
}

template <class S>
[[nodiscard]] std::vector<S> power_sums_of(const std::vector<S>& entries, int kmax) {
  std::vector<S> p(static_cast<std::size_t>(kmax), S(0));
  for (const S& x : entries) {
    S xk = x;
    for (int j = 1; j <= kmax; ++j) {
      p[j - 1] = p[j - 1] + xk;
      if (j < kmax) xk = xk * x;
    }
  }
  return p;
}

/// Weighted power sum N_k = m (lambda/m)^k + sum entries^k, k >= 1.
template <class S>
[[nodiscard]] S power_sum(const WeightedSpectrum<S>& ws, int k) {
  if (k < 1) throw std::invalid_argument("power_sum: k >= 1");
  S acc = ws.m * scalar_pow(ws.z(), static_cast<unsigned>(k));
  for (const S& x : ws.entries) acc = acc + scalar_pow(x, static_cast<unsigned>(k));
  return acc;
}

template <class S>
[[nodiscard]] std::vector<S> sigma_all(const WeightedSpectrum<S>& ws, int kmax, Method method) {
  if (kmax < 0) throw std::invalid_argument("sigma_all: kmax >= 0");
  if (method == Method::Recursive)
    return sigma_from_power_data(ws.m, ws.z(), power_sums_of(ws.entries, kmax), kmax);
  return sigma_from_esym(ws.m, ws.z(), elementary_symmetric(ws.entries, kmax), kmax);
}

template <class S>
[[nodiscard]] S sigma_km(const WeightedSpectrum<S>& ws, int k, Method method) {
  return sigma_all(ws, k, method)[static_cast<std::size_t>(k)];
}

/// Newton scalars s_0..s_kmax: s_k = sum_j (-1)^j z^j sigma_{k-j}.
template <class S>
[[nodiscard]] std::vector<S> newton_scalar_all(const WeightedSpectrum<S>& ws, int kmax) {
  const auto sig = sigma_all(ws, kmax, Method::Recursive);
  const S z = ws.z();
  std::vector<S> s(static_cast<std::size_t>(kmax) + 1, S(0));
  for (int k = 0; k <= kmax; ++k) {
    S zj(1);
    for (int j = 0; j <= k; ++j) {
      const S term = zj * sig[k - j];
      s[k] = (j % 2 == 0) ? s[k] + term : s[k] - term;
      if (j < k) zj = zj * z;
    }
  }
  return s;
}

template <class S>
[[nodiscard]] S newton_scalar(const WeightedSpectrum<S>& ws, int k) {
  return newton_scalar_all(ws, k)[static_cast<std::size_t>(k)];
}

/// s_{k+1} - (sigma_{k+1} - z s_k); identically zero.
template <class S>
[[nodiscard]] S newton_scalar_recursion_residual(const WeightedSpectrum<S>& ws, int k) {
  const auto s = newton_scalar_all(ws, k + 1);
  const auto sig = sigma_all(ws, k + 1, Method::Recursive);
  return s[k + 1] - (sig[k + 1] - ws.z() * s[k]);
}

/// s_k at parameter m minus sigma_k at parameter m-1 with scaled lambda slot;
/// identically zero (the m-1 spectrum keeps the same z).
template <class S>
[[nodiscard]] S newton_scalar_via_m_minus_1_residual(const WeightedSpectrum<S>& ws, int k) {
  const auto s = newton_scalar_all(ws, k);
  const auto sig1 =
      sigma_from_power_data(ws.m - S(1), ws.z(), power_sums_of(ws.entries, k), k);
  return s[k] - sig1[k];
}

/// sigma_k^m(l1 + l2; Lambda) - sum_j binom(m, j)(l1/m)^j sigma_{k-j}^{m-j}((m-j) l2 / m; Lambda).
/// Identically zero. Numeric mode rejects m in {1, ..., k} (an m-j slot would
/// degenerate); symbolic mode is unrestricted.
template <class S>
[[nodiscard]] S shift_lambda_residual(const WeightedSpectrum<S>& ws, const S& lambda1,
                                      const S& lambda2, int k) {
  if constexpr (!std::is_same_v<S, RationalFunctionM>) {
    for (int j = 1; j <= k; ++j)
      if (ws.m == S(j))
        throw std::domain_error("shift_lambda_residual: m - j = 0 for j = " + std::to_string(j));
  }
  WeightedSpectrum<S> shifted = ws;
  shifted.lambda = lambda1 + lambda2;
  const S lhs = sigma_km(shifted, k, Method::Recursive);

  const auto psums = power_sums_of(ws.entries, k);
  const S z1 = lambda1 / ws.m;
  const S z2 = lambda2 / ws.m;
  S rhs(0);
  S binom_z1j(1);
  for (int j = 0; j <= k; ++j) {
    if (j > 0) binom_z1j = div_int(binom_z1j * (ws.m - S(j - 1)) * z1, j);
    const auto sig = sigma_from_power_data(ws.m - S(j), z2, psums, k - j);
    rhs = rhs + binom_z1j * sig[static_cast<std::size_t>(k - j)];
  }
  return lhs - rhs;
}

/// sigma_k^m(lambda; Lambda) - sigma_k^m(lambda; Lambda minus entry i)
///   - entry_i * sigma_{k-1}^m(lambda; Lambda minus entry i); identically zero.
/// The index i is 1-based into the unsorted entry order.
template <class S>
[[nodiscard]] S remove_index_residual(const WeightedSpectrum<S>& ws, int i, int k) {
  if (i < 1 || i > ws.dim()) throw std::invalid_argument("remove_index_residual: index");
  if (k < 1) throw std::invalid_argument("remove_index_residual: k >= 1");
  WeightedSpectrum<S> rest = ws;
  rest.entries.erase(rest.entries.begin() + (i - 1));
  const S lhs = sigma_km(ws, k, Method::Recursive);
  const auto sig = sigma_all(rest, k, Method::Recursive);
  return lhs - sig[static_cast<std::size_t>(k)] -
         ws.entries[static_cast<std::size_t>(i - 1)] * sig[static_cast<std::size_t>(k - 1)];
}

/// Exact evaluation of a rational function of m at a numeric m.
[[nodiscard]] inline Rational rfm_eval(const RationalFunctionM& r, const Rational& m_value) {
  return r.eval(m_value);
}

/// Truncated coefficients of (1 + z t)^m prod_i (1 + entry_i t): index j holds
/// the t^j coefficient, computed by series multiplication rather than any
/// sigma recursion so the two routes stay independent.
template <class S>
[[nodiscard]] std::vector<S> generating_series(const WeightedSpectrum<S>& ws, int order) {
  std::vector<S> series(static_cast<std::size_t>(order) + 1, S(0));
  series[0] = S(1);
  const S z = ws.z();
  S binom_zj(1);
  for (int j = 1; j <= order; ++j) {
    binom_zj = div_int(binom_zj * (ws.m - S(j - 1)) * z, j);
    series[static_cast<std::size_t>(j)] = binom_zj;
  }
  for (const S& x : ws.entries) {
    for (int j = order; j >= 1; --j)
      series[static_cast<std::size_t>(j)] =
          series[static_cast<std::size_t>(j)] + x * series[static_cast<std::size_t>(j - 1)];
  }
  return series;
}

/// Normalized quantity p_k = (m+n)^k sigma_k / binom(m+n, k).
template <class S>
[[nodiscard]] S sigma_p_normalized(const WeightedSpectrum<S>& ws, int k) {
  const S mn = ws.m + S(ws.dim());
  S binom(1);
  for (int j = 1; j <= k; ++j) binom = div_int(binom * (mn - S(j - 1)), j);
  if (binom == S(0)) throw std::domain_error("sigma_p_normalized: binom(m+n, k) = 0");
  return scalar_pow(mn, static_cast<unsigned>(k)) * sigma_km(ws, k, Method::Recursive) / binom;
}

enum class EqualityCase { AllEqual, LambdaZeroSparse, BoundaryM, Strict };

[[nodiscard]] inline std::string to_string(EqualityCase c) {
  switch (c) {
    case EqualityCase::AllEqual: return "AllEqual";
    case EqualityCase::LambdaZeroSparse: return "LambdaZeroSparse";
    case EqualityCase::BoundaryM: return "BoundaryM";
    case EqualityCase::Strict: return "Strict";
  }
  return "?";
}

template <class S>
struct NewtonGapReport {
  S value;                      // sigma_{k-1} sigma_{k+1} - coeff * sigma_k^2, <= 0 when m >= k-1
  EqualityCase tag;
  bool below_range_integer_m;   // integer m < k-1 accepted but flagged
  bool tag_is_exact;            // false in float mode (tolerance-based tags)
  bool degenerate_truncation;   // integer m + n <= k: the generating polynomial has degree
                                // m + n, so the gap vanishes identically for every input,
                                // equality outside the three tagged cases
};

namespace detail {
inline bool near(double a, double b) {
  const double s = 1.0 + (a < 0 ? -a : a) + (b < 0 ? -b : b);
  const double d = a - b;
  return (d < 0 ? -d : d) <= 1e-9 * s;
}
inline bool scalar_eq(const Rational& a, const Rational& b) { return a == b; }
inline bool scalar_eq(double a, double b) { return near(a, b); }
}  // namespace detail

/// Gap of the weighted Newton inequality at index k, with its equality tag.
/// Numeric precondition m >= k-1; smaller integer m is allowed but flagged,
/// smaller non-integer m is rejected.
template <class S>
[[nodiscard]] NewtonGapReport<S> newton_gap(const WeightedSpectrum<S>& ws, int k) {
  static_assert(!std::is_same_v<S, RationalFunctionM>,
                "newton_gap compares against zero; use a numeric mode");
  if (k < 1) throw std::invalid_argument("newton_gap: k >= 1");
  NewtonGapReport<S> rep{};
  rep.below_range_integer_m = false;
  rep.tag_is_exact = std::is_same_v<S, Rational>;
  if (ws.m < S(k - 1)) {
    bool integral;
    if constexpr (std::is_same_v<S, Rational>) {
      integral = is_integer(ws.m);
    } else {
      integral = detail::near(ws.m, static_cast<double>(static_cast<long long>(ws.m)));
    }
    if (!integral)
      throw std::domain_error("newton_gap: non-integer m below k - 1 is outside the inequality");
    rep.below_range_integer_m = true;
  }

  const auto sig = sigma_all(ws, k + 1, Method::Recursive);
  const S mn = ws.m + S(ws.dim());
  {
    bool m_integral;
    if constexpr (std::is_same_v<S, Rational>) {
      m_integral = is_integer(ws.m);
    } else {
      m_integral = detail::near(ws.m, static_cast<double>(static_cast<long long>(ws.m + 0.5)));
    }
    rep.degenerate_truncation = m_integral && !(S(k) < mn);
  }
  const S coeff_den = S(k + 1) * (mn - S(k) + S(1));
  if (detail::scalar_eq(coeff_den, S(0))) {
    // only at integer m + n = k - 1, where sigma_k = sigma_{k+1} = 0 identically
    rep.value = sig[k - 1] * sig[k + 1];
  } else {
    const S coeff = S(k) * (mn - S(k)) / coeff_den;
    rep.value = sig[k - 1] * sig[k + 1] - coeff * sig[k] * sig[k];
  }

  const S z = ws.z();
  bool all_equal = true;
  int nonzero = 0;
  bool entries_zero = true;
  for (const S& x : ws.entries) {
    if (!detail::scalar_eq(x, z)) all_equal = false;
    if (!detail::scalar_eq(x, S(0))) {
      ++nonzero;
      entries_zero = false;
    }
  }
  if (all_equal)
    rep.tag = EqualityCase::AllEqual;
  else if (detail::scalar_eq(ws.lambda, S(0)) && nonzero <= k - 1)
    rep.tag = EqualityCase::LambdaZeroSparse;
  else if (detail::scalar_eq(ws.m, S(k - 1)) && entries_zero)
    rep.tag = EqualityCase::BoundaryM;
  else
    rep.tag = EqualityCase::Strict;
  return rep;
}

/// sigma_k^m(lambda + m kappa; Lambda) as an exact polynomial in kappa.
template <class S>
[[nodiscard]] Polynomial<S> kappa_sigma_poly(const WeightedSpectrum<S>& ws, int k) {
  using P = Polynomial<S>;
  const P zk = P::from_coeffs({ws.z(), S(1)});  // z + kappa
  const P m_const(ws.m);
  std::vector<P> psums;
  psums.reserve(static_cast<std::size_t>(k));
  for (const S& p : power_sums_of(ws.entries, k)) psums.emplace_back(p);
  return sigma_from_power_data(m_const, zk, psums, k)[static_cast<std::size_t>(k)];
}

/// d/dkappa sigma_k^m(lambda + m kappa) - m s_{k-1}^m(lambda + m kappa) as a
/// polynomial in kappa; identically zero.
template <class S>
[[nodiscard]] Polynomial<S> kappa_derivative_residual_poly(const WeightedSpectrum<S>& ws, int k) {
  using P = Polynomial<S>;
  if (k < 1) throw std::invalid_argument("kappa_derivative_residual: k >= 1");
  const P zk = P::from_coeffs({ws.z(), S(1)});
  const P m_const(ws.m);
  std::vector<P> psums;
  psums.reserve(static_cast<std::size_t>(k));
  for (const S& p : power_sums_of(ws.entries, k)) psums.emplace_back(p);
  const auto sig = sigma_from_power_data(m_const, zk, psums, k);
  // s_{k-1}(kappa) = sum_j (-1)^j (z + kappa)^j sigma_{k-1-j}(kappa)
  P s(S(0));
  P zkj(S(1));
  for (int j = 0; j <= k - 1; ++j) {
    const P term = zkj * sig[static_cast<std::size_t>(k - 1 - j)];
    s = (j % 2 == 0) ? s + term : s - term;
    if (j < k - 1) zkj = zkj * zk;
  }
  return sig[static_cast<std::size_t>(k)].derivative() - m_const * s;
}

}  // namespace wsigma
