#pragma once

/// Weighted Newton transforms T_k, Newton scalars s_k, trace-free transforms
/// E_k, elliptic cone certificates, and the Newton/Maclaurin gap reports, all
/// on symmetric endomorphisms. Scalars never require eigenvalues: every
/// sigma_k comes from trace power sums through the shared driver.

#include <optional>
#include <stdexcept>
#include <vector>

#include "wsigma/symmat.hpp"
#include "wsigma/wsym.hpp"

namespace wsigma {

template <class S>
struct MatrixState {
  S m;
  S lambda;
  SymMat<S> P;

  [[nodiscard]] int dim() const { return P.n(); }
  [[nodiscard]] S z() const { return lambda / m; }
};

[[nodiscard]] inline MatrixState<Rational> make_matrix_state(const Rational& m, const Rational& lambda,
                                                             SymMat<Rational> p) {
  if (!(m > 0)) throw std::domain_error("matrix state needs m > 0");
  return {m, lambda, std::move(p)};
}

/// Float mode symmetrizes; the asymmetric part must already be negligible.
[[nodiscard]] inline MatrixState<double> make_matrix_state(double m, double lambda, SymMat<double> p) {
  if (!(m > 0)) throw std::domain_error("matrix state needs m > 0");
  for (int i = 0; i < p.n(); ++i)
    for (int j = i + 1; j < p.n(); ++j) {
      const double s = 0.5 * (p(i, j) + p(j, i));
      p(i, j) = s;
      p(j, i) = s;
    }
  return {m, lambda, std::move(p)};
}

template <class S>
[[nodiscard]] std::vector<S> sigma_of_matrix_all(const MatrixState<S>& st, int kmax) {
  return sigma_from_power_data(st.m, st.z(), trace_power_sums(st.P, kmax), kmax);
}

template <class S>
[[nodiscard]] S sigma_of_matrix(const MatrixState<S>& st, int k) {
  return sigma_of_matrix_all(st, k)[static_cast<std::size_t>(k)];
}

/// The eigenvalue route: spectrum of P when available exactly.
[[nodiscard]] inline std::optional<WeightedSpectrum<Rational>> eigen_spectrum(
    const MatrixState<Rational>& st) {
  const auto ev = rational_eigenvalues(st.P);
  if (!ev) return std::nullopt;
  return WeightedSpectrum<Rational>{st.m, st.lambda, *ev};
}

[[nodiscard]] inline WeightedSpectrum<double> eigen_spectrum(const MatrixState<double>& st) {
  return {st.m, st.lambda, jacobi_eigenvalues(st.P)};
}

/// T_0..T_kmax by the recursion T_{k+1} = sigma_{k+1} I - P T_k.
template <class S>
[[nodiscard]] std::vector<SymMat<S>> newton_transform_all(const MatrixState<S>& st, int kmax) {
  const auto sig = sigma_of_matrix_all(st, kmax);
  std::vector<SymMat<S>> t;
  t.reserve(static_cast<std::size_t>(kmax) + 1);
  t.push_back(SymMat<S>::identity(st.dim()));
  for (int k = 1; k <= kmax; ++k)
    t.push_back(sig[static_cast<std::size_t>(k)] * SymMat<S>::identity(st.dim()) - st.P * t.back());
  return t;
}

template <class S>
[[nodiscard]] SymMat<S> newton_transform(const MatrixState<S>& st, int k) {
  return newton_transform_all(st, k).back();
}

/// Independent route: T_k = sum_j (-1)^j sigma_{k-j} P^j by explicit powers.
template <class S>
[[nodiscard]] SymMat<S> newton_transform_direct(const MatrixState<S>& st, int k) {
  const auto sig = sigma_of_matrix_all(st, k);
  SymMat<S> acc = sig[static_cast<std::size_t>(k)] * SymMat<S>::identity(st.dim());
  SymMat<S> pw = SymMat<S>::identity(st.dim());
  for (int j = 1; j <= k; ++j) {
    pw = pw * st.P;
    const S c = (j % 2 == 0) ? sig[static_cast<std::size_t>(k - j)] : -sig[static_cast<std::size_t>(k - j)];
    acc = acc + c * pw;
  }
  return acc;
}

template <class S>
[[nodiscard]] std::vector<S> newton_scalar_all(const MatrixState<S>& st, int kmax) {
  const auto sig = sigma_of_matrix_all(st, kmax);
  const S z = st.z();
  std::vector<S> s(static_cast<std::size_t>(kmax) + 1, S(0));
  for (int k = 0; k <= kmax; ++k) {
    S zj(1);
    for (int j = 0; j <= k; ++j) {
      const S term = zj * sig[static_cast<std::size_t>(k - j)];
      s[static_cast<std::size_t>(k)] = (j % 2 == 0) ? s[static_cast<std::size_t>(k)] + term
                                                    : s[static_cast<std::size_t>(k)] - term;
      if (j < k) zj = zj * z;
    }
  }
  return s;
}

template <class S>
[[nodiscard]] S newton_scalar(const MatrixState<S>& st, int k) {
  return newton_scalar_all(st, k)[static_cast<std::size_t>(k)];
}

/// E_k = T_k - ((m+n-k)/(m+n)) sigma_k I.
template <class S>
[[nodiscard]] SymMat<S> tracefree_newton(const MatrixState<S>& st, int k) {
  const S mn = st.m + S(st.dim());
  const S c = (mn - S(k)) / mn * sigma_of_matrix(st, k);
  return newton_transform(st, k) - c * SymMat<S>::identity(st.dim());
}

/// tr E_k - [ (m(m+n-k)/(m+n)) sigma_k - m s_k ]; identically zero.
template <class S>
[[nodiscard]] S tracefree_trace_residual(const MatrixState<S>& st, int k) {
  const S mn = st.m + S(st.dim());
  const S expected = st.m * (mn - S(k)) / mn * sigma_of_matrix(st, k) - st.m * newton_scalar(st, k);
  return tracefree_newton(st, k).trace() - expected;
}

/// <T_k, P - zI> - [(k+1) sigma_{k+1} - (m+n-k) z sigma_k]; identically zero.
template <class S>
[[nodiscard]] S pairing_identity_residual(const MatrixState<S>& st, int k) {
  const auto sig = sigma_of_matrix_all(st, k + 1);
  const S z = st.z();
  const S mn = st.m + S(st.dim());
  const SymMat<S> diff = st.P - z * SymMat<S>::identity(st.dim());
  const S lhs = newton_transform(st, k).inner(diff);
  const S rhs = S(k + 1) * sig[static_cast<std::size_t>(k + 1)] - (mn - S(k)) * z * sig[static_cast<std::size_t>(k)];
  return lhs - rhs;
}

/// <E_k, P - zI> - [(k+1) sigma_{k+1} - ((m+n-k)/(m+n)) sigma_1 sigma_k]; identically zero.
template <class S>
[[nodiscard]] S tracefree_pairing_residual(const MatrixState<S>& st, int k) {
  const auto sig = sigma_of_matrix_all(st, k + 1);
  const S z = st.z();
  const S mn = st.m + S(st.dim());
  const SymMat<S> diff = st.P - z * SymMat<S>::identity(st.dim());
  const S lhs = tracefree_newton(st, k).inner(diff);
  const S rhs = S(k + 1) * sig[static_cast<std::size_t>(k + 1)] -
                (mn - S(k)) / mn * sig[1] * sig[static_cast<std::size_t>(k)];
  return lhs - rhs;
}

enum class ConeSign { Positive, Negative };

template <class S>
struct ConeReport {
  int k = 0;
  ConeSign sign = ConeSign::Positive;
  bool member = false;
  std::vector<S> sigma_values;          // sigma_1..sigma_k
  std::optional<int> first_violation;   // smallest j with (sign)^j sigma_j <= 0
  // populated only when member and k >= 1:
  bool t_prev_definite = false;         // (sign)^{k-1} T_{k-1} positive definite
  S s_prev = S(0);                      // (sign)^{k-1} s_{k-1}
  double min_eig_t_prev = 0.0;          // least eigenvalue of (sign)^{k-1} T_{k-1}
};

/// Membership in the elliptic k-cone: (sign)^j sigma_j > 0 for 1 <= j <= k,
/// strict (exact zero is non-member). Member states also carry the
/// definiteness certificate for the previous Newton transform.
template <class S>
[[nodiscard]] ConeReport<S> cone_membership(const MatrixState<S>& st, int k, ConeSign sign) {
  if (k < 0) throw std::invalid_argument("cone_membership: k >= 0");
  ConeReport<S> rep;
  rep.k = k;
  rep.sign = sign;
  const auto sig = sigma_of_matrix_all(st, k);
  rep.member = true;
  for (int j = 1; j <= k; ++j) {
    S v = sig[static_cast<std::size_t>(j)];
    if (sign == ConeSign::Negative && j % 2 == 1) v = -v;
    rep.sigma_values.push_back(sig[static_cast<std::size_t>(j)]);
    if (rep.member && !(S(0) < v)) {
      rep.member = false;
      rep.first_violation = j;
    }
  }
  if (rep.member && k >= 1) {
    SymMat<S> tprev = newton_transform(st, k - 1);
    S sprev = newton_scalar(st, k - 1);
    if (sign == ConeSign::Negative && (k - 1) % 2 == 1) {
      tprev = S(-1) * tprev;
      sprev = -sprev;
    }
    rep.t_prev_definite = is_positive_definite(tprev);
    rep.s_prev = sprev;
    if constexpr (std::is_same_v<S, Rational>) {
      const auto ev = jacobi_eigenvalues(to_double(tprev));
      rep.min_eig_t_prev = ev.empty() ? 0.0 : ev.front();
    } else {
      const auto ev = jacobi_eigenvalues(tprev);
      rep.min_eig_t_prev = ev.empty() ? 0.0 : ev.front();
    }
  }
  return rep;
}

template <class S>
struct MaclaurinReport {
  S value = S(0);         // meaningful only when cone.member
  ConeReport<S> cone;
  bool below_range_integer_m = false;
  bool degenerate_truncation = false;  // integer m + n = k: both sides vanish on the whole cone
};

/// Gap (sign)^{k+1}[sigma_{k+1} - ((m+n-k)/((m+n)(k+1))) sigma_1 sigma_k],
/// nonpositive on the cone, zero only at P = zI. Cone violations come back
/// in the report instead of a value.
template <class S>
[[nodiscard]] MaclaurinReport<S> maclaurin_gap(const MatrixState<S>& st, int k, ConeSign sign) {
  if (k < 1) throw std::invalid_argument("maclaurin_gap: k >= 1");
  MaclaurinReport<S> rep;
  if (st.m < S(k - 1)) {
    bool integral;
    if constexpr (std::is_same_v<S, Rational>) {
      integral = is_integer(st.m);
    } else {
      const double r = static_cast<double>(static_cast<long long>(st.m));
      integral = detail::near(st.m, r);
    }
    if (!integral)
      throw std::domain_error("maclaurin_gap: non-integer m below k - 1 is outside the inequality");
    rep.below_range_integer_m = true;
  }
  rep.cone = cone_membership(st, k, sign);
  if (!rep.cone.member) return rep;
  const auto sig = sigma_of_matrix_all(st, k + 1);
  const S mn = st.m + S(st.dim());
  {
    bool m_integral;
    if constexpr (std::is_same_v<S, Rational>) {
      m_integral = is_integer(st.m);
    } else {
      m_integral = detail::near(st.m, static_cast<double>(static_cast<long long>(st.m + 0.5)));
    }
    rep.degenerate_truncation = m_integral && detail::scalar_eq(mn, S(k));
  }
  S v = sig[static_cast<std::size_t>(k + 1)] -
        (mn - S(k)) / (mn * S(k + 1)) * sig[1] * sig[static_cast<std::size_t>(k)];
  if (sign == ConeSign::Negative && (k + 1) % 2 == 1) v = -v;
  rep.value = v;
  return rep;
}

/// d/dkappa sigma_k(lambda + m kappa; P) - m s_{k-1}(lambda + m kappa; P),
/// differentiated exactly as a polynomial in kappa, evaluated at the given
/// kappa; identically zero.
template <class S>
[[nodiscard]] S kappa_derivative_residual(const MatrixState<S>& st, int k, const S& kappa) {
  using P = Polynomial<S>;
  if (k < 1) throw std::invalid_argument("kappa_derivative_residual: k >= 1");
  const P zk = P::from_coeffs({st.z(), S(1)});
  const P m_const(st.m);
  std::vector<P> psums;
  for (const S& p : trace_power_sums(st.P, k)) psums.emplace_back(p);
  const auto sig = sigma_from_power_data(m_const, zk, psums, k);
  P s(S(0));
  P zkj(S(1));
  for (int j = 0; j <= k - 1; ++j) {
    const P term = zkj * sig[static_cast<std::size_t>(k - 1 - j)];
    s = (j % 2 == 0) ? s + term : s - term;
    if (j < k - 1) zkj = zkj * zk;
  }
  const P residual = sig[static_cast<std::size_t>(k)].derivative() - m_const * s;
  return residual.eval(kappa);
}

/// Classical (unweighted) sigma of a matrix: the m = 0 driver on trace sums.
template <class S>
[[nodiscard]] std::vector<S> classical_sigma_all(const SymMat<S>& p, int kmax) {
  return sigma_from_power_data(S(0), S(0), trace_power_sums(p, kmax), kmax);
}

/// P (+) z I_mint, the block matrix realizing an integer-m weighted state.
template <class S>
[[nodiscard]] SymMat<S> block_embed(const MatrixState<S>& st, int mint) {
  const int n = st.dim();
  SymMat<S> b(n + mint);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = st.P(i, j);
  const S z = st.z();
  for (int i = n; i < n + mint; ++i) b(i, i) = z;
  return b;
}

/// sigma_k^m(lambda; P) - e_k(P (+) zI_m) for integer m; identically zero.
template <class S>
[[nodiscard]] S block_sigma_residual(const MatrixState<S>& st, int mint, int k) {
  const auto cls = classical_sigma_all(block_embed(st, mint), k);
  return sigma_of_matrix(st, k) - cls[static_cast<std::size_t>(k)];
}

/// Classical Newton transform of the block matrix minus T_k^m (+) s_k^m I_m.
template <class S>
[[nodiscard]] SymMat<S> block_newton_residual(const MatrixState<S>& st, int mint, int k) {
  const SymMat<S> b = block_embed(st, mint);
  const auto sig = classical_sigma_all(b, k);
  SymMat<S> t = SymMat<S>::identity(b.n());
  for (int j = 1; j <= k; ++j) t = sig[static_cast<std::size_t>(j)] * SymMat<S>::identity(b.n()) - b * t;
  SymMat<S> expect(b.n());
  const SymMat<S> tkm = newton_transform(st, k);
  const S skm = newton_scalar(st, k);
  for (int i = 0; i < st.dim(); ++i)
    for (int j = 0; j < st.dim(); ++j) expect(i, j) = tkm(i, j);
  for (int i = st.dim(); i < b.n(); ++i) expect(i, i) = skm;
  return t - expect;
}

/// Classical E_k of the block matrix minus E_k^m (+) (-tr E_k^m / m) I_m.
template <class S>
[[nodiscard]] SymMat<S> block_tracefree_residual(const MatrixState<S>& st, int mint, int k) {
  const SymMat<S> b = block_embed(st, mint);
  const auto sig = classical_sigma_all(b, k);
  SymMat<S> t = SymMat<S>::identity(b.n());
  for (int j = 1; j <= k; ++j) t = sig[static_cast<std::size_t>(j)] * SymMat<S>::identity(b.n()) - b * t;
  const S nn(b.n());
  const SymMat<S> ecls = t - (nn - S(k)) / nn * sig[static_cast<std::size_t>(k)] * SymMat<S>::identity(b.n());

  const SymMat<S> ekm = tracefree_newton(st, k);
  const S tail = -ekm.trace() / S(mint);
  SymMat<S> expect(b.n());
  for (int i = 0; i < st.dim(); ++i)
    for (int j = 0; j < st.dim(); ++j) expect(i, j) = ekm(i, j);
  for (int i = st.dim(); i < b.n(); ++i) expect(i, i) = tail;
  return ecls - expect;
}

}  // namespace wsigma
