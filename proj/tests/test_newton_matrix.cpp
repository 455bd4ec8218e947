#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "wsigma/newton_matrix.hpp"

using namespace wsigma;
using testutil::rand_entries;
using testutil::rand_int;
using testutil::rand_positive_rational;
using testutil::rand_rational;

namespace {

Rational Q(long long n, long long d = 1) { return Rational(n, d); }

SymMat<Rational> rand_sym(int n) {
  SymMat<Rational> p(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const Rational v = rand_rational();
      p(i, j) = v;
      p(j, i) = v;
    }
  return p;
}

MatrixState<Rational> rand_state(int n) {
  return make_matrix_state(rand_positive_rational(), rand_rational(), rand_sym(n));
}

}  // namespace

TEST_CASE("matrix sigmas match the spectrum route") {
  const auto st = make_matrix_state(Q(2), Q(2), SymMat<Rational>::diag({Q(1), Q(1)}));
  CHECK(sigma_of_matrix(st, 2) == Q(6));
  CHECK(sigma_of_matrix(st, 0) == Q(1));

  // P = (lambda/m) I has the all-equal closed form binom(m+n,k) z^k
  const auto iso = make_matrix_state(Q(3), Q(6), SymMat<Rational>::diag({Q(2), Q(2), Q(2)}));
  // m+n = 6, z = 2: sigma_2 = 15 * 4
  CHECK(sigma_of_matrix(iso, 2) == Q(60));

  CHECK_THROWS_AS(SymMat<Rational>::from_rows({{Q(0), Q(1)}, {Q(2), Q(0)}}), std::invalid_argument);

  for (int trial = 0; trial < 60; ++trial) {
    const int n = static_cast<int>(rand_int(1, 3));
    const auto s = rand_state(n);
    const auto ev = rational_eigenvalues(s.P);
    if (!ev) continue;
    const WeightedSpectrum<Rational> ws{s.m, s.lambda, *ev};
    for (int k = 0; k <= 4; ++k)
      CHECK(sigma_of_matrix(s, k) == sigma_km(ws, k, Method::Recursive));
  }
}

TEST_CASE("exact eigenvalues from the characteristic polynomial") {
  // [[2,1],[1,2]] has eigenvalues 1 and 3
  const auto p = SymMat<Rational>::from_rows({{Q(2), Q(1)}, {Q(1), Q(2)}});
  const auto ev = rational_eigenvalues(p);
  REQUIRE(ev.has_value());
  CHECK((*ev)[0] == Q(1));
  CHECK((*ev)[1] == Q(3));

  // [[0,1],[1,0]] scaled by 1/2: eigenvalues -1/2, 1/2
  const auto h = SymMat<Rational>::from_rows({{Q(0), Q(1, 2)}, {Q(1, 2), Q(0)}});
  const auto evh = rational_eigenvalues(h);
  REQUIRE(evh.has_value());
  CHECK((*evh)[0] == Q(-1, 2));
  CHECK((*evh)[1] == Q(1, 2));

  // [[1,1],[1,2]] has irrational eigenvalues
  const auto irr = SymMat<Rational>::from_rows({{Q(1), Q(1)}, {Q(1), Q(2)}});
  CHECK_FALSE(rational_eigenvalues(irr).has_value());
}

TEST_CASE("float eigenvalues by rotation sweeps") {
  SymMat<double> p(3);
  p(0, 0) = 2; p(1, 1) = 3; p(2, 2) = 4;
  p(0, 1) = p(1, 0) = 1;
  const auto ev = jacobi_eigenvalues(p);
  // block [[2,1],[1,3]] has eigenvalues (5 +- sqrt(5))/2
  CHECK(std::fabs(ev[0] - (5 - std::sqrt(5.0)) / 2) < 1e-12);
  CHECK(std::fabs(ev[1] - (5 + std::sqrt(5.0)) / 2) < 1e-12);
  CHECK(std::fabs(ev[2] - 4.0) < 1e-12);
}

TEST_CASE("transform frozen values and the recursion") {
  const auto st = make_matrix_state(Q(2), Q(2), SymMat<Rational>::diag({Q(1), Q(1)}));
  CHECK(newton_transform(st, 0) == SymMat<Rational>::identity(2));
  CHECK(newton_transform(st, 1) == SymMat<Rational>::diag({Q(3), Q(3)}));
  CHECK(newton_transform(st, 2) == SymMat<Rational>::diag({Q(3), Q(3)}));

  for (int trial = 0; trial < 40; ++trial) {
    const int n = static_cast<int>(rand_int(1, 3));
    const auto s = rand_state(n);
    for (int k = 0; k <= 4; ++k)
      CHECK(is_exact_zero(newton_transform(s, k) - newton_transform_direct(s, k)));
  }
}

TEST_CASE("transform eigenvalues are the one-entry-removed sigmas") {
  for (int trial = 0; trial < 40; ++trial) {
    const int n = static_cast<int>(rand_int(1, 4));
    const Rational m = rand_positive_rational();
    const Rational lambda = rand_rational();
    const auto entries = rand_entries(n);
    const auto st = make_matrix_state(m, lambda, SymMat<Rational>::diag(entries));
    const int k = static_cast<int>(rand_int(0, 4));
    const auto tk = newton_transform(st, k);
    for (int i = 0; i < n; ++i) {
      WeightedSpectrum<Rational> rest{m, lambda, entries};
      rest.entries.erase(rest.entries.begin() + i);
      CHECK(tk(i, i) == sigma_km(rest, k, Method::Recursive));
    }
  }
}

TEST_CASE("scalar companions of the matrix transform") {
  const auto st = make_matrix_state(Q(2), Q(2), SymMat<Rational>::diag({Q(1), Q(1)}));
  CHECK(newton_scalar(st, 0) == Q(1));
  CHECK(newton_scalar(st, 1) == Q(3));
  CHECK(newton_scalar(st, 2) == Q(3));
}

TEST_CASE("trace-free transform and its pairings") {
  const auto st = make_matrix_state(Q(2), Q(2), SymMat<Rational>::diag({Q(1), Q(2)}));
  const auto e1 = tracefree_newton(st, 1);
  CHECK(e1 == SymMat<Rational>::diag({Q(1, 4), Q(-3, 4)}));
  const SymMat<Rational> diff = st.P - st.z() * SymMat<Rational>::identity(2);
  CHECK(e1.inner(diff) == Q(-3, 4));
  CHECK(pairing_identity_residual(st, 1) == Q(0));
  CHECK(tracefree_pairing_residual(st, 1) == Q(0));

  // symmetric point: all pairings vanish
  const auto iso = make_matrix_state(Q(3), Q(3), SymMat<Rational>::identity(2));
  for (int k = 0; k <= 3; ++k) {
    CHECK(tracefree_pairing_residual(iso, k) == Q(0));
    const SymMat<Rational> d0 = iso.P - iso.z() * SymMat<Rational>::identity(2);
    CHECK(tracefree_newton(iso, k).inner(d0) == Q(0));
  }

  for (int trial = 0; trial < 40; ++trial) {
    const int n = static_cast<int>(rand_int(1, 3));
    const auto s = rand_state(n);
    const int k = static_cast<int>(rand_int(0, 4));
    CHECK(pairing_identity_residual(s, k) == Q(0));
    CHECK(tracefree_pairing_residual(s, k) == Q(0));
    CHECK(tracefree_trace_residual(s, k) == Q(0));
  }
}

TEST_CASE("integer weight realized as a block extension") {
  for (int m = 1; m <= 4; ++m) {
    for (int trial = 0; trial < 12; ++trial) {
      const int n = static_cast<int>(rand_int(1, 3));
      const auto st = make_matrix_state(Q(m), rand_rational(), rand_sym(n));
      for (int k = 0; k <= m + n; ++k) {
        CHECK(block_sigma_residual(st, m, k) == Q(0));
        CHECK(is_exact_zero(block_newton_residual(st, m, k)));
        CHECK(is_exact_zero(block_tracefree_residual(st, m, k)));
        // the extended trace-free transform really is trace-free
        const auto ek = tracefree_newton(st, k);
        SymMat<Rational> ext(n + m);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) ext(i, j) = ek(i, j);
        for (int i = n; i < n + m; ++i) ext(i, i) = -ek.trace() / Q(m);
        CHECK(ext.trace() == Q(0));
      }
    }
  }
}

TEST_CASE("cone membership certificates") {
  // all-equal point: member with binomial sigmas
  const auto iso = make_matrix_state(Q(2), Q(2), SymMat<Rational>::identity(2));
  for (int k = 1; k <= 4; ++k) {
    const auto rep = cone_membership(iso, k, ConeSign::Positive);
    CHECK(rep.member);
    CHECK(rep.t_prev_definite);
    CHECK(rep.s_prev > Q(0));
    CHECK(rep.min_eig_t_prev > 0.0);
  }

  // sign flip: negative cone at odd k
  const auto neg = make_matrix_state(Q(2), Q(-2), Q(-1) * SymMat<Rational>::identity(2));
  const auto repn = cone_membership(neg, 3, ConeSign::Negative);
  CHECK(repn.member);
  CHECK(repn.t_prev_definite);
  CHECK(repn.s_prev > Q(0));

  const auto st = make_matrix_state(Q(2), Q(2), SymMat<Rational>::diag({Q(1), Q(1)}));
  const auto rep2 = cone_membership(st, 2, ConeSign::Positive);
  CHECK(rep2.member);
  CHECK(rep2.sigma_values[0] == Q(4));
  CHECK(rep2.sigma_values[1] == Q(6));
  CHECK(rep2.s_prev == Q(3));
  CHECK(std::fabs(rep2.min_eig_t_prev - 3.0) < 1e-12);

  // strictness: a zero sigma is a violation
  const auto zero = make_matrix_state(Q(1), Q(0), SymMat<Rational>::diag({Q(0)}));
  const auto repz = cone_membership(zero, 1, ConeSign::Positive);
  CHECK_FALSE(repz.member);
  REQUIRE(repz.first_violation.has_value());
  CHECK(*repz.first_violation == 1);

  // nesting: membership at k+1 implies membership at k
  for (int trial = 0; trial < 200; ++trial) {
    const int n = static_cast<int>(rand_int(1, 3));
    const auto s = rand_state(n);
    const int k = static_cast<int>(rand_int(1, 3));
    const auto hi = cone_membership(s, k + 1, ConeSign::Positive);
    const auto lo = cone_membership(s, k, ConeSign::Positive);
    if (hi.member) CHECK(lo.member);
    const auto hin = cone_membership(s, k + 1, ConeSign::Negative);
    const auto lon = cone_membership(s, k, ConeSign::Negative);
    if (hin.member) CHECK(lon.member);
  }
}

TEST_CASE("second gap on the cone") {
  const auto iso = make_matrix_state(Q(2), Q(2), SymMat<Rational>::identity(2));
  const auto r0 = maclaurin_gap(iso, 2, ConeSign::Positive);
  CHECK(r0.cone.member);
  CHECK(r0.value == Q(0));

  const auto st = make_matrix_state(Q(2), Q(2), SymMat<Rational>::diag({Q(1), Q(2)}));
  const auto r1 = maclaurin_gap(st, 1, ConeSign::Positive);
  CHECK(r1.cone.member);
  CHECK(r1.value == Q(-3, 8));

  // the trace-free pairing equals (k+1) times the gap
  const SymMat<Rational> d = st.P - st.z() * SymMat<Rational>::identity(2);
  CHECK(tracefree_newton(st, 1).inner(d) == Q(2) * r1.value);

  int cone_hits = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = static_cast<int>(rand_int(1, 3));
    const int k = static_cast<int>(rand_int(1, 3));
    Rational m = rand_positive_rational();
    if (m < Q(k - 1)) m = m + Q(k - 1);
    const MatrixState<Rational> s{m, rand_rational(), rand_sym(n)};
    for (const ConeSign sign : {ConeSign::Positive, ConeSign::Negative}) {
      const auto rep = maclaurin_gap(s, k, sign);
      if (!rep.cone.member) continue;
      ++cone_hits;
      CHECK(rep.value <= Q(0));
      // equality only at the isotropic point, off the truncation set
      if (rep.value == Q(0) && !rep.degenerate_truncation)
        CHECK(is_exact_zero(s.P - s.z() * SymMat<Rational>::identity(n)));
    }
  }
  CHECK(cone_hits > 500);

  CHECK_THROWS_AS(maclaurin_gap(make_matrix_state(Q(1, 2), Q(1), SymMat<Rational>::identity(1)), 2,
                                ConeSign::Positive),
                  std::domain_error);
}

TEST_CASE("scale derivative against the previous scalar, matrix form") {
  const auto st = make_matrix_state(Q(2), Q(2), SymMat<Rational>::diag({Q(1), Q(1)}));
  CHECK(kappa_derivative_residual(st, 2, Q(1)) == Q(0));
  for (int trial = 0; trial < 30; ++trial) {
    const int n = static_cast<int>(rand_int(1, 3));
    const auto s = rand_state(n);
    const int k = static_cast<int>(rand_int(1, 4));
    CHECK(kappa_derivative_residual(s, k, rand_rational()) == Q(0));
  }
}

TEST_CASE("float mode tracks exact mode") {
  for (int trial = 0; trial < 40; ++trial) {
    const int n = static_cast<int>(rand_int(1, 3));
    const auto s = rand_state(n);
    MatrixState<double> sd{to_double(s.m), to_double(s.lambda), to_double(s.P)};
    for (int k = 0; k <= 4; ++k) {
      const double exact = to_double(sigma_of_matrix(s, k));
      const double approx = sigma_of_matrix(sd, k);
      CHECK(std::fabs(exact - approx) <= 1e-10 * (1.0 + std::fabs(exact)));
    }
  }
}

TEST_CASE("positive definiteness by exact pivots") {
  CHECK(is_positive_definite(SymMat<Rational>::identity(3)));
  CHECK_FALSE(is_positive_definite(SymMat<Rational>::diag({Q(1), Q(0)})));
  CHECK_FALSE(is_positive_definite(SymMat<Rational>::diag({Q(1), Q(-1)})));
  // [[2,3],[3,2]] has a negative eigenvalue
  CHECK_FALSE(is_positive_definite(SymMat<Rational>::from_rows({{Q(2), Q(3)}, {Q(3), Q(2)}})));
  // [[2,1],[1,2]] is positive definite
  CHECK(is_positive_definite(SymMat<Rational>::from_rows({{Q(2), Q(1)}, {Q(1), Q(2)}})));
}
