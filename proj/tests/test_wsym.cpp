#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "wsigma/wsym.hpp"

using namespace wsigma;
using testutil::rand_entries;
using testutil::rand_int;
using testutil::rand_positive_rational;
using testutil::rand_rational;

namespace {
Rational Q(long long n, long long d = 1) { return Rational(n, d); }
}  // namespace

TEST_CASE("classical elementary symmetric values") {
  const std::vector<Rational> lam{Q(1), Q(2), Q(3)};
  CHECK(elementary_symmetric(lam, 3)[2] == Q(11));
  CHECK(elementary_symmetric(lam, 3)[0] == Q(1));
  const std::vector<Rational> two{Q(1), Q(2)};
  CHECK(elementary_symmetric(two, 3)[3] == Q(0));
}

TEST_CASE("weighted power sums") {
  const auto ws = make_spectrum(Q(2), Q(2), {Q(1), Q(1)});
  CHECK(power_sum(ws, 1) == Q(4));
  CHECK(power_sum(ws, 2) == Q(4));
  const auto ws2 = make_spectrum(Q(5, 7), Q(0), {Q(3)});
  CHECK(power_sum(ws2, 2) == Q(9));
  CHECK_THROWS_AS(power_sum(ws2, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_spectrum(Q(0), Q(1), {Q(1)}), std::domain_error);
}

TEST_CASE("weighted sigma frozen values, both methods") {
  const auto ws = make_spectrum(Q(2), Q(2), {Q(1), Q(1)});
  CHECK(sigma_km(ws, 2, Method::Recursive) == Q(6));
  CHECK(sigma_km(ws, 2, Method::Direct) == Q(6));
  CHECK(sigma_km(ws, 0, Method::Recursive) == Q(1));

  const auto classical = make_spectrum(Q(3), Q(0), {Q(2), Q(3)});
  CHECK(sigma_km(classical, 2, Method::Recursive) == Q(6));
  CHECK(sigma_km(classical, 2, Method::Direct) == Q(6));

  const auto ws12 = make_spectrum(Q(2), Q(2), {Q(1), Q(2)});
  CHECK(sigma_km(ws12, 2, Method::Recursive) == Q(9));
}

TEST_CASE("recursive and direct methods agree exactly") {
  for (int trial = 0; trial < 200; ++trial) {
    const int n = static_cast<int>(rand_int(0, 4));
    const auto ws = make_spectrum(rand_positive_rational(), rand_rational(), rand_entries(n));
    const int kmax = static_cast<int>(rand_int(0, 5));
    const auto a = sigma_all(ws, kmax, Method::Recursive);
    const auto b = sigma_all(ws, kmax, Method::Direct);
    for (int k = 0; k <= kmax; ++k) CHECK(a[static_cast<size_t>(k)] == b[static_cast<size_t>(k)]);
  }
}

TEST_CASE("methods agree in symbolic mode") {
  for (int trial = 0; trial < 25; ++trial) {
    const int n = static_cast<int>(rand_int(0, 3));
    const auto ws = make_spectrum_symbolic(rand_rational(), rand_entries(n));
    const int kmax = static_cast<int>(rand_int(0, 4));
    const auto a = sigma_all(ws, kmax, Method::Recursive);
    const auto b = sigma_all(ws, kmax, Method::Direct);
    for (int k = 0; k <= kmax; ++k) {
      CHECK((a[static_cast<size_t>(k)] - b[static_cast<size_t>(k)]).is_zero());
      CHECK(a[static_cast<size_t>(k)].is_canonical());
    }
  }
}

TEST_CASE("integer weight collapses to a repeated classical entry") {
  for (int m = 1; m <= 5; ++m) {
    for (int trial = 0; trial < 20; ++trial) {
      const int n = static_cast<int>(rand_int(0, 4));
      const Rational lambda = rand_rational();
      const auto entries = rand_entries(n);
      const auto ws = make_spectrum(Q(m), lambda, entries);
      std::vector<Rational> padded = entries;
      for (int i = 0; i < m; ++i) padded.push_back(lambda / m);
      const auto cls = elementary_symmetric(padded, m + n);
      for (int k = 0; k <= m + n; ++k)
        CHECK(sigma_km(ws, k, Method::Recursive) == cls[static_cast<size_t>(k)]);
      // and the weighted sigma keeps going past m+n without truncation rules
      CHECK(sigma_km(ws, m + n + 1, Method::Recursive) == Q(0));
    }
  }
}

TEST_CASE("splitting the distinguished entry into two parts") {
  const auto ws1 = make_spectrum(Q(3), Q(3), {Q(1)});
  CHECK(shift_lambda_residual(ws1, Q(3), Q(0), 1) == Q(0));
  CHECK(sigma_km(ws1, 1, Method::Recursive) == Q(4));

  // lambda1 = 0 leaves only the j = 0 term
  const auto ws2 = make_spectrum(Q(7, 2), Q(1), {Q(2), Q(-1)});
  CHECK(shift_lambda_residual(ws2, Q(0), Q(1), 3) == Q(0));

  // numeric m hitting m - j = 0 is rejected
  const auto ws3 = make_spectrum(Q(2), Q(1), {Q(1)});
  CHECK_THROWS_AS(shift_lambda_residual(ws3, Q(1), Q(1), 2), std::domain_error);

  // symbolic mode certifies the identity as a rational function of m
  for (int trial = 0; trial < 15; ++trial) {
    const int n = static_cast<int>(rand_int(0, 4));
    const auto ws = make_spectrum_symbolic(rand_rational(), rand_entries(n));
    const int k = static_cast<int>(rand_int(0, 4));
    const RationalFunctionM l1{rand_rational()};
    const RationalFunctionM l2{rand_rational()};
    CHECK(shift_lambda_residual(ws, l1, l2, k).is_zero());
  }
}

TEST_CASE("removing one entry") {
  const auto ws = make_spectrum(Q(2), Q(2), {Q(1), Q(1)});
  CHECK(remove_index_residual(ws, 1, 2) == Q(0));

  const auto wz = make_spectrum(Q(3, 2), Q(1), {Q(0), Q(2)});
  CHECK(remove_index_residual(wz, 1, 2) == Q(0));
  CHECK_THROWS_AS(remove_index_residual(wz, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(remove_index_residual(wz, 3, 1), std::invalid_argument);

  for (int trial = 0; trial < 15; ++trial) {
    const int n = static_cast<int>(rand_int(1, 5));
    const auto w = make_spectrum_symbolic(rand_rational(), rand_entries(n));
    const int k = static_cast<int>(rand_int(1, 5));
    const int i = static_cast<int>(rand_int(1, n));
    CHECK(remove_index_residual(w, i, k).is_zero());
  }
}

TEST_CASE("series coefficients reproduce the sigmas") {
  const auto ws = make_spectrum(Q(2), Q(2), {Q(1), Q(1)});
  const auto series = generating_series(ws, 5);
  CHECK(series[0] == Q(1));
  CHECK(series[1] == Q(4));
  // integer m: the series is a polynomial of degree m + n
  CHECK(series[5] == Q(0));

  for (int trial = 0; trial < 100; ++trial) {
    const int n = static_cast<int>(rand_int(0, 4));
    const auto w = make_spectrum(rand_positive_rational(), rand_rational(), rand_entries(n));
    const int order = static_cast<int>(rand_int(0, 5));
    const auto s = generating_series(w, order);
    for (int j = 0; j <= order; ++j)
      CHECK(s[static_cast<size_t>(j)] == sigma_km(w, j, Method::Recursive));
  }
}

TEST_CASE("rational functions of the weight evaluate exactly") {
  // binom(m,2)/m^2 normalizes to (m-1)/(2m)
  const RationalFunctionM m = RationalFunctionM::m();
  const RationalFunctionM r = m * (m - RationalFunctionM(1)) / RationalFunctionM(2) / (m * m);
  const RationalFunctionM expect(PolyQ::from_coeffs({Q(-1), Q(1)}), PolyQ::from_coeffs({Q(0), Q(2)}));
  CHECK(r == expect);
  CHECK(r.is_canonical());
  CHECK(rfm_eval(r, Q(2)) == Q(1, 4));
  CHECK_THROWS_AS(rfm_eval(r, Q(0)), PoleError);
}

TEST_CASE("scalar companions of the transform") {
  const auto ws = make_spectrum(Q(2), Q(2), {Q(1), Q(1)});
  CHECK(newton_scalar(ws, 0) == Q(1));
  CHECK(newton_scalar(ws, 1) == Q(3));
  CHECK(newton_scalar(ws, 2) == Q(3));

  for (int trial = 0; trial < 50; ++trial) {
    const int n = static_cast<int>(rand_int(0, 4));
    const auto w = make_spectrum(rand_positive_rational(), rand_rational(), rand_entries(n));
    const int k = static_cast<int>(rand_int(0, 4));
    CHECK(newton_scalar_recursion_residual(w, k) == Q(0));
    CHECK(newton_scalar_via_m_minus_1_residual(w, k) == Q(0));
  }
  for (int trial = 0; trial < 15; ++trial) {
    const int n = static_cast<int>(rand_int(0, 3));
    const auto w = make_spectrum_symbolic(rand_rational(), rand_entries(n));
    const int k = static_cast<int>(rand_int(0, 4));
    CHECK(newton_scalar_recursion_residual(w, k).is_zero());
    CHECK(newton_scalar_via_m_minus_1_residual(w, k).is_zero());
  }
}

TEST_CASE("quadratic gap of consecutive sigmas") {
  // all entries equal to the distinguished value: equality
  const auto eq = make_spectrum(Q(2), Q(2), {Q(1), Q(1)});
  const auto r1 = newton_gap(eq, 1);
  CHECK(r1.value == Q(0));
  CHECK(r1.tag == EqualityCase::AllEqual);

  // zero distinguished entry with a sparse list: equality
  const auto sparse = make_spectrum(Q(3), Q(0), {Q(1), Q(0), Q(0)});
  const auto r2 = newton_gap(sparse, 2);
  CHECK(r2.value == Q(0));
  CHECK(r2.tag == EqualityCase::LambdaZeroSparse);

  // strict case with frozen value
  const auto strict = make_spectrum(Q(2), Q(2), {Q(1), Q(2)});
  const auto r3 = newton_gap(strict, 1);
  CHECK(r3.value == Q(-3, 8));
  CHECK(r3.tag == EqualityCase::Strict);
  CHECK_FALSE(r3.below_range_integer_m);

  // boundary weight with empty remainder: equality
  const auto bdry = make_spectrum(Q(1), Q(5), {Q(0), Q(0)});
  const auto r4 = newton_gap(bdry, 2);
  CHECK(r4.value == Q(0));
  CHECK(r4.tag == EqualityCase::BoundaryM);

  // below-range weights: integers allowed but flagged, fractions rejected
  const auto low_int = make_spectrum(Q(1), Q(2), {Q(1), Q(3)});
  const auto r5 = newton_gap(low_int, 3);
  CHECK(r5.below_range_integer_m);
  CHECK(r5.value <= Q(0));
  const auto low_frac = make_spectrum(Q(1, 2), Q(1), {Q(0), Q(0)});
  CHECK_THROWS_AS(newton_gap(low_frac, 2), std::domain_error);
}

TEST_CASE("gap stays nonpositive across random admissible inputs") {
  int checked = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = static_cast<int>(rand_int(0, 4));
    const int k = static_cast<int>(rand_int(1, 4));
    Rational m = rand_positive_rational();
    if (m < Q(k - 1)) m = m + Q(k - 1);  // keep the admissible range
    const auto w = WeightedSpectrum<Rational>{m, rand_rational(), rand_entries(n)};
    const auto rep = newton_gap(w, k);
    CHECK(rep.value <= Q(0));
    // strict negativity off the truncation set where both sides vanish
    if (rep.tag == EqualityCase::Strict && !rep.degenerate_truncation) CHECK(rep.value < Q(0));
    ++checked;
  }
  CHECK(checked == 10000);
}

TEST_CASE("scale derivative of sigma is the previous scalar") {
  // k = 1: sigma_1(lambda + m kappa) is linear with slope m
  const auto ws1 = make_spectrum(Q(2), Q(2), {Q(1), Q(1)});
  const auto p1 = kappa_sigma_poly(ws1, 1);
  CHECK(p1.derivative() == Polynomial<Rational>(Q(2)));

  for (int trial = 0; trial < 40; ++trial) {
    const int n = static_cast<int>(rand_int(0, 4));
    const auto w = make_spectrum(rand_positive_rational(), rand_rational(), rand_entries(n));
    const int k = static_cast<int>(rand_int(1, 4));
    CHECK(kappa_derivative_residual_poly(w, k).is_zero());
  }
  for (int trial = 0; trial < 12; ++trial) {
    const int n = static_cast<int>(rand_int(0, 3));
    const auto w = make_spectrum_symbolic(rand_rational(), rand_entries(n));
    const int k = static_cast<int>(rand_int(1, 4));
    CHECK(kappa_derivative_residual_poly(w, k).is_zero());
  }
}
