#pragma once

/// Weighted curvature of rotationally symmetric structures. Every tensor of
/// the weighted conformal calculus collapses here to a radial and a
/// tangential eigenvalue (or a single radial one-form component), so the
/// bundle stores per-node scalars:
///   J          weighted Schouten scalar
///   P_rad/tan  weighted Schouten tensor eigenvalues
///   Y          J - tr P, and Ytilde = Y + m kappa / v
///   A_comp     radial-tangential Weyl-type component (A_tan_comp for n >= 3)
///   cotton_comp   dP(e_s, e_a, e_a)
///   bach_rad/tan  Bach-type tensor eigenvalues
///   obstruction_k radial component of the order-k variational obstruction
/// plus checks of the divergence and trace identities, weighted Einstein
/// detection, its constant-curvature consequences, and the conformal
/// rescaling laws.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "wsigma/rotsym.hpp"
#include "wsigma/wsym.hpp"

namespace wsigma {

struct CurvatureBundle {
  std::vector<double> J, P_rad, P_tan, Y, Ytilde;
  std::vector<double> A_comp, A_tan_comp, cotton_comp;
  std::vector<double> bach_rad, bach_tan;
  std::vector<double> obstruction_k;
  int k_obstruction = 0;
};

namespace detail {

/// Generalized binomial coefficient with real upper argument.
[[nodiscard]] inline double real_binom(double x, int k) {
  double acc = 1.0;
  for (int i = 1; i <= k; ++i) acc *= (x - i + 1) / i;
  return acc;
}

/// sigma_0..sigma_kmax at one node from the eigenvalue data (z; pr, pt).
[[nodiscard]] inline std::vector<double> node_sigmas(double m, double z, double pr, double pt,
                                                     int n, int kmax) {
  std::vector<double> psums(static_cast<size_t>(kmax));
  double prj = 1.0, ptj = 1.0;
  for (int j = 1; j <= kmax; ++j) {
    prj *= pr;
    ptj *= pt;
    psums[static_cast<size_t>(j - 1)] = prj + (n - 1) * ptj;
  }
  return sigma_from_power_data<double>(m, z, psums, kmax);
}

/// Radial or tangential Newton tensor eigenvalue: sum (-1)^i sigma_{k-i} p^i.
[[nodiscard]] inline double newton_component(const std::vector<double>& sig, double p, int k) {
  double acc = 0.0, pi = 1.0, sgn = 1.0;
  for (int i = 0; i <= k; ++i) {
    acc += sgn * sig[static_cast<size_t>(k - i)] * pi;
    pi *= p;
    sgn = -sgn;
  }
  return acc;
}

[[nodiscard]] inline double max_abs_on(const std::vector<int>& idx,
                                       const std::vector<double>& w) {
  double acc = 0.0;
  for (int i : idx) acc = std::max(acc, std::abs(w[static_cast<size_t>(i)]));
  return acc;
}

}  // namespace detail

/// Curvature of the structure from fourth order finite differences.
/// k_obstruction selects which order's variational obstruction to evaluate
/// (identically zero for k <= 2). End nodes of closed topologies can carry
/// infinities from f = 0 or v = 0; consumers restrict to interior_nodes.
[[nodiscard]] inline CurvatureBundle curvature_bundle(const RotSymStructure& s,
                                                      int k_obstruction = 3) {
  validate_structure(s);
  if (k_obstruction < 0) throw std::invalid_argument("obstruction order must be nonnegative");
  const int N = s.nodes();
  const int n = s.n;
  const double m = s.m;
  const double mn = s.mn();
  const auto fr = dds(s, s.f, rules_f(s));
  const auto frr = d2ds(s, s.f, rules_f(s));
  const auto vr = dds(s, s.v, rules_v(s));
  const auto vrr = d2ds(s, s.v, rules_v(s));

  CurvatureBundle b;
  b.k_obstruction = k_obstruction;
  b.J.resize(N);
  b.P_rad.resize(N);
  b.P_tan.resize(N);
  b.Y.resize(N);
  b.Ytilde.resize(N);
  b.A_comp.resize(N);
  b.A_tan_comp.resize(N);
  b.cotton_comp.resize(N);
  b.bach_rad.resize(N);
  b.bach_tan.resize(N);
  b.obstruction_k.assign(static_cast<size_t>(N), 0.0);

  const double cJ = (mn - 2.0) / (2.0 * (mn - 1.0));
  for (int i = 0; i < N; ++i) {
    const double f = s.f[i], v = s.v[i];
    const double lf1 = fr[i] / f;
    const double lv1 = vr[i] / v;
    const double lv2 = vrr[i] / v;
    const double sec_rad = -frr[i] / f;
    const double sec_tan = (1.0 - fr[i] * fr[i]) / (f * f);
    double Rphi = 2.0 * (n - 1) * sec_rad + (n - 1) * (n - 2) * sec_tan - 2.0 * m * lv2 -
                  2.0 * (n - 1) * m * lf1 * lv1 - m * (m - 1.0) * lv1 * lv1;
    if (s.mu != 0.0) Rphi += m * (m - 1.0) * s.mu / (v * v);
    const double J = cJ * Rphi;
    const double pr = (n - 1) * sec_rad - m * lv2 - J / (mn - 2.0);
    const double pt = sec_rad + (n - 2) * sec_tan - m * lf1 * lv1 - J / (mn - 2.0);
    const double Y = J - (pr + (n - 1) * pt);
    b.J[i] = J;
    b.P_rad[i] = pr;
    b.P_tan[i] = pt;
    b.Y[i] = Y;
    b.Ytilde[i] = s.kappa != 0.0 ? Y + m * s.kappa / v : Y;
    b.A_comp[i] = sec_rad - (pr + pt) / (mn - 2.0);
    b.A_tan_comp[i] = n >= 3 ? sec_tan - 2.0 * pt / (mn - 2.0) : 0.0;
  }

  // the pointwise formulas degenerate at vanishing warping or density; put
  // the smooth limits back so the derivative chains below stay finite
  const auto scal = rules_scalar(s);
  extrapolate_ends(s, b.J, scal);
  extrapolate_ends(s, b.P_rad, scal);
  extrapolate_ends(s, b.P_tan, scal);
  extrapolate_ends(s, b.Y, scal);
  extrapolate_ends(s, b.Ytilde, scal);
  extrapolate_ends(s, b.A_comp, scal);
  extrapolate_ends(s, b.A_tan_comp, scal);

  const auto pt_r = dds(s, b.P_tan, scal);
  for (int i = 0; i < N; ++i)
    b.cotton_comp[i] = pt_r[i] + (fr[i] / s.f[i]) * (b.P_tan[i] - b.P_rad[i]);
  extrapolate_ends(s, b.cotton_comp, rules_oneform(s));
  const auto cr = dds(s, b.cotton_comp, rules_oneform(s));
  for (int i = 0; i < N; ++i) {
    const double lf1 = fr[i] / s.f[i];
    const double lv1 = vr[i] / s.v[i];
    const double C = b.cotton_comp[i];
    const double phi1 = -m * lv1;
    const double yom = b.Y[i] / m;
    b.bach_rad[i] =
        (n - 1) * (lf1 * C + phi1 * C / m + b.A_comp[i] * (b.P_tan[i] - yom));
    b.bach_tan[i] = cr[i] + (n - 2) * lf1 * C - phi1 * C + b.A_comp[i] * (b.P_rad[i] - yom) +
                    (n - 2) * b.A_tan_comp[i] * (b.P_tan[i] - yom);
  }
  extrapolate_ends(s, b.bach_rad, scal);
  extrapolate_ends(s, b.bach_tan, scal);

  if (k_obstruction >= 3) {
    const int k = k_obstruction;
    for (int i = 0; i < N; ++i) {
      const double z = b.Ytilde[i] / m;
      const auto sig = detail::node_sigmas(m, z, b.P_rad[i], b.P_tan[i], n, k - 3);
      double acc = 0.0, sgn = 1.0;
      for (int l = 0; l <= k - 3; ++l) {
        const double tk = detail::newton_component(sig, b.P_rad[i], k - 3 - l);
        const double q = scalar_pow(b.P_tan[i], static_cast<unsigned>(l + 1)) -
                         scalar_pow(z, static_cast<unsigned>(l + 1));
        acc += sgn * tk * (-(n - 1) * b.cotton_comp[i] * q);
        sgn = -sgn;
      }
      b.obstruction_k[i] = acc;
    }
  }
  return b;
}

/// Exact bundle for a sampled model space: all entries are evaluated from
/// the closed forms, not finite differences, so constant fields are stored
/// as bitwise constant arrays.
[[nodiscard]] inline CurvatureBundle closed_form_bundle(const RotSymStructure& s, ModelKind kind) {
  const int N = s.nodes();
  const int n = s.n;
  const double m = s.m;
  const double mn = s.mn();
  double lambda = 0.0;
  switch (kind) {
    case ModelKind::EllipticGaussian:
    case ModelKind::WeightedSphere:
      lambda = (mn - 2.0) / 2.0;
      break;
    case ModelKind::ConstantVQuasiEinstein:
      lambda = (n - 1.0) * (mn - 2.0) / (2.0 * (mn - 1.0));
      break;
  }
  CurvatureBundle b;
  b.k_obstruction = 0;
  const double Jconst = mn * lambda;
  b.J.assign(static_cast<size_t>(N), Jconst);
  if (kind == ModelKind::WeightedSphere) {
    for (int i = 0; i < N; ++i) b.J[static_cast<size_t>(i)] = mn * lambda - m * s.kappa / s.v[i];
  }
  b.P_rad.assign(static_cast<size_t>(N), lambda);
  b.P_tan.assign(static_cast<size_t>(N), lambda);
  b.Y.resize(static_cast<size_t>(N));
  b.Ytilde.assign(static_cast<size_t>(N), m * lambda);
  for (int i = 0; i < N; ++i) b.Y[static_cast<size_t>(i)] = b.J[static_cast<size_t>(i)] - n * lambda;
  // models have unit sectional curvature, so the Weyl-type components are
  // 1 - 2 lambda / (m+n-2) in both slots; zero except for the constant
  // density model
  const double acomp = 1.0 - 2.0 * lambda / (mn - 2.0);
  b.A_comp.assign(static_cast<size_t>(N), acomp);
  b.A_tan_comp.assign(static_cast<size_t>(N), n >= 3 ? acomp : 0.0);
  b.cotton_comp.assign(static_cast<size_t>(N), 0.0);
  b.bach_rad.assign(static_cast<size_t>(N), 0.0);
  b.bach_tan.assign(static_cast<size_t>(N), 0.0);
  b.obstruction_k.assign(static_cast<size_t>(N), 0.0);
  return b;
}

/// Per-node weighted sigma_k with the structure's scale. Nodes outside
/// interior_nodes keep a quiet NaN (the scale term m kappa / v is undefined
/// where the density vanishes).
[[nodiscard]] inline std::vector<double> sigma_field(const RotSymStructure& s,
                                                     const CurvatureBundle& b, int k) {
  if (k < 0) throw std::invalid_argument("sigma order must be nonnegative");
  std::vector<double> out(static_cast<size_t>(s.nodes()),
                          std::numeric_limits<double>::quiet_NaN());
  for (int i : interior_nodes(s)) {
    const auto sig =
        detail::node_sigmas(s.m, b.Ytilde[static_cast<size_t>(i)] / s.m,
                            b.P_rad[static_cast<size_t>(i)], b.P_tan[static_cast<size_t>(i)], s.n, k);
    out[static_cast<size_t>(i)] = sig[static_cast<size_t>(k)];
  }
  return out;
}

[[nodiscard]] inline std::vector<double> sigma_field(const RotSymStructure& s, int k) {
  return sigma_field(s, curvature_bundle(s, 0), k);
}

/// Interior max norms of the divergence and trace identities. Every row is
/// an identity of the smooth theory, so each value is pure discretization
/// error.
struct DivergenceReport {
  int k = 0;
  int interior_count = 0;
  double schouten = 0.0;      // weighted div of P against dJ - (Y/m) dphi
  double newton1 = 0.0;       // weighted div of the first Newton tensor
  double newton_k = 0.0;      // order k, including the Cotton correction sum
  double trace_cotton = 0.0;  // trace of dP against P(grad phi) + dY - (Y/m) dphi
  double trace_weyl_rad = 0.0;  // radial trace row of the Weyl-type tensor
  double trace_weyl_tan = 0.0;  // tangential trace row
  double weyl_div = 0.0;        // weighted div of the Weyl-type tensor against dP
};

[[nodiscard]] inline DivergenceReport divergence_residuals(const RotSymStructure& s, int k,
                                                           const CurvatureBundle& b) {
  if (k < 0) throw std::invalid_argument("order must be nonnegative");
  const int N = s.nodes();
  const int n = s.n;
  const double m = s.m;
  const double mn = s.mn();
  const auto scal = rules_scalar(s);
  const auto fr = dds(s, s.f, rules_f(s));
  const auto vr = dds(s, s.v, rules_v(s));
  const auto vrr = d2ds(s, s.v, rules_v(s));
  const auto Jr = dds(s, b.J, scal);
  const auto Yr = dds(s, b.Y, scal);
  const auto Pr_r = dds(s, b.P_rad, scal);
  const auto Ar = dds(s, b.A_comp, scal);

  // Newton tensor eigenvalue fields of order 1 and k
  std::vector<double> T1r(static_cast<size_t>(N)), T1t(static_cast<size_t>(N)),
      Tkr(static_cast<size_t>(N)), Tkt(static_cast<size_t>(N)), sk(static_cast<size_t>(N)),
      s1(static_cast<size_t>(N)), cottonsum(static_cast<size_t>(N));
  for (int i = 0; i < N; ++i) {
    const double z = b.Ytilde[i] / m;
    const auto sig = detail::node_sigmas(m, z, b.P_rad[i], b.P_tan[i], n, std::max(k, 1));
    const auto sig1 = detail::node_sigmas(m - 1.0, z, b.P_rad[i], b.P_tan[i], n, std::max(k, 1));
    T1r[i] = detail::newton_component(sig, b.P_rad[i], 1);
    T1t[i] = detail::newton_component(sig, b.P_tan[i], 1);
    Tkr[i] = detail::newton_component(sig, b.P_rad[i], k);
    Tkt[i] = detail::newton_component(sig, b.P_tan[i], k);
    s1[i] = sig1[1];
    sk[i] = sig1[static_cast<size_t>(k)];
    double acc = 0.0, sgn = 1.0;
    for (int j = 0; j + 2 <= k; ++j) {
      const double tj = detail::newton_component(sig, b.P_rad[i], k - 2 - j);
      const double q = scalar_pow(b.P_tan[i], static_cast<unsigned>(j + 1)) -
                       scalar_pow(z, static_cast<unsigned>(j + 1));
      acc += sgn * tj * (-(n - 1) * b.cotton_comp[i] * q);
      sgn = -sgn;
    }
    cottonsum[i] = acc;
  }
  const auto T1r_r = dds(s, T1r, scal);
  const auto Tkr_r = dds(s, Tkr, scal);

  DivergenceReport rep;
  rep.k = k;
  const auto idx = interior_nodes(s);
  rep.interior_count = static_cast<int>(idx.size());
  for (int i : idx) {
    const double lf1 = fr[i] / s.f[i];
    const double lv1 = vr[i] / s.v[i];
    const double lv2 = vrr[i] / s.v[i];
    const double phi1 = -m * lv1;
    const double phi2 = -m * (lv2 - lv1 * lv1);
    const double C = b.cotton_comp[i];
    const double a = b.A_comp[i];
    const double bt = b.A_tan_comp[i];

    const double div_P = Pr_r[i] + (n - 1) * lf1 * (b.P_rad[i] - b.P_tan[i]) - phi1 * b.P_rad[i];
    const double r_schouten = div_P - Jr[i] + (b.Y[i] / m) * phi1;

    const double div_T1 = T1r_r[i] + (n - 1) * lf1 * (T1r[i] - T1t[i]) - phi1 * T1r[i];
    const double r_newton1 = div_T1 + s1[i] * phi1;

    const double div_Tk = Tkr_r[i] + (n - 1) * lf1 * (Tkr[i] - Tkt[i]) - phi1 * Tkr[i];
    const double r_newtonk = div_Tk + sk[i] * phi1 - cottonsum[i];

    const double r_trc = -(n - 1) * C - (b.P_rad[i] * phi1 + Yr[i] - (b.Y[i] / m) * phi1);
    const double r_tar = (n - 1) * a - ((m / (mn - 2.0)) * b.P_rad[i] - phi2 +
                                        phi1 * phi1 / m + b.Y[i] / (mn - 2.0));
    const double r_tat = a + (n - 2) * bt -
                         ((m / (mn - 2.0)) * b.P_tan[i] - lf1 * phi1 + b.Y[i] / (mn - 2.0));
    const double r_wdiv = Ar[i] + (n - 2) * lf1 * (a - bt) - phi1 * a -
                          ((mn - 3.0) / (mn - 2.0)) * C + lv1 * (a + (n - 2) * bt);

    rep.schouten = std::max(rep.schouten, std::abs(r_schouten));
    rep.newton1 = std::max(rep.newton1, std::abs(r_newton1));
    rep.newton_k = std::max(rep.newton_k, std::abs(r_newtonk));
    rep.trace_cotton = std::max(rep.trace_cotton, std::abs(r_trc));
    rep.trace_weyl_rad = std::max(rep.trace_weyl_rad, std::abs(r_tar));
    rep.trace_weyl_tan = std::max(rep.trace_weyl_tan, std::abs(r_tat));
    rep.weyl_div = std::max(rep.weyl_div, std::abs(r_wdiv));
  }
  return rep;
}

[[nodiscard]] inline DivergenceReport divergence_residuals(const RotSymStructure& s, int k) {
  return divergence_residuals(s, k, curvature_bundle(s, std::max(k, 3)));
}

/// Weighted Einstein detection and scale fit. lambda is the interior mean of
/// the Schouten eigenvalues; kappa solves J + m kappa / v = (m+n) lambda in
/// the least squares sense with weight v. For mu = 0 closed structures the
/// two sides of the total-volume identity
///   lambda Vol = (2m+n-2)/(2(m+n-1)) kappa * integral of v^{-1} dnu
/// are also reported.
struct EinsteinFit {
  double lambda = 0.0;
  double kappa = 0.0;
  double einstein_residual = 0.0;  // max |P - lambda g| over interior nodes
  double sigma1_residual = 0.0;    // max |J + m kappa / v - (m+n) lambda|
  bool einstein = false;
  bool has_integral = false;
  double integral_lhs = 0.0;
  double integral_rhs = 0.0;
};

[[nodiscard]] inline EinsteinFit einstein_scale(const RotSymStructure& s) {
  const auto b = curvature_bundle(s, 0);
  const auto idx = interior_nodes(s);
  if (idx.empty()) throw std::invalid_argument("no interior nodes");
  EinsteinFit fit;
  double acc = 0.0;
  for (int i : idx) acc += b.P_rad[i] + (s.n - 1) * b.P_tan[i];
  fit.lambda = acc / (s.n * static_cast<double>(idx.size()));
  for (int i : idx) {
    fit.einstein_residual = std::max(fit.einstein_residual, std::abs(b.P_rad[i] - fit.lambda));
    fit.einstein_residual = std::max(fit.einstein_residual, std::abs(b.P_tan[i] - fit.lambda));
  }
  double kacc = 0.0;
  for (int i : idx) kacc += s.mn() * fit.lambda * s.v[i] - s.v[i] * b.J[i];
  fit.kappa = kacc / (s.m * static_cast<double>(idx.size()));
  for (int i : idx)
    fit.sigma1_residual = std::max(
        fit.sigma1_residual, std::abs(b.J[i] + s.m * fit.kappa / s.v[i] - s.mn() * fit.lambda));
  fit.einstein = fit.einstein_residual <= 1e-6 * (1.0 + std::abs(fit.lambda)) &&
                 fit.sigma1_residual <= 1e-6 * (1.0 + std::abs(fit.lambda));
  if (s.mu == 0.0 && s.topology == Topology::ClosedSphere) {
    fit.has_integral = true;
    fit.integral_lhs = fit.lambda * weighted_volume(s);
    const std::vector<double> one(static_cast<size_t>(s.nodes()), 1.0);
    fit.integral_rhs = (2.0 * s.m + s.n - 2.0) / (2.0 * (s.mn() - 1.0)) * fit.kappa *
                       integrate_dnu(s, one, -1);
  }
  return fit;
}

/// Constant-curvature consequences of the weighted Einstein condition:
/// sigma_k = binom(m+n, k) lambda^k, the Newton scalar binom(m+n-1, k)
/// lambda^k, the Newton tensor binom(m+n-1, k) lambda^k g, and the Bach
/// identity B = m kappa v^{-1} Pm1 - m(m+n-3)/(m+n-2) lambda kappa v^{-1} g
/// with Pm1 = P + v^{-1} hess v + Y/(m(m+n-2)) g the Schouten tensor of the
/// same space with parameter m-1. Deviations are interior max norms; the
/// structure's own kappa is used for the scale terms.
///
/// bach_dev is taken over the deep interior mask: the computed Bach
/// eigenvalues chain four derivative applications, so sample rounding is
/// amplified like h^-4 and truncation layers near the field zeros are two
/// derivative levels stronger than for the second-order invariants. The
/// comparison resolves the identity near the truncation/rounding crossover
/// (node counts around 130-250); on much finer grids this row reports the
/// rounding floor rather than the identity.
struct ConstantsReport {
  double lambda = 0.0;
  double kappa_fit = 0.0;
  int k_max = 0;
  double sigma_dev = 0.0;
  double newton_scalar_dev = 0.0;
  double newton_tensor_dev = 0.0;
  double bach_dev = 0.0;
  bool einstein = false;
};

[[nodiscard]] inline ConstantsReport we_constants_check(const RotSymStructure& s, int k_max) {
  if (k_max < 0) throw std::invalid_argument("order must be nonnegative");
  const auto b = curvature_bundle(s, 0);
  const auto fit = einstein_scale(s);
  const auto idx = interior_nodes(s);
  ConstantsReport rep;
  rep.lambda = fit.lambda;
  rep.kappa_fit = fit.kappa;
  rep.k_max = k_max;
  rep.einstein = fit.einstein;
  const double m = s.m;
  const int n = s.n;
  for (int i : idx) {
    const double z = b.Ytilde[i] / m;
    const auto sig = detail::node_sigmas(m, z, b.P_rad[i], b.P_tan[i], n, k_max);
    const auto sig1 = detail::node_sigmas(m - 1.0, z, b.P_rad[i], b.P_tan[i], n, k_max);
    double lk = 1.0;
    for (int k = 0; k <= k_max; ++k) {
      const double c_sigma = detail::real_binom(s.mn(), k) * lk;
      const double c_newton = detail::real_binom(s.mn() - 1.0, k) * lk;
      rep.sigma_dev = std::max(rep.sigma_dev, std::abs(sig[static_cast<size_t>(k)] - c_sigma));
      rep.newton_scalar_dev =
          std::max(rep.newton_scalar_dev, std::abs(sig1[static_cast<size_t>(k)] - c_newton));
      rep.newton_tensor_dev = std::max(
          rep.newton_tensor_dev,
          std::abs(detail::newton_component(sig, b.P_rad[i], k) - c_newton));
      rep.newton_tensor_dev = std::max(
          rep.newton_tensor_dev,
          std::abs(detail::newton_component(sig, b.P_tan[i], k) - c_newton));
      lk *= fit.lambda;
    }
  }
  const auto fr = dds(s, s.f, rules_f(s));
  const auto vr = dds(s, s.v, rules_v(s));
  const auto vrr = d2ds(s, s.v, rules_v(s));
  const auto deep = interior_nodes(s, kDeepInteriorCutFraction);
  for (int i : deep) {
    const double yc = b.Y[i] / (m * (s.mn() - 2.0));
    const double p1r = b.P_rad[i] + vrr[i] / s.v[i] + yc;
    const double p1t = b.P_tan[i] + (fr[i] / s.f[i]) * (vr[i] / s.v[i]) + yc;
    const double shared = m * (s.mn() - 3.0) / (s.mn() - 2.0) * fit.lambda * s.kappa / s.v[i];
    const double pred_rad = m * s.kappa / s.v[i] * p1r - shared;
    const double pred_tan = m * s.kappa / s.v[i] * p1t - shared;
    rep.bach_dev = std::max(rep.bach_dev, std::abs(b.bach_rad[i] - pred_rad));
    rep.bach_dev = std::max(rep.bach_dev, std::abs(b.bach_tan[i] - pred_tan));
  }
  return rep;
}

/// Conformal rescale with residuals against the transformation laws. The
/// rescaled structure's curvature is computed directly and compared with
/// the predicted transforms of the original curvature:
///   u^{-2} Jhat  = J + Lap_phi fc - |d fc|^2 / 2
///   u^{-2} Phat  = P + hess fc + d fc (x) d fc/(m+n-2) - |d fc|^2 g/(2(m+n-2))
///   Ahat  = u^2 (A frame component)
///   Chat  = u^3 (C - fc' A_comp)
/// where fc = (m+n-2) log u and hatted components are taken in the rescaled
/// structure's own orthonormal frame. Interior max norms over both masks.
struct RescaleReport {
  RotSymStructure rescaled;
  double rJ = 0.0;
  double rP_rad = 0.0;
  double rP_tan = 0.0;
  double rWeyl = 0.0;
  double rCotton = 0.0;
  int interior_count = 0;
};

[[nodiscard]] inline RescaleReport conformal_rescale(const RotSymStructure& s,
                                                     const std::vector<double>& u) {
  RescaleReport rep;
  rep.rescaled = rescale_structure(s, u);
  const auto b = curvature_bundle(s, 0);
  const auto bh = curvature_bundle(rep.rescaled, 0);
  const int N = s.nodes();
  const double mn2 = s.mn() - 2.0;
  const auto scal = rules_scalar(s);
  const auto fr = dds(s, s.f, rules_f(s));
  const auto vr = dds(s, s.v, rules_v(s));
  const auto ur = dds(s, u, scal);
  const auto urr = d2ds(s, u, scal);

  std::vector<int> idx;
  {
    const auto a1 = interior_nodes(s);
    const auto a2 = interior_nodes(rep.rescaled);
    std::vector<char> in2(static_cast<size_t>(N), 0);
    for (int i : a2) in2[static_cast<size_t>(i)] = 1;
    for (int i : a1)
      if (in2[static_cast<size_t>(i)]) idx.push_back(i);
  }
  rep.interior_count = static_cast<int>(idx.size());
  for (int i : idx) {
    const double ui = u[static_cast<size_t>(i)];
    const double lu1 = ur[i] / ui;
    const double lu2 = urr[i] / ui;
    const double fc1 = mn2 * lu1;
    const double fc2 = mn2 * (lu2 - lu1 * lu1);
    const double lf1 = fr[i] / s.f[i];
    const double phi1 = -s.m * vr[i] / s.v[i];
    const double lap_phi_fc = fc2 + (s.n - 1) * lf1 * fc1 - phi1 * fc1;
    const double u2 = ui * ui;

    const double predJ = b.J[i] + lap_phi_fc - 0.5 * fc1 * fc1;
    const double predPr = b.P_rad[i] + fc2 + fc1 * fc1 / (2.0 * mn2);
    const double predPt = b.P_tan[i] + lf1 * fc1 - fc1 * fc1 / (2.0 * mn2);
    const double predA = u2 * b.A_comp[i];
    const double predC = u2 * ui * (b.cotton_comp[i] - fc1 * b.A_comp[i]);

    rep.rJ = std::max(rep.rJ, std::abs(bh.J[i] / u2 - predJ));
    rep.rP_rad = std::max(rep.rP_rad, std::abs(bh.P_rad[i] / u2 - predPr));
    rep.rP_tan = std::max(rep.rP_tan, std::abs(bh.P_tan[i] / u2 - predPt));
    rep.rWeyl = std::max(rep.rWeyl, std::abs(bh.A_comp[i] - predA));
    rep.rCotton = std::max(rep.rCotton, std::abs(bh.cotton_comp[i] - predC));
  }
  return rep;
}

/// Cross-check of Y against the weighted Laplacian route
/// Y = Lap_phi phi - m J/(m+n-2) + m(m-1) mu v^{-2}, meaningful away from
/// density zeros. Returns the max deviation over interior nodes with
/// v >= vmin.
[[nodiscard]] inline double y_laplacian_deviation(const RotSymStructure& s, double vmin = 0.1) {
  const auto b = curvature_bundle(s, 0);
  const auto fr = dds(s, s.f, rules_f(s));
  const auto vr = dds(s, s.v, rules_v(s));
  const auto vrr = d2ds(s, s.v, rules_v(s));
  double dev = 0.0;
  for (int i : interior_nodes(s)) {
    if (s.v[i] < vmin) continue;
    const double lv1 = vr[i] / s.v[i];
    const double lv2 = vrr[i] / s.v[i];
    const double phi1 = -s.m * lv1;
    const double phi2 = -s.m * (lv2 - lv1 * lv1);
    const double lap_phi = phi2 + (s.n - 1) * (fr[i] / s.f[i]) * phi1 - phi1 * phi1;
    const double rhs =
        lap_phi - s.m / (s.mn() - 2.0) * b.J[i] + s.m * (s.m - 1.0) * s.mu / (s.v[i] * s.v[i]);
    dev = std::max(dev, std::abs(b.Y[i] - rhs));
  }
  return dev;
}

}  // namespace wsigma
