#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "wsigma/curvature.hpp"

using namespace wsigma;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs_at(const std::vector<int>& idx, const std::vector<double>& w) {
  double acc = 0.0;
  for (int i : idx) acc = std::max(acc, std::abs(w[static_cast<size_t>(i)]));
  return acc;
}

double max_dev_at(const std::vector<int>& idx, const std::vector<double>& w, double c) {
  double acc = 0.0;
  for (int i : idx) acc = std::max(acc, std::abs(w[static_cast<size_t>(i)] - c));
  return acc;
}

/// Parity preserving distortion of a model: even log radial factor and even
/// density factor, both vanishing with their first derivatives at the ends,
/// so closure conditions survive while the structure turns generic.
RotSymStructure perturbed(ModelKind kind, int n, double m, int N, double amp) {
  RotSymStructure s = build_model(kind, n, m, N);
  for (int i = 0; i < s.nodes(); ++i) {
    const double sn = std::sin(s.grid.r(i));
    s.alpha[static_cast<size_t>(i)] = amp * sn * sn;
    s.v[static_cast<size_t>(i)] *= 1.0 + amp * sn * sn;
  }
  validate_structure(s);
  return s;
}

std::array<double, 7> rows(const DivergenceReport& rep) {
  return {rep.schouten,     rep.newton1,        rep.newton_k,
          rep.trace_cotton, rep.trace_weyl_rad, rep.trace_weyl_tan,
          rep.weyl_div};
}

constexpr std::array<const char*, 7> kRowNames = {
    "schouten", "newton1", "newton_k", "trace_cotton", "trace_weyl_rad",
    "trace_weyl_tan", "weyl_div"};

std::vector<double> constant_field(int N, double c) {
  return std::vector<double>(static_cast<size_t>(N), c);
}

}  // namespace

TEST_CASE("finite differences: constants, boundary weights, fourth order") {
  const Grid g = make_grid(kPi, 101);
  const auto c = constant_field(101, 3.7);
  const auto d1 = deriv1(g, c, EndRule::EvenMirror, EndRule::EvenMirror);
  const auto d2 = deriv2(g, c, EndRule::EvenMirror, EndRule::EvenMirror);
  for (int i = 0; i < 101; ++i) {
    CHECK(d1[static_cast<size_t>(i)] == 0.0);
    CHECK(d2[static_cast<size_t>(i)] == 0.0);
  }
  const auto d1o = deriv1(g, c, EndRule::OneSided, EndRule::OneSided);
  const auto d1odd = deriv1(g, c, EndRule::OddMirror, EndRule::OddMirror);
  for (int i = 2; i < 99; ++i) {
    CHECK(d1o[static_cast<size_t>(i)] == 0.0);
    CHECK(d1odd[static_cast<size_t>(i)] == 0.0);
  }
  CHECK(std::abs(d1o[0]) <= 1e-9);
  CHECK(std::abs(d1o[100]) <= 1e-9);

  // boundary weights reproduce derivatives of monomials exactly
  const std::vector<double> x{0, 1, 2, 3, 4, 5};
  const auto wts = detail::fd_weights(0.0, x, 2);
  for (int p = 0; p <= 5; ++p) {
    double m0 = 0, m1 = 0, m2 = 0;
    for (int j = 0; j < 6; ++j) {
      const double xp = std::pow(x[static_cast<size_t>(j)], p);
      m0 += wts[0][static_cast<size_t>(j)] * xp;
      m1 += wts[1][static_cast<size_t>(j)] * xp;
      m2 += wts[2][static_cast<size_t>(j)] * xp;
    }
    CHECK(std::abs(m0 - (p == 0 ? 1.0 : 0.0)) <= 1e-12);
    CHECK(std::abs(m1 - (p == 1 ? 1.0 : 0.0)) <= 1e-12);
    CHECK(std::abs(m2 - (p == 2 ? 2.0 : 0.0)) <= 1e-12);
  }
  const std::vector<double> xc{-2, -1, 0, 1, 2};
  const auto wc = detail::fd_weights(0.0, xc, 1)[1];
  const std::array<double, 5> row{1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
  for (int j = 0; j < 5; ++j)
    CHECK(std::abs(wc[static_cast<size_t>(j)] - row[static_cast<size_t>(j)]) <= 1e-15);

  // fourth order convergence on sin with odd mirrors at both axes
  auto errs = [](int N) {
    const Grid gg = make_grid(kPi, N);
    std::vector<double> w(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) w[static_cast<size_t>(i)] = std::sin(gg.r(i));
    const auto a1 = deriv1(gg, w, EndRule::OddMirror, EndRule::OddMirror);
    const auto a2 = deriv2(gg, w, EndRule::OddMirror, EndRule::OddMirror);
    double e1 = 0, e2 = 0;
    for (int i = 0; i < N; ++i) {
      e1 = std::max(e1, std::abs(a1[static_cast<size_t>(i)] - std::cos(gg.r(i))));
      e2 = std::max(e2, std::abs(a2[static_cast<size_t>(i)] + std::sin(gg.r(i))));
    }
    return std::array<double, 2>{e1, e2};
  };
  const auto coarse = errs(101);
  const auto fine = errs(201);
  CHECK(coarse[0] <= 1e-6);
  CHECK(coarse[0] / fine[0] >= 12.0);
  CHECK(coarse[0] / fine[0] <= 24.0);
  CHECK(coarse[1] / fine[1] >= 12.0);
  CHECK(coarse[1] / fine[1] <= 24.0);

  // one sided ends on a function with no symmetry
  const Grid ge = make_grid(1.0, 201);
  std::vector<double> we(201);
  for (int i = 0; i < 201; ++i) we[static_cast<size_t>(i)] = std::exp(ge.r(i));
  const auto e1 = deriv1(ge, we, EndRule::OneSided, EndRule::OneSided);
  const auto e2 = deriv2(ge, we, EndRule::OneSided, EndRule::OneSided);
  double worst1 = 0, worst2 = 0;
  for (int i = 0; i < 201; ++i) {
    worst1 = std::max(worst1, std::abs(e1[static_cast<size_t>(i)] - we[static_cast<size_t>(i)]));
    worst2 = std::max(worst2, std::abs(e2[static_cast<size_t>(i)] - we[static_cast<size_t>(i)]));
  }
  CHECK(worst1 <= 1e-8);
  CHECK(worst2 <= 1e-6);
}

TEST_CASE("quadrature: simpson, three-eighths tail, sphere areas") {
  const Grid even_cells = make_grid(kPi, 801);
  std::vector<double> w(801);
  for (int i = 0; i < 801; ++i) w[static_cast<size_t>(i)] = std::sin(even_cells.r(i));
  CHECK(std::abs(integrate(even_cells, w) - 2.0) <= 1e-10);

  const Grid odd_cells = make_grid(kPi, 802);
  std::vector<double> ws(802), wc(802);
  for (int i = 0; i < 802; ++i) {
    ws[static_cast<size_t>(i)] = std::sin(odd_cells.r(i));
    const double r = odd_cells.r(i);
    wc[static_cast<size_t>(i)] = r * r * r;
  }
  CHECK(std::abs(integrate(odd_cells, ws) - 2.0) <= 1e-10);
  // both rules are exact on cubics
  const double quart = kPi * kPi * kPi * kPi / 4.0;
  CHECK(std::abs(integrate(odd_cells, wc) - quart) <= 1e-12 * quart);

  CHECK(std::abs(unit_sphere_area(1) - 2.0) <= 1e-13);
  CHECK(std::abs(unit_sphere_area(2) - 2.0 * kPi) <= 1e-13);
  CHECK(std::abs(unit_sphere_area(3) - 4.0 * kPi) <= 1e-12);
  CHECK(std::abs(unit_sphere_area(4) - 2.0 * kPi * kPi) <= 1e-12);
}

TEST_CASE("model construction and structural validation") {
  CHECK_THROWS_AS(build_model(ModelKind::ConstantVQuasiEinstein, 2, 1.0, 201),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_model(ModelKind::EllipticGaussian, 2, 3.0, 32), std::invalid_argument);
  CHECK_THROWS_AS(build_model(ModelKind::EllipticGaussian, 1, 3.0, 201), std::invalid_argument);
  CHECK_THROWS_AS(build_model(ModelKind::WeightedSphere, 2, -1.0, 201), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(0.0, 11), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1.0, 5), std::invalid_argument);

  const auto eg = build_model(ModelKind::EllipticGaussian, 2, 3.0, 201);
  CHECK(eg.nodes() == 201);
  CHECK(eg.grid.length == kPi / 2.0);
  CHECK(eg.mu == 1.0);
  CHECK(eg.kappa == 0.0);
  CHECK(eg.topology == Topology::Hemisphere);

  const auto ws = build_model(ModelKind::WeightedSphere, 3, 1.5, 201);
  CHECK(ws.kappa == 2.5);
  CHECK(ws.mu == 0.0);
  CHECK(ws.topology == Topology::ClosedSphere);

  const auto qe = build_model(ModelKind::ConstantVQuasiEinstein, 2, 3.0, 201);
  CHECK(qe.mu == 0.5);
  CHECK(qe.v[100] == 1.0);

  RotSymStructure bad = qe;
  bad.f[100] = -1.0;
  CHECK_THROWS_AS(validate_structure(bad), std::invalid_argument);
  bad = qe;
  bad.v[100] = 0.0;
  CHECK_THROWS_AS(validate_structure(bad), std::invalid_argument);
  bad = qe;
  bad.alpha.pop_back();
  CHECK_THROWS_AS(validate_structure(bad), std::invalid_argument);
  bad = qe;
  bad.f[0] = 0.5;  // broken axis closure
  CHECK_THROWS_AS(validate_structure(bad), std::invalid_argument);

  CHECK_THROWS_AS(rescale_structure(qe, constant_field(201, -1.0)), std::invalid_argument);
  CHECK_THROWS_AS(rescale_structure(qe, constant_field(200, 1.0)), std::invalid_argument);

  const auto idx = interior_nodes(eg);
  CHECK(static_cast<int>(idx.size()) >= 150);
  CHECK(idx.front() >= 2);
  CHECK(idx.back() <= 198);
  // warping cut near the axis, density cut near the equator
  CHECK(eg.f[static_cast<size_t>(idx.front())] > kInteriorCutFraction * 1.0);
  CHECK(eg.v[static_cast<size_t>(idx.back())] > kInteriorCutFraction * 1.0);
  const auto deep = interior_nodes(eg, kDeepInteriorCutFraction);
  CHECK(deep.size() < idx.size());
  CHECK(deep.front() > idx.front());
}

TEST_CASE("elliptic model: frozen curvature values") {
  const auto s = build_model(ModelKind::EllipticGaussian, 2, 3.0, 801);
  const auto idx = interior_nodes(s);
  const auto b = curvature_bundle(s, 3);
  CHECK(max_dev_at(idx, b.J, 7.5) <= 1e-7);
  CHECK(max_dev_at(idx, b.P_rad, 1.5) <= 1e-7);
  CHECK(max_dev_at(idx, b.P_tan, 1.5) <= 1e-7);
  CHECK(max_dev_at(idx, b.Y, 4.5) <= 1e-7);
  for (int i : idx) CHECK(b.Ytilde[static_cast<size_t>(i)] == b.Y[static_cast<size_t>(i)]);
  CHECK(max_abs_at(idx, b.A_comp) <= 1e-8);
  CHECK(max_abs_at(idx, b.obstruction_k) <= 1e-7);

  // conformally flat in the weighted sense, so the Cotton and Bach fields
  // vanish. These chain three and four derivative applications, which
  // amplify sample rounding like h^-3 and h^-4; the vanishing is resolved
  // near the truncation/rounding crossover rather than on the fine grid.
  {
    const auto sx = build_model(ModelKind::EllipticGaussian, 2, 3.0, 126);
    const auto bx = curvature_bundle(sx, 3);
    const auto deep = interior_nodes(sx, kDeepInteriorCutFraction);
    CHECK(max_abs_at(deep, bx.cotton_comp) <= 1e-7);
    CHECK(max_abs_at(deep, bx.bach_rad) <= 1e-7);
    CHECK(max_abs_at(deep, bx.bach_tan) <= 1e-7);
    const auto ccx = we_constants_check(sx, 3);
    CHECK(ccx.einstein);
    CHECK(ccx.bach_dev <= 1e-7);
  }

  const auto s2 = sigma_field(s, b, 2);
  CHECK(max_dev_at(idx, s2, 22.5) <= 1e-6);
  const auto s0 = sigma_field(s, b, 0);
  for (int i : idx) CHECK(s0[static_cast<size_t>(i)] == 1.0);
  CHECK(std::isnan(s0[0]));

  const auto fit = einstein_scale(s);
  CHECK(fit.einstein);
  CHECK(std::abs(fit.lambda - 1.5) <= 1e-9);
  CHECK(std::abs(fit.kappa) <= 1e-8);
  CHECK(!fit.has_integral);

  const auto cc = we_constants_check(s, 3);
  std::printf("elliptic constants: sigma %.3e newton_s %.3e newton_t %.3e bach %.3e\n",
              cc.sigma_dev, cc.newton_scalar_dev, cc.newton_tensor_dev, cc.bach_dev);
  CHECK(cc.einstein);
  CHECK(cc.sigma_dev <= 1e-7);
  CHECK(cc.newton_scalar_dev <= 1e-7);
  CHECK(cc.newton_tensor_dev <= 1e-7);
  // on this grid the Bach row reports its rounding floor, not the identity
  CHECK(cc.bach_dev <= 1e-3);

  CHECK(std::abs(weighted_volume(s) - kPi / 2.0) <= 1e-10);
  CHECK(y_laplacian_deviation(s) <= 1e-6);
}

TEST_CASE("weighted sphere model: scale, constants, integral identity") {
  const auto s = build_model(ModelKind::WeightedSphere, 2, 2.0, 801);
  CHECK(s.kappa == 2.0);
  const auto idx = interior_nodes(s);
  const auto b = curvature_bundle(s, 3);
  double jdev = 0.0;
  for (int i : idx)
    jdev = std::max(jdev,
                    std::abs(b.J[static_cast<size_t>(i)] - (4.0 - 4.0 / s.v[static_cast<size_t>(i)])));
  CHECK(jdev <= 1e-7);
  CHECK(std::abs(b.J[400]) <= 1e-7);  // midpoint: v = 1, J = 0
  CHECK(std::abs(b.Y[400] + 2.0) <= 1e-7);
  CHECK(max_dev_at(idx, b.P_rad, 1.0) <= 1e-7);
  CHECK(max_dev_at(idx, b.P_tan, 1.0) <= 1e-7);
  CHECK(max_dev_at(idx, b.Ytilde, 2.0) <= 1e-7);
  CHECK(max_abs_at(idx, b.A_comp) <= 1e-7);

  const auto s2 = sigma_field(s, b, 2);
  CHECK(max_dev_at(idx, s2, 6.0) <= 1e-6);

  const auto fit = einstein_scale(s);
  CHECK(fit.einstein);
  CHECK(std::abs(fit.lambda - 1.0) <= 1e-8);
  CHECK(std::abs(fit.kappa - 2.0) <= 1e-7);
  REQUIRE(fit.has_integral);
  const double both = 16.0 * kPi / 3.0;
  CHECK(std::abs(fit.integral_lhs - both) <= 1e-8 * both);
  CHECK(std::abs(fit.integral_rhs - both) <= 1e-8 * both);
  CHECK(std::abs(fit.integral_lhs - fit.integral_rhs) <= 1e-8 * both);

  CHECK(std::abs(weighted_volume(s) - both) <= 1e-9 * both);
  const double vinv = integrate_dnu(s, constant_field(801, 1.0), -1);
  CHECK(std::abs(vinv - 4.0 * kPi) <= 1e-9 * 4.0 * kPi);

  const auto cc = we_constants_check(s, 3);
  std::printf("sphere constants: sigma %.3e newton_s %.3e newton_t %.3e bach %.3e\n",
              cc.sigma_dev, cc.newton_scalar_dev, cc.newton_tensor_dev, cc.bach_dev);
  CHECK(cc.einstein);
  CHECK(cc.sigma_dev <= 1e-7);
  CHECK(cc.newton_scalar_dev <= 1e-7);
  CHECK(cc.newton_tensor_dev <= 1e-7);
  CHECK(cc.bach_dev <= 1e-4);  // rounding floor of the four-derivative chain

  // the Bach identity itself resolves at the truncation/rounding crossover:
  // here the nonzero scale makes it a genuine two-sided comparison
  {
    const auto sx = build_model(ModelKind::WeightedSphere, 2, 2.0, 201);
    const auto ccx = we_constants_check(sx, 3);
    std::printf("sphere bach at crossover: %.3e\n", ccx.bach_dev);
    CHECK(ccx.einstein);
    CHECK(ccx.bach_dev <= 1e-7);
  }
  CHECK(y_laplacian_deviation(s) <= 1e-6);
}

TEST_CASE("constant density model: exact closed forms, zero residuals") {
  const auto s = build_model(ModelKind::ConstantVQuasiEinstein, 2, 3.0, 801);
  const auto idx = interior_nodes(s);
  const auto b = curvature_bundle(s, 3);
  CHECK(max_dev_at(idx, b.J, 1.875) <= 1e-9);
  CHECK(max_dev_at(idx, b.P_rad, 0.375) <= 1e-9);
  CHECK(max_dev_at(idx, b.P_tan, 0.375) <= 1e-9);
  CHECK(max_dev_at(idx, b.Y, 1.125) <= 1e-9);
  CHECK(max_dev_at(idx, b.A_comp, 0.75) <= 1e-9);
  CHECK(max_abs_at(idx, b.A_comp) >= 0.7);  // not conformally flat
  CHECK(max_abs_at(idx, b.cotton_comp) <= 2e-7);  // rounding floor at this grid
  CHECK(max_abs_at(idx, b.obstruction_k) <= 1e-9);

  // parallel Schouten tensor: the Cotton field vanishes. Resolved on a grid
  // coarse enough that the h^-3 rounding amplification stays below the bound.
  {
    const auto sx = build_model(ModelKind::ConstantVQuasiEinstein, 2, 3.0, 201);
    const auto bx = curvature_bundle(sx, 3);
    const auto ix = interior_nodes(sx);
    CHECK(max_abs_at(ix, bx.cotton_comp) <= 1e-8);
    const auto deep = interior_nodes(sx, kDeepInteriorCutFraction);
    CHECK(max_abs_at(deep, bx.bach_rad) <= 1e-7);
    CHECK(max_abs_at(deep, bx.bach_tan) <= 1e-7);
  }

  const auto fit = einstein_scale(s);
  CHECK(fit.einstein);
  CHECK(std::abs(fit.lambda - 0.375) <= 1e-10);
  CHECK(std::abs(fit.kappa) <= 1e-9);
  CHECK(!fit.has_integral);  // mu is nonzero

  const auto cc = we_constants_check(s, 5);
  CHECK(cc.sigma_dev <= 1e-7);
  CHECK(cc.newton_scalar_dev <= 1e-7);
  CHECK(cc.newton_tensor_dev <= 1e-7);
  CHECK(cc.bach_dev <= 1e-4);  // rounding floor of the four-derivative chain

  // sampled closed forms satisfy every identity row to the last bit
  const auto cf = closed_form_bundle(s, ModelKind::ConstantVQuasiEinstein);
  for (int k : {0, 1, 2, 3, 5}) {
    const auto rep = divergence_residuals(s, k, cf);
    for (double row : rows(rep)) CHECK(row == 0.0);
  }
  CHECK(y_laplacian_deviation(s) <= 1e-6);
}

TEST_CASE("closed forms match finite differences on every model") {
  struct Config {
    ModelKind kind;
    int n;
    double m;
  };
  const std::array<Config, 6> configs{{{ModelKind::EllipticGaussian, 2, 3.0},
                                       {ModelKind::EllipticGaussian, 3, 2.0},
                                       {ModelKind::WeightedSphere, 2, 2.0},
                                       {ModelKind::WeightedSphere, 3, 1.5},
                                       {ModelKind::ConstantVQuasiEinstein, 2, 3.0},
                                       {ModelKind::ConstantVQuasiEinstein, 3, 2.0}}};
  for (const auto& cfg : configs) {
    INFO("n=" << cfg.n << " m=" << cfg.m << " kind=" << static_cast<int>(cfg.kind));
    const auto s = build_model(cfg.kind, cfg.n, cfg.m, 801);
    const auto idx = interior_nodes(s);
    const auto b = curvature_bundle(s, 3);
    const auto cf = closed_form_bundle(s, cfg.kind);
    double dev = 0.0;
    for (int i : idx) {
      const auto j = static_cast<size_t>(i);
      dev = std::max(dev, std::abs(b.J[j] - cf.J[j]));
      dev = std::max(dev, std::abs(b.P_rad[j] - cf.P_rad[j]));
      dev = std::max(dev, std::abs(b.P_tan[j] - cf.P_tan[j]));
      dev = std::max(dev, std::abs(b.Y[j] - cf.Y[j]));
      dev = std::max(dev, std::abs(b.Ytilde[j] - cf.Ytilde[j]));
      dev = std::max(dev, std::abs(b.A_comp[j] - cf.A_comp[j]));
      dev = std::max(dev, std::abs(b.A_tan_comp[j] - cf.A_tan_comp[j]));
    }
    CHECK(dev <= 1e-7);
    CHECK(max_abs_at(idx, b.obstruction_k) <= 1e-9);

    // derivative chains of depth three and four: compare near the
    // truncation/rounding crossover, away from the field zeros
    const auto sx = build_model(cfg.kind, cfg.n, cfg.m, 201);
    const auto bx = curvature_bundle(sx, 3);
    const auto cfx = closed_form_bundle(sx, cfg.kind);
    const auto deep = interior_nodes(sx, kDeepInteriorCutFraction);
    double dC = 0.0, dB = 0.0, dS = 0.0;
    for (int i : deep) {
      const auto j = static_cast<size_t>(i);
      dC = std::max(dC, std::abs(bx.cotton_comp[j] - cfx.cotton_comp[j]));
      dB = std::max(dB, std::abs(bx.bach_rad[j] - cfx.bach_rad[j]));
      dB = std::max(dB, std::abs(bx.bach_tan[j] - cfx.bach_tan[j]));
      dS = std::max(dS, std::abs(bx.obstruction_k[j] - cfx.obstruction_k[j]));
    }
    CHECK(dC <= 1e-7);
    CHECK(dB <= 5e-7);
    CHECK(dS <= 1e-12);
  }
}

TEST_CASE("divergence and trace identities hold to discretization error") {
  struct Case {
    std::string name;
    RotSymStructure s;
    int k;
    double bound;
  };
  // the n=3 perturbed structure carries larger high-derivative content, so
  // its rows sit higher at this resolution; fourth-order convergence of the
  // generic rows is certified by the refinement case below
  std::vector<Case> cases;
  cases.push_back({"elliptic", build_model(ModelKind::EllipticGaussian, 2, 3.0, 801), 2, 1e-6});
  cases.push_back({"sphere", build_model(ModelKind::WeightedSphere, 2, 2.0, 801), 3, 1e-6});
  cases.push_back(
      {"constant", build_model(ModelKind::ConstantVQuasiEinstein, 2, 3.0, 801), 3, 1e-6});
  cases.push_back({"generic2", perturbed(ModelKind::WeightedSphere, 2, 2.0, 801, 0.07), 3, 1e-6});
  cases.push_back(
      {"generic3", perturbed(ModelKind::EllipticGaussian, 3, 2.5, 801, 0.07), 3, 1e-4});
  for (const auto& c : cases) {
    const auto rep = divergence_residuals(c.s, c.k);
    const auto r = rows(rep);
    std::printf("residuals %-9s k=%d:", c.name.c_str(), c.k);
    for (double x : r) std::printf(" %.2e", x);
    std::printf("  (interior %d)\n", rep.interior_count);
    for (size_t j = 0; j < r.size(); ++j) {
      INFO(c.name << " row " << kRowNames[j]);
      CHECK(r[j] <= c.bound);
    }
  }
  // low orders on a generic structure
  for (int k : {0, 1}) {
    const auto rep = divergence_residuals(cases[3].s, k);
    for (double x : rows(rep)) CHECK(x <= 1e-6);
  }
  CHECK(y_laplacian_deviation(cases[3].s) <= 1e-6);
}

TEST_CASE("divergence residuals shrink at fourth order") {
  // a doubled node count must cut every resolvable residual by about 16;
  // rows already below 1e-7 sit near the rounding floor of the derivative
  // chains and are exempt from the ratio check
  const auto check_ratios = [](const std::vector<std::array<double, 7>>& table) {
    for (size_t t = 0; t + 1 < table.size(); ++t) {
      for (size_t j = 0; j < 7; ++j) {
        if (table[t][j] <= 1e-7) continue;
        INFO("row " << kRowNames[j] << " from level " << t);
        const double ratio = table[t][j] / table[t + 1][j];
        CHECK(ratio >= 8.0);
        CHECK(ratio <= 40.0);
      }
    }
  };

  std::vector<std::array<double, 7>> model_table;
  for (int N : {401, 801, 1601}) {
    const auto s = build_model(ModelKind::WeightedSphere, 2, 2.0, N);
    model_table.push_back(rows(divergence_residuals(s, 3)));
    std::printf("refine model   N=%-5d:", N);
    for (double x : model_table.back()) std::printf(" %.2e", x);
    std::printf("\n");
  }
  for (size_t j = 0; j < 7; ++j) CHECK(model_table[1][j] <= 1e-6);
  check_ratios(model_table);

  std::vector<std::array<double, 7>> table;
  for (int N : {201, 401, 801, 1601}) {
    const auto s = perturbed(ModelKind::WeightedSphere, 2, 2.0, N, 0.07);
    table.push_back(rows(divergence_residuals(s, 3)));
    std::printf("refine generic N=%-5d:", N);
    for (double x : table.back()) std::printf(" %.2e", x);
    std::printf("\n");
  }
  for (size_t j = 0; j < 7; ++j) CHECK(table[2][j] <= 1e-6);
  check_ratios(table);
}

TEST_CASE("conformal rescaling laws") {
  // constant factor: curvature scales exactly by powers of the factor
  {
    const auto s = build_model(ModelKind::EllipticGaussian, 2, 3.0, 401);
    const auto rep = conformal_rescale(s, constant_field(401, 0.5));
    CHECK(rep.rJ <= 1e-11);
    CHECK(rep.rP_rad <= 1e-11);
    CHECK(rep.rP_tan <= 1e-11);
    CHECK(rep.rWeyl <= 1e-11);
    CHECK(rep.rCotton <= 1e-11);
    const auto b = curvature_bundle(s, 0);
    const auto bh = curvature_bundle(rep.rescaled, 0);
    double dev = 0.0;
    for (int i : interior_nodes(s))
      dev = std::max(dev, std::abs(bh.J[static_cast<size_t>(i)] - 0.25 * b.J[static_cast<size_t>(i)]));
    CHECK(dev <= 1e-10);
  }

  // mobius factor on the weighted sphere lands on another weighted Einstein
  // structure with frozen scale lambda = 1.65, kappa = 2.2
  {
    const auto s = build_model(ModelKind::WeightedSphere, 2, 2.0, 801);
    std::vector<double> u(801);
    for (int i = 0; i < 801; ++i) u[static_cast<size_t>(i)] = 1.3 + 0.2 * std::cos(s.grid.r(i));
    const auto rep = conformal_rescale(s, u);
    std::printf("mobius rescale rows: %.2e %.2e %.2e %.2e %.2e\n", rep.rJ, rep.rP_rad,
                rep.rP_tan, rep.rWeyl, rep.rCotton);
    CHECK(rep.rJ <= 1e-6);
    CHECK(rep.rP_rad <= 1e-6);
    CHECK(rep.rP_tan <= 1e-6);
    CHECK(rep.rWeyl <= 1e-6);
    CHECK(rep.rCotton <= 1e-6);
    const auto fit = einstein_scale(rep.rescaled);
    CHECK(fit.einstein);
    CHECK(std::abs(fit.lambda - 1.65) <= 1e-6);
    CHECK(std::abs(fit.kappa - 2.2) <= 1e-6);
    REQUIRE(fit.has_integral);
    CHECK(std::abs(fit.integral_lhs - fit.integral_rhs) <= 1e-7 * std::abs(fit.integral_lhs));

    RotSymStructure rs = rep.rescaled;
    rs.kappa = fit.kappa;
    const auto cc = we_constants_check(rs, 3);
    std::printf("mobius constants: sigma %.3e newton_s %.3e newton_t %.3e bach %.3e\n",
                cc.sigma_dev, cc.newton_scalar_dev, cc.newton_tensor_dev, cc.bach_dev);
    CHECK(cc.einstein);
    CHECK(cc.sigma_dev <= 1e-6);
    CHECK(cc.newton_scalar_dev <= 1e-6);
    CHECK(cc.newton_tensor_dev <= 1e-6);

    // the Bach identity on the rescaled structure, resolved at the
    // truncation/rounding crossover of the four-derivative chain
    {
      const auto sx = build_model(ModelKind::WeightedSphere, 2, 2.0, 201);
      std::vector<double> ux(201);
      for (int i = 0; i < 201; ++i) ux[static_cast<size_t>(i)] = 1.3 + 0.2 * std::cos(sx.grid.r(i));
      RotSymStructure rsx = conformal_rescale(sx, ux).rescaled;
      const auto fx = einstein_scale(rsx);
      rsx.kappa = fx.kappa;
      const auto ccx = we_constants_check(rsx, 3);
      std::printf("mobius bach at crossover: %.3e\n", ccx.bach_dev);
      CHECK(ccx.einstein);
      CHECK(ccx.bach_dev <= 3e-7);
    }

    // conformal flatness is preserved
    const auto bh = curvature_bundle(rs, 3);
    const auto idx = interior_nodes(rs);
    CHECK(max_abs_at(idx, bh.A_comp) <= 1e-6);
    CHECK(max_abs_at(idx, bh.cotton_comp) <= 1e-6);
    CHECK(max_abs_at(idx, bh.obstruction_k) <= 1e-6);
  }

  // generic factor keeps the constant density model away from conformal
  // flatness, with a nonzero order three obstruction
  {
    const auto s = build_model(ModelKind::ConstantVQuasiEinstein, 2, 3.0, 801);
    std::vector<double> u(801);
    for (int i = 0; i < 801; ++i) u[static_cast<size_t>(i)] = 1.0 + 0.3 * std::cos(s.grid.r(i));
    const auto rep = conformal_rescale(s, u);
    CHECK(rep.rJ <= 1e-6);
    CHECK(rep.rP_rad <= 1e-6);
    CHECK(rep.rP_tan <= 1e-6);
    CHECK(rep.rWeyl <= 1e-6);
    CHECK(rep.rCotton <= 1e-6);
    const auto bh = curvature_bundle(rep.rescaled, 3);
    const auto idx = interior_nodes(rep.rescaled);
    std::printf("rescaled constant density: |A| %.3e |C| %.3e |S3| %.3e\n",
                max_abs_at(idx, bh.A_comp), max_abs_at(idx, bh.cotton_comp),
                max_abs_at(idx, bh.obstruction_k));
    CHECK(max_abs_at(idx, bh.A_comp) >= 0.3);
    CHECK(max_abs_at(idx, bh.cotton_comp) >= 0.02);
    CHECK(max_abs_at(idx, bh.obstruction_k) >= 1e-3);
    CHECK(!einstein_scale(rep.rescaled).einstein);
  }

  // generic factor on a generic structure: the full transformation laws,
  // including the Weyl correction inside the Cotton law
  {
    const auto s = perturbed(ModelKind::WeightedSphere, 2, 2.0, 801, 0.07);
    std::vector<double> u(801);
    for (int i = 0; i < 801; ++i) u[static_cast<size_t>(i)] = 1.0 + 0.25 * std::cos(s.grid.r(i));
    const auto rep = conformal_rescale(s, u);
    std::printf("generic rescale rows: %.2e %.2e %.2e %.2e %.2e\n", rep.rJ, rep.rP_rad,
                rep.rP_tan, rep.rWeyl, rep.rCotton);
    CHECK(rep.rJ <= 1e-6);
    CHECK(rep.rP_rad <= 1e-6);
    CHECK(rep.rP_tan <= 1e-6);
    CHECK(rep.rWeyl <= 1e-6);
    CHECK(rep.rCotton <= 1e-6);
  }
}

TEST_CASE("homothety covariance on a generic structure") {
  const auto s = perturbed(ModelKind::WeightedSphere, 2, 2.0, 801, 0.1);
  const double c = 1.7;
  const auto sh = rescale_structure(s, constant_field(801, 1.0 / c));
  const auto b = curvature_bundle(s, 0);
  const auto bh = curvature_bundle(sh, 0);
  const auto idx = interior_nodes(s);
  const double c2 = c * c;
  double dJ = 0, dP = 0, dY = 0, dA = 0, dC = 0, dB = 0, bmax = 0;
  for (int i : idx) {
    const auto j = static_cast<size_t>(i);
    dJ = std::max(dJ, std::abs(bh.J[j] - b.J[j] / c2));
    dP = std::max(dP, std::abs(bh.P_rad[j] - b.P_rad[j] / c2));
    dP = std::max(dP, std::abs(bh.P_tan[j] - b.P_tan[j] / c2));
    dY = std::max(dY, std::abs(bh.Y[j] - b.Y[j] / c2));
    dA = std::max(dA, std::abs(bh.A_comp[j] - b.A_comp[j] / c2));
    dC = std::max(dC, std::abs(bh.cotton_comp[j] - b.cotton_comp[j] / (c2 * c)));
    dB = std::max(dB, std::abs(bh.bach_rad[j] - b.bach_rad[j] / (c2 * c2)));
    dB = std::max(dB, std::abs(bh.bach_tan[j] - b.bach_tan[j] / (c2 * c2)));
    bmax = std::max(bmax, std::abs(b.bach_tan[j]));
  }
  std::printf("homothety: dJ %.2e dP %.2e dY %.2e dA %.2e dC %.2e dB %.2e |B| %.2e\n", dJ, dP,
              dY, dA, dC, dB, bmax);
  CHECK(dJ <= 1e-8);
  CHECK(dP <= 1e-8);
  CHECK(dY <= 1e-8);
  CHECK(dA <= 1e-8);
  CHECK(dC <= 1e-7);
  CHECK(dB <= 1e-6);
  CHECK(bmax >= 1e-5);  // the covariance check is not vacuous
}

TEST_CASE("einstein detection flags generic structures") {
  const auto s = perturbed(ModelKind::WeightedSphere, 2, 2.0, 401, 0.1);
  const auto fit = einstein_scale(s);
  CHECK(!fit.einstein);
  CHECK(fit.einstein_residual >= 1e-3);
  CHECK_THROWS_AS(curvature_bundle(s, -1), std::invalid_argument);
  CHECK_THROWS_AS(sigma_field(s, -1), std::invalid_argument);
  CHECK_THROWS_AS(divergence_residuals(s, -1), std::invalid_argument);
}
