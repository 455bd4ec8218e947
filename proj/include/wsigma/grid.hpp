#pragma once

/// Uniform radial grid with parity-aware fourth order finite differences and
/// composite Simpson quadrature. The central stencils are written in grouped
/// form so that constant fields differentiate to exactly zero in binary64.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace wsigma {

/// How a sampled field continues past one end of the domain. Mirror rules
/// reflect the interior values across the end node (even) or negate them
/// (odd); OneSided switches to five and six point boundary stencils.
enum class EndRule { EvenMirror, OddMirror, OneSided };

/// Uniform partition of [0, length] sampled at `count` nodes.
struct Grid {
  double length = 0.0;
  int count = 0;

  [[nodiscard]] int nodes() const { return count; }
  [[nodiscard]] int cells() const { return count - 1; }
  [[nodiscard]] double h() const { return length / cells(); }
  [[nodiscard]] double r(int i) const { return length * i / cells(); }
};

[[nodiscard]] inline Grid make_grid(double length, int node_count) {
  if (!(length > 0.0)) throw std::invalid_argument("grid length must be positive");
  if (node_count < 7) throw std::invalid_argument("grid needs at least 7 nodes");
  return Grid{length, node_count};
}

inline void check_field(const Grid& g, const std::vector<double>& w) {
  if (static_cast<int>(w.size()) != g.nodes())
    throw std::invalid_argument("field length does not match grid");
}

namespace detail {

/// Fornberg weights for derivative orders 0..order at x0 over nodes x.
[[nodiscard]] inline std::vector<std::vector<double>> fd_weights(double x0,
                                                                 const std::vector<double>& x,
                                                                 int order) {
  const int nn = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(order + 1, std::vector<double>(nn, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < nn; ++i) {
    const int mi = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mi; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mi; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

/// Field value at a possibly out-of-range index under the end rules.
[[nodiscard]] inline double mirrored(const std::vector<double>& w, int i, EndRule left,
                                     EndRule right) {
  const int n = static_cast<int>(w.size());
  if (i >= 0 && i < n) return w[i];
  if (i < 0) return left == EndRule::OddMirror ? -w[-i] : w[-i];
  const int j = 2 * (n - 1) - i;
  return right == EndRule::OddMirror ? -w[j] : w[j];
}

[[nodiscard]] inline double pairwise_sum(const double* a, int n) {
  if (n <= 8) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += a[i];
    return s;
  }
  const int half = n / 2;
  return pairwise_sum(a, half) + pairwise_sum(a + half, n - half);
}

}  // namespace detail

/// Fourth order first derivative with respect to the grid coordinate.
[[nodiscard]] inline std::vector<double> deriv1(const Grid& g, const std::vector<double>& w,
                                                EndRule left, EndRule right) {
  check_field(g, w);
  const int n = g.nodes();
  const double h = g.h();
  std::vector<double> out(n);
  auto central = [&](int i) {
    const double wp1 = detail::mirrored(w, i + 1, left, right);
    const double wm1 = detail::mirrored(w, i - 1, left, right);
    const double wp2 = detail::mirrored(w, i + 2, left, right);
    const double wm2 = detail::mirrored(w, i - 2, left, right);
    // grouped: exactly zero on constant input
    return (8.0 * (wp1 - wm1) - (wp2 - wm2)) / (12.0 * h);
  };
  for (int i = 2; i < n - 2; ++i) out[i] = central(i);
  for (int i : {0, 1}) {
    if (left != EndRule::OneSided) {
      out[i] = central(i);
    } else {
      std::vector<double> x(6);
      for (int j = 0; j < 6; ++j) x[j] = g.r(j);
      const auto wts = detail::fd_weights(g.r(i), x, 1);
      double s = 0.0;
      for (int j = 0; j < 6; ++j) s += wts[1][j] * w[j];
      out[i] = s;
    }
  }
  for (int i : {n - 2, n - 1}) {
    if (right != EndRule::OneSided) {
      out[i] = central(i);
    } else {
      std::vector<double> x(6);
      for (int j = 0; j < 6; ++j) x[j] = g.r(n - 6 + j);
      const auto wts = detail::fd_weights(g.r(i), x, 1);
      double s = 0.0;
      for (int j = 0; j < 6; ++j) s += wts[1][j] * w[n - 6 + j];
      out[i] = s;
    }
  }
  return out;
}

/// Fourth order second derivative with respect to the grid coordinate.
[[nodiscard]] inline std::vector<double> deriv2(const Grid& g, const std::vector<double>& w,
                                                EndRule left, EndRule right) {
  check_field(g, w);
  const int n = g.nodes();
  const double h = g.h();
  std::vector<double> out(n);
  auto central = [&](int i) {
    const double wp1 = detail::mirrored(w, i + 1, left, right);
    const double wm1 = detail::mirrored(w, i - 1, left, right);
    const double wp2 = detail::mirrored(w, i + 2, left, right);
    const double wm2 = detail::mirrored(w, i - 2, left, right);
    // grouped: 16*(a+b) - (c+d) - 30*w rounds to exactly zero on constants
    return (16.0 * (wp1 + wm1) - (wp2 + wm2) - 30.0 * w[i]) / (12.0 * h * h);
  };
  for (int i = 2; i < n - 2; ++i) out[i] = central(i);
  for (int i : {0, 1}) {
    if (left != EndRule::OneSided) {
      out[i] = central(i);
    } else {
      std::vector<double> x(7);
      for (int j = 0; j < 7; ++j) x[j] = g.r(j);
      const auto wts = detail::fd_weights(g.r(i), x, 2);
      double s = 0.0;
      for (int j = 0; j < 7; ++j) s += wts[2][j] * w[j];
      out[i] = s;
    }
  }
  for (int i : {n - 2, n - 1}) {
    if (right != EndRule::OneSided) {
      out[i] = central(i);
    } else {
      std::vector<double> x(7);
      for (int j = 0; j < 7; ++j) x[j] = g.r(n - 7 + j);
      const auto wts = detail::fd_weights(g.r(i), x, 2);
      double s = 0.0;
      for (int j = 0; j < 7; ++j) s += wts[2][j] * w[n - 7 + j];
      out[i] = s;
    }
  }
  return out;
}

/// Composite Simpson integral over the whole grid; odd interval counts close
/// with a 3/8 tail. Summation is pairwise for run-to-run determinism.
[[nodiscard]] inline double integrate(const Grid& g, const std::vector<double>& w) {
  check_field(g, w);
  const double h = g.h();
  const int c = g.cells();
  if (c < 4) throw std::invalid_argument("integrate needs at least four cells");
  const int simpson_end = (c % 2 == 0) ? c : c - 3;
  std::vector<double> terms;
  terms.reserve(static_cast<size_t>(simpson_end / 2 + 1));
  for (int i = 0; i + 2 <= simpson_end; i += 2)
    terms.push_back((h / 3.0) * (w[i] + 4.0 * w[i + 1] + w[i + 2]));
  if (c % 2 != 0)
    terms.push_back((3.0 * h / 8.0) * (w[c - 3] + 3.0 * w[c - 2] + 3.0 * w[c - 1] + w[c]));
  return detail::pairwise_sum(terms.data(), static_cast<int>(terms.size()));
}

/// Surface area of the unit sphere S^{d-1} in R^d.
[[nodiscard]] inline double unit_sphere_area(int d) {
  if (d < 1) throw std::invalid_argument("sphere dimension must be positive");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

}  // namespace wsigma
