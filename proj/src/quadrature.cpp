#include "cayley/quadrature.hpp"

#include "cayley/error.hpp"
#include "cayley/polynomials.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace cayley {

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n, double a, double b) {
  if (n < 1) throw ValidationError("Gauss-Legendre needs at least one node");
  std::vector<double> x(static_cast<std::size_t>(n));
  std::vector<double> w(static_cast<std::size_t>(n));
  const double mid = 0.5 * (b + a);
  const double half = 0.5 * (b - a);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p1 = 1.0;
    double p2 = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
    }
    dp = n * (z * p1 - p2) / (z * z - 1.0);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    x[lo] = mid - half * z;
    x[hi] = mid + half * z;
    w[lo] = 2.0 * half / ((1.0 - z * z) * dp * dp);
    w[hi] = w[lo];
  }
  return {std::move(x), std::move(w)};
}

std::string QuadratureRule::to_csv() const {
  std::string out = "node,weight\n";
  char buf[64];
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", nodes[i], weights[i]);
    out += buf;
  }
  return out;
}

QuadratureRule make_quadrature(int kappa, int n) {
  const double c = support_edge(kappa);
  return make_quadrature(kappa, n, -c, c);
}

QuadratureRule make_quadrature(int kappa, int n, double t_lo, double t_hi) {
  if (n < 2) throw ValidationError("quadrature needs at least 2 nodes, got " + std::to_string(n));
  const double c = support_edge(kappa);
  const double lo = std::clamp(t_lo, -c, c);
  const double hi = std::clamp(t_hi, -c, c);
  if (!(lo <= hi)) throw ValidationError("empty quadrature interval");
  // t = c cos(theta) is decreasing, so [lo, hi] maps to [acos(hi/c), acos(lo/c)].
  const double theta_a = std::acos(std::clamp(hi / c, -1.0, 1.0));
  const double theta_b = std::acos(std::clamp(lo / c, -1.0, 1.0));
  auto [theta, gl_w] = gauss_legendre(n, theta_a, theta_b);

  const double k = kappa;
  const double scale = (k + 1.0) / (2.0 * std::numbers::pi) * c * c;
  const double one_minus_c2 = 1.0 - c * c;  // (kappa-1)^2/(kappa+1)^2, exact zero for kappa = 1
  QuadratureRule rule;
  rule.kappa = kappa;
  rule.nodes.resize(theta.size());
  rule.weights.resize(theta.size());
  // Emit nodes in increasing t.
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const std::size_t j = theta.size() - 1 - i;
    const double s = std::sin(theta[i]);
    const double s2 = s * s;
    rule.nodes[j] = c * std::cos(theta[i]);
    rule.weights[j] = gl_w[i] * scale * s2 / (one_minus_c2 + c * c * s2);
  }
  return rule;
}

}  // namespace cayley
