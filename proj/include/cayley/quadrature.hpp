#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cayley {

inline constexpr int kDefaultQuadratureNodes = 256;

/// n-point Gauss-Legendre nodes and weights on [a, b].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n, double a, double b);

/// Nodes and positive weights approximating integrals against Pi_kappa (or
/// against its restriction to a sub-interval of the support).
struct QuadratureRule {
  int kappa = 1;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }

  /// "node,weight" lines with a header, full precision.
  std::string to_csv() const;
};

/// Rule for the whole support. With t = c cos(theta), c = 2 sqrt(kappa)/(kappa+1),
///   dPi_kappa = (kappa+1)/(2 pi) c^2 sin^2(theta) / (1 - c^2 cos^2(theta)) dtheta
/// on [0, pi], which is analytic; n Gauss-Legendre points are used in theta.
/// Throws ValidationError for n < 2.
QuadratureRule make_quadrature(int kappa, int n);

/// Same substitution restricted to t in [t_lo, t_hi] (clipped to the support).
/// The weights sum to Pi_kappa([t_lo, t_hi]).
QuadratureRule make_quadrature(int kappa, int n, double t_lo, double t_hi);

}  // namespace cayley
