#pragma once

// The symbol transform phi -> phi^(n) = int P_n phi dPi_kappa and the radial
// convolution realising operator composition, T_{a (*) b} = T_a T_b.

#include "cayley/polynomials.hpp"
#include "cayley/quadrature.hpp"
#include "cayley/symbol.hpp"
#include "cayley/tree.hpp"

#include <limits>
#include <optional>

namespace cayley {

/// Quadrature approximation of phi^(0..n_max). Step symbols are integrated
/// piecewise with rule.size() nodes per piece so that jumps sit on the
/// boundaries of the sub-rules; grid symbols use their own rule. The result
/// records N and ||phi||^2_{L^2(Pi)} for tail bounds.
RadialSymbol hat_numeric(const SymbolFunction& phi, int kappa, int n_max, const QuadratureRule& rule,
                         int degree_cap = kDefaultDegreeCap);

/// Exact transform of sum_m coeffs[m] t^m via the monomial recursion
///   beta_0 = delta_0,
///   beta_{m+1}(0) = beta_m(1),
///   beta_{m+1}(n) = kappa/(kappa+1) beta_m(n+1) + 1/(kappa+1) beta_m(n-1).
RadialSymbol hat_polynomial_exact(const std::vector<Rational>& coeffs, int kappa);

/// Exact when the symbol is polynomial, quadrature otherwise.
RadialSymbol hat(const SymbolFunction& phi, int kappa, int n_max, const QuadratureRule& rule);

struct ConvolveOptions {
  /// Reject numeric inputs whose truncation error bound exceeds this.
  double max_tail_bound = std::numeric_limits<double>::infinity();
};

struct ConvolutionResult {
  RadialSymbol symbol;
  /// Bound on |computed - true| for every n; zero when both inputs are exact,
  /// +inf when a numeric input has no recorded total mass.
  double tail_bound = 0.0;
};

/// The closed-form three-case product (n = 0, n = 1, n >= 2). Exact inputs
/// give an exact result supported on [0, supp a + supp b]; numeric inputs
/// give n = 0..min(n_max) with a Cauchy-Schwarz truncation bound
///   |err| <= tail(a) ||b|| + ||a_trunc|| tail(b).
ConvolutionResult convolve(const RadialSymbol& a, const RadialSymbol& b, const ConvolveOptions& options = {});

/// A single product coefficient, exact when both factors are exact.
struct Coefficient {
  std::optional<Rational> exact;
  double value = 0.0;
};

/// (a (*) b)(n) straight from the defining vertex sum
///   sum_x a(d(v_0, x)) b(d(x, v_n))
/// over the ball around v_0 = root that holds every contributing vertex,
/// radius min(supp a, n + supp b), with v_n on the branch-0 ray.
Coefficient brute_force_convolve(const RadialSymbol& a, const RadialSymbol& b, int n,
                                 std::size_t vertex_budget = kDefaultVertexBudget);

}  // namespace cayley
