#pragma once

// Cartier-Dunau polynomials of the tree T_kappa:
//   P_0 = 1, P_1 = t, t P_n = kappa/(kappa+1) P_{n+1} + 1/(kappa+1) P_{n-1},
// their monic companions Q_n, and the orthogonality measure Pi_kappa.

#include "cayley/rational.hpp"

#include <vector>

namespace cayley {

/// Default ceiling on n for forward recursion. |P_n(t)| grows like
/// ((kappa+1)/kappa)^n near |t| = 1, so very high degrees are refused.
inline constexpr int kDefaultDegreeCap = 64;

/// P_n(t) by forward recursion P_{n+1} = ((kappa+1) t P_n - P_{n-1}) / kappa.
double eval_P(int kappa, int n, double t, int degree_cap = kDefaultDegreeCap);

/// P_0(t), ..., P_n(t).
std::vector<double> eval_P_upto(int kappa, int n, double t, int degree_cap = kDefaultDegreeCap);

/// Monic Q_n(t) = P_n(t) / k_n for n >= 1 and Q_0 = (kappa+1)/kappa, via its
/// own recursion Q_{n+1} = t Q_n - kappa/(kappa+1)^2 Q_{n-1}.
double eval_Q(int kappa, int n, double t, int degree_cap = kDefaultDegreeCap);

/// Leading coefficient k_n of P_n: 1 for n <= 1, ((kappa+1)/kappa)^(n-1) otherwise.
Rational leading_coeff(int kappa, int n);

/// ||P_n||^2 in L^2(Pi_kappa): 1 for n = 0, 1/(kappa^(n-1) (kappa+1)) otherwise.
/// Equals 1/#S_n(o).
Rational l2_norm_sq(int kappa, int n);

/// Half-width 2 sqrt(kappa)/(kappa+1) of the support of Pi_kappa.
double support_edge(int kappa);

/// Density of Pi_kappa; zero outside the support.
double density(int kappa, double t);

}  // namespace cayley
