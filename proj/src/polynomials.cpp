#include "cayley/polynomials.hpp"

#include "cayley/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace cayley {

namespace {

void check_args(int kappa, int n, int degree_cap) {
  if (kappa < 1) throw ValidationError("kappa must be >= 1, got " + std::to_string(kappa));
  if (n < 0) throw ValidationError("polynomial degree must be >= 0, got " + std::to_string(n));
  if (n > degree_cap) {
    throw NumericError("degree " + std::to_string(n) + " exceeds recursion cap " + std::to_string(degree_cap));
  }
}

}  // namespace

std::vector<double> eval_P_upto(int kappa, int n, double t, int degree_cap) {
  check_args(kappa, n, degree_cap);
  std::vector<double> p(static_cast<std::size_t>(n) + 1);
  p[0] = 1.0;
  if (n >= 1) p[1] = t;
  const double k = kappa;
  for (int m = 1; m < n; ++m) {
    const auto i = static_cast<std::size_t>(m);
    p[i + 1] = ((k + 1.0) * t * p[i] - p[i - 1]) / k;
    if (!std::isfinite(p[i + 1])) throw NumericError("P_n recursion overflowed at n=" + std::to_string(m + 1));
  }
  return p;
}

double eval_P(int kappa, int n, double t, int degree_cap) { return eval_P_upto(kappa, n, t, degree_cap).back(); }

double eval_Q(int kappa, int n, double t, int degree_cap) {
  check_args(kappa, n, degree_cap);
  const double k = kappa;
  const double q0 = (k + 1.0) / k;
  if (n == 0) return q0;
  const double c = k / ((k + 1.0) * (k + 1.0));
  double prev = q0;
  double cur = t;
  for (int m = 1; m < n; ++m) {
    const double next = t * cur - c * prev;
    prev = cur;
    cur = next;
  }
  if (!std::isfinite(cur)) throw NumericError("Q_n recursion overflowed at n=" + std::to_string(n));
  return cur;
}

Rational leading_coeff(int kappa, int n) {
  check_args(kappa, n, n);
  if (n <= 1) return 1;
  return pow(Rational(kappa + 1, kappa), static_cast<unsigned>(n - 1));
}

Rational l2_norm_sq(int kappa, int n) {
  check_args(kappa, n, n);
  if (n == 0) return 1;
  BigInt den = kappa + 1;
  for (int i = 1; i < n; ++i) den *= kappa;
  return Rational(BigInt(1), den);
}

double support_edge(int kappa) {
  if (kappa < 1) throw ValidationError("kappa must be >= 1");
  return 2.0 * std::sqrt(static_cast<double>(kappa)) / (kappa + 1.0);
}

double density(int kappa, double t) {
  const double c = support_edge(kappa);
  if (!(std::abs(t) < c)) return 0.0;
  const double k = kappa;
  return (k + 1.0) / (2.0 * std::numbers::pi) * std::sqrt(c * c - t * t) / (1.0 - t * t);
}

}  // namespace cayley
