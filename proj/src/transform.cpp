#include "cayley/transform.hpp"

#include "cayley/error.hpp"

#include <algorithm>
#include <cmath>

namespace cayley {

namespace {

void require_same_kappa(const RadialSymbol& a, const RadialSymbol& b) {
  if (a.kappa() != b.kappa()) {
    throw ValidationError("radial symbols have different kappa (" + std::to_string(a.kappa()) + " vs " +
                          std::to_string(b.kappa()) + ")");
  }
}

// Sub-rules that never straddle a jump of `phi`.
std::vector<QuadratureRule> rules_for(const SymbolFunction& phi, int kappa, const QuadratureRule& rule) {
  if (const auto* s = std::get_if<StepSymbol>(&phi.variant())) {
    const int n = static_cast<int>(rule.size());
    const double c = support_edge(kappa);
    std::vector<QuadratureRule> pieces;
    // The implicit zero outside the breakpoints contributes nothing.
    for (std::size_t i = 0; i + 1 < s->breakpoints.size(); ++i) {
      const double lo = std::max(s->breakpoints[i], -c);
      const double hi = std::min(s->breakpoints[i + 1], c);
      if (lo < hi) pieces.push_back(make_quadrature(kappa, n, lo, hi));
    }
    return pieces;
  }
  if (const auto* g = std::get_if<GridSymbol>(&phi.variant())) return {g->rule};
  return {rule};
}

template <class T>
T at(const std::vector<T>& v, std::size_t i) {
  return i < v.size() ? v[i] : T(0);
}

// (a (*) b)(n) for n = 0..n_out with values past the vectors taken as zero.
template <class T>
std::vector<T> convolution_formula(const std::vector<T>& a, const std::vector<T>& b, int kappa, int n_out) {
  const std::size_t len = std::max(a.size(), b.size());
  std::vector<T> kpow(len + 1);  // kappa^l
  kpow[0] = T(1);
  for (std::size_t l = 1; l <= len; ++l) kpow[l] = kpow[l - 1] * T(kappa);

  std::vector<T> out(static_cast<std::size_t>(std::max(n_out, -1) + 1), T(0));
  for (int ni = 0; ni <= n_out; ++ni) {
    const auto n = static_cast<std::size_t>(ni);
    T sum(0);
    if (n == 0) {
      sum = at(a, 0) * at(b, 0);
      for (std::size_t l = 1; l < len; ++l) sum += T(kappa + 1) * kpow[l - 1] * at(a, l) * at(b, l);
    } else {
      // kappa^l [a(l) b(l+n) + a(l+n) b(l)]; terms vanish once l >= len.
      for (std::size_t l = 0; l < len; ++l) sum += kpow[l] * (at(a, l) * at(b, l + n) + at(a, l + n) * at(b, l));
      if (n >= 2) {
        for (std::size_t i = 1; i < n; ++i) {
          sum += at(a, i) * at(b, n - i);
          for (std::size_t l = 1; l + i < len && l + n - i < len; ++l) {
            sum += T(kappa - 1) * kpow[l - 1] * at(a, l + i) * at(b, l + n - i);
          }
        }
      }
    }
    out[n] = sum;
  }
  return out;
}

}  // namespace

RadialSymbol hat_numeric(const SymbolFunction& phi, int kappa, int n_max, const QuadratureRule& rule, int degree_cap) {
  if (n_max < 0) throw ValidationError("n_max must be >= 0");
  if (n_max > degree_cap) {
    throw NumericError("n_max " + std::to_string(n_max) + " exceeds the recursion cap " + std::to_string(degree_cap));
  }
  if (rule.kappa != kappa) throw ValidationError("quadrature rule was built for a different kappa");
  phi.validate_for(kappa);

  std::vector<double> alpha(static_cast<std::size_t>(n_max) + 1, 0.0);
  double mass = 0.0;
  const auto* grid = std::get_if<GridSymbol>(&phi.variant());
  for (const auto& piece : rules_for(phi, kappa, rule)) {
    for (std::size_t i = 0; i < piece.size(); ++i) {
      const double t = piece.nodes[i];
      const double f = grid ? grid->values[i] : phi(t);
      if (f == 0.0) continue;
      const double wf = piece.weights[i] * f;
      const auto p = eval_P_upto(kappa, n_max, t, degree_cap);
      for (std::size_t n = 0; n < alpha.size(); ++n) alpha[n] += wf * p[n];
      mass += wf * f;
    }
  }
  return RadialSymbol::numeric(kappa, std::move(alpha), static_cast<int>(rule.size()), mass);
}

RadialSymbol hat_polynomial_exact(const std::vector<Rational>& coeffs, int kappa) {
  if (kappa < 1) throw ValidationError("kappa must be >= 1");
  const Rational up(kappa, kappa + 1);
  const Rational down(1, kappa + 1);
  std::vector<Rational> alpha;
  std::vector<Rational> beta{Rational(1)};  // beta_0 = delta_0
  for (std::size_t m = 0; m < coeffs.size(); ++m) {
    if (m > 0) {
      std::vector<Rational> next(beta.size() + 1, Rational(0));
      next[0] = at(beta, 1);
      for (std::size_t n = 1; n < next.size(); ++n) next[n] = up * at(beta, n + 1) + down * beta[n - 1];
      beta = std::move(next);
    }
    if (coeffs[m] == 0) continue;
    if (alpha.size() < beta.size()) alpha.resize(beta.size(), Rational(0));
    for (std::size_t n = 0; n < beta.size(); ++n) alpha[n] += coeffs[m] * beta[n];
  }
  return RadialSymbol::exact(kappa, std::move(alpha));
}

RadialSymbol hat(const SymbolFunction& phi, int kappa, int n_max, const QuadratureRule& rule) {
  if (const auto* p = std::get_if<PolynomialSymbol>(&phi.variant())) return hat_polynomial_exact(p->coeffs, kappa);
  return hat_numeric(phi, kappa, n_max, rule);
}

ConvolutionResult convolve(const RadialSymbol& a, const RadialSymbol& b, const ConvolveOptions& options) {
  require_same_kappa(a, b);
  const int kappa = a.kappa();
  if (a.is_exact() && b.is_exact()) {
    const int sa = a.support();
    const int sb = b.support();
    if (sa < 0 || sb < 0) return {RadialSymbol::exact(kappa, {}), 0.0};
    auto values = convolution_formula(a.exact_values(), b.exact_values(), kappa, sa + sb);
    return {RadialSymbol::exact(kappa, std::move(values)), 0.0};
  }

  // Exact factors have no tail; a numeric factor's tail comes from its mass.
  const auto tail_a = a.tail_mass();
  const auto tail_b = b.tail_mass();
  double bound = std::numeric_limits<double>::infinity();
  if (tail_a && tail_b) {
    const double norm_b = std::sqrt(b.row_norm_sq() + *tail_b);
    bound = std::sqrt(*tail_a) * norm_b + std::sqrt(a.row_norm_sq()) * std::sqrt(*tail_b);
  }
  if (bound > options.max_tail_bound) {
    throw NumericError("insufficient tail decay: truncation bound " + std::to_string(bound) + " exceeds " +
                       std::to_string(options.max_tail_bound));
  }
  int n_out;
  if (!a.is_exact() && !b.is_exact()) n_out = std::min(a.n_max(), b.n_max());
  else n_out = a.is_exact() ? b.n_max() : a.n_max();
  auto values = convolution_formula(a.values(), b.values(), kappa, n_out);

  std::optional<double> mass;
  if (tail_a && tail_b) {
    // Not the product's true mass; recorded from the truncated values so that
    // chained convolutions report a lower bound rather than nothing.
    double m = 0.0;
    for (std::size_t l = 0; l < values.size(); ++l) m += static_cast<double>(sphere_size(kappa, static_cast<int>(l))) * values[l] * values[l];
    mass = m;
  }
  const int nodes = std::max(a.quad_nodes(), b.quad_nodes());
  return {RadialSymbol::numeric(kappa, std::move(values), nodes, mass), bound};
}

Coefficient brute_force_convolve(const RadialSymbol& a, const RadialSymbol& b, int n, std::size_t vertex_budget) {
  require_same_kappa(a, b);
  if (n < 0) throw ValidationError("n must be >= 0");
  const int sa = a.support();
  const int sb = b.support();
  const bool exact = a.is_exact() && b.is_exact();
  if (sa < 0 || sb < 0) return {exact ? std::optional<Rational>(Rational(0)) : std::nullopt, 0.0};

  const int radius = std::min(sa, n + sb);
  const Ball ball = enumerate_ball(a.kappa(), radius, vertex_budget);
  const Vertex v_n{std::vector<int>(static_cast<std::size_t>(n), 0)};

  Rational exact_sum = 0;
  double sum = 0.0;
  for (const auto& x : ball.vertices()) {
    const auto d0 = static_cast<std::size_t>(x.depth());
    const auto dn = static_cast<std::size_t>(distance(x, v_n));
    if (exact) {
      const Rational ea = a.exact_at(d0);
      if (ea != 0) exact_sum += ea * b.exact_at(dn);
    } else {
      sum += a(d0) * b(dn);
    }
  }
  if (exact) return {exact_sum, to_double(exact_sum)};
  return {std::nullopt, sum};
}

}  // namespace cayley
