#pragma once

// Symbols on the spectral side (functions phi on the support of Pi_kappa)
// and on the tree side (radial sequences alpha: N_0 -> R defining kernels
// T_alpha(x, y) = alpha(d(x, y))).

#include "cayley/quadrature.hpp"
#include "cayley/rational.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace cayley {

/// phi(t) = sum_k coeffs[k] t^k with exact rational coefficients.
struct PolynomialSymbol {
  std::vector<Rational> coeffs;
};

/// Piecewise constant: values[i] on [breakpoints[i], breakpoints[i+1]), zero
/// outside [breakpoints.front(), breakpoints.back()].
struct StepSymbol {
  std::vector<double> breakpoints;
  std::vector<double> values;
};

/// Values sampled on the nodes of a quadrature rule.
struct GridSymbol {
  QuadratureRule rule;
  std::vector<double> values;
};

class SymbolFunction {
 public:
  using Variant = std::variant<PolynomialSymbol, StepSymbol, GridSymbol>;

  static SymbolFunction polynomial(std::vector<Rational> coeffs);
  /// Throws ValidationError unless breakpoints are strictly increasing and
  /// values has one entry per interval.
  static SymbolFunction step(std::vector<double> breakpoints, std::vector<double> values);
  static SymbolFunction indicator(double lo, double hi);
  static SymbolFunction constant(const Rational& c);
  template <class F>
  static SymbolFunction grid(const QuadratureRule& rule, F&& f) {
    GridSymbol g{rule, {}};
    g.values.reserve(rule.size());
    for (double t : rule.nodes) g.values.push_back(f(t));
    return SymbolFunction(std::move(g));
  }

  const Variant& variant() const { return v_; }
  bool is_polynomial() const { return std::holds_alternative<PolynomialSymbol>(v_); }
  bool is_step() const { return std::holds_alternative<StepSymbol>(v_); }
  bool is_grid() const { return std::holds_alternative<GridSymbol>(v_); }

  /// Pointwise value. Grid symbols have no pointwise value and throw.
  double operator()(double t) const;

  /// Degree of a polynomial symbol (-1 for the zero polynomial).
  int degree() const;

  /// Breakpoints must lie in the closed support of Pi_kappa.
  void validate_for(int kappa) const;

  /// Essential infimum and supremum over the support (polynomials by dense
  /// sampling, steps from their values).
  std::pair<double, double> range(int kappa) const;

  std::string describe() const;

 private:
  explicit SymbolFunction(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Pointwise product. Defined for polynomial*polynomial (exact) and
/// step*step (merged breakpoints).
SymbolFunction multiply(const SymbolFunction& a, const SymbolFunction& b);

/// Parses the symbol mini-grammar:
///   poly:c0,c1,...          exact rationals "p/q" or decimals
///   step:(a,b)=v;(b,c)=w    half-open pieces, gaps are zero
///   indicator:(a,b)
///   step:a=x                indicator of [c cos(x pi), c], i.e. theta in [0, x pi]
///   const:v
/// Endpoints may be written c or -c for the support edge 2 sqrt(kappa)/(kappa+1).
/// Errors name the offending token.
SymbolFunction parse_symbol_spec(std::string_view spec, int kappa);

/// A radial symbol alpha(0..n_max). Exact symbols carry rationals and are
/// zero beyond their stored length; numeric symbols carry floats produced by
/// quadrature and remember N and, when known, the total mass
/// ||phi||^2 = sum_l #S_l alpha(l)^2.
class RadialSymbol {
 public:
  RadialSymbol() = default;
  static RadialSymbol exact(int kappa, std::vector<Rational> values);
  static RadialSymbol numeric(int kappa, std::vector<double> values, int quad_nodes = 0,
                              std::optional<double> l2_mass = std::nullopt);
  /// alpha = delta_n.
  static RadialSymbol delta(int kappa, int n);

  int kappa() const { return kappa_; }
  bool is_exact() const { return exact_; }
  /// Number of stored values (n_max + 1).
  std::size_t size() const { return values_.size(); }
  int n_max() const { return static_cast<int>(values_.size()) - 1; }

  /// alpha(n); zero past the stored range.
  double operator()(std::size_t n) const { return n < values_.size() ? values_[n] : 0.0; }
  /// Exact alpha(n); throws for numeric symbols.
  Rational exact_at(std::size_t n) const;
  const std::vector<double>& values() const { return values_; }
  const std::vector<Rational>& exact_values() const;

  int quad_nodes() const { return quad_nodes_; }
  std::optional<double> l2_mass() const { return l2_mass_; }

  /// Largest n with alpha(n) != 0, or -1 for the zero symbol.
  int support() const;

  /// sum_{l <= n_max} #S_l alpha(l)^2: the squared l^2 norm of a kernel row
  /// restricted to the stored range.
  double row_norm_sq() const;

  /// Mass beyond n_max: l2_mass - row_norm_sq for numeric symbols, zero for
  /// exact ones, nullopt when the total mass is unknown.
  std::optional<double> tail_mass() const;

  friend bool operator==(const RadialSymbol& a, const RadialSymbol& b);

 private:
  int kappa_ = 1;
  bool exact_ = true;
  std::vector<double> values_;
  std::vector<Rational> exact_values_;
  int quad_nodes_ = 0;
  std::optional<double> l2_mass_;
};

/// Parses a comma-separated list of exact values ("1,0,-1/2" or "1,0,-0.5").
RadialSymbol parse_alpha_list(std::string_view text, int kappa);

/// { "kappa": int, "exact": bool, "values": [...] } with rationals as strings
/// and floats as numbers; numeric symbols add "quad_nodes" and "l2_mass".
nlohmann::json to_json(const RadialSymbol& alpha);
RadialSymbol radial_symbol_from_json(const nlohmann::json& j);

}  // namespace cayley
