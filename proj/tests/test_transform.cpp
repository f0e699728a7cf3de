#include "cayley/error.hpp"
#include "cayley/symbol.hpp"
#include "cayley/transform.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

using namespace cayley;
using doctest::Approx;

namespace {
std::vector<Rational> monomial(int m) {
  std::vector<Rational> c(static_cast<std::size_t>(m) + 1, 0);
  c.back() = 1;
  return c;
}
}  // namespace

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational("-2/6") == Rational(-1, 3));
  CHECK(parse_rational("-0.125") == Rational(-1, 8));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational("2.5E2") == 250);
  CHECK(to_string(Rational(4, 6)) == "2/3");
  CHECK(to_string(Rational(-5)) == "-5");
  CHECK_THROWS_AS(parse_rational("1/0"), ValidationError);
  CHECK_THROWS_AS(parse_rational("abc"), ValidationError);
  CHECK_THROWS_AS(parse_rational(""), ValidationError);
}

TEST_CASE("symbol grammar") {
  const double c = support_edge(2);
  const auto p = parse_symbol_spec("poly:0,1/2,-1", 2);
  CHECK(p.is_polynomial());
  CHECK(p.degree() == 2);
  CHECK(p(0.5) == Approx(0.25 - 0.25));
  const auto s = parse_symbol_spec("step:(-c,0)=0.25;(0,c)=1", 2);
  CHECK(s.is_step());
  CHECK(s(-0.1) == 0.25);
  CHECK(s(0.1) == 1.0);
  CHECK(s(c + 0.01) == 0.0);
  const auto gap = parse_symbol_spec("step:(-0.5,-0.1)=1;(0.1,0.5)=1", 2);
  CHECK(gap(0.0) == 0.0);
  const auto ind = parse_symbol_spec("indicator:(0,c)", 2);
  CHECK(ind.range(2) == std::pair{0.0, 1.0});
  const auto sine = parse_symbol_spec("step:a=0.5", 1);
  const auto& st = std::get<StepSymbol>(sine.variant());
  CHECK(st.breakpoints[0] == Approx(0.0).scale(1.0));
  CHECK(st.breakpoints[1] == Approx(1.0));
  CHECK(parse_symbol_spec("const:1", 3)(0.2) == 1.0);

  for (const char* bad : {"foo:1", "poly:", "poly:1,x", "step:(0,0.1)", "step:(0.2,0.1)=1", "step:(0,0.3)=1;(0.2,0.4)=1",
                          "indicator:(0,2)", "step:a=2", "const:"}) {
    CAPTURE(std::string(bad));
    CHECK_THROWS_AS(parse_symbol_spec(bad, 2), ValidationError);
  }
  try {
    parse_symbol_spec("poly:1,zz", 2);
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("zz") != std::string::npos);
  }
}

TEST_CASE("symbol products") {
  const auto a = SymbolFunction::polynomial({1, 1});
  const auto sq = multiply(a, a);
  CHECK(sq.degree() == 2);
  CHECK(sq(0.3) == Approx(1.69));
  const auto s = multiply(SymbolFunction::indicator(-0.5, 0.5), SymbolFunction::step({0.0, 0.9}, {2.0}));
  CHECK(s(0.25) == 2.0);
  CHECK(s(-0.25) == 0.0);
  CHECK(s(0.7) == 0.0);
}

TEST_CASE("exact transform of t and t^2") {
  const auto a1 = hat_polynomial_exact({0, 1}, 2);
  CHECK(a1.exact_values() == std::vector<Rational>{0, Rational(1, 3)});
  const auto a2 = hat_polynomial_exact({0, 0, 1}, 2);
  CHECK(a2.exact_values() == std::vector<Rational>{Rational(1, 3), 0, Rational(1, 9)});
  CHECK(hat_polynomial_exact({1}, 3) == RadialSymbol::delta(3, 0));
  CHECK(hat_polynomial_exact({0, 0, 0}, 3).support() == -1);
}

TEST_CASE("exact transform of monomials counts walks") {
  for (int kappa = 1; kappa <= 3; ++kappa) {
    for (int m = 0; m <= 9; ++m) {
      const auto alpha = hat_polynomial_exact(monomial(m), kappa);
      Rational scale = 1;
      for (int i = 0; i < m; ++i) scale *= (kappa + 1);
      for (int n = 0; n <= m + 1; ++n) {
        CHECK(Rational(oracle::walks_to_depth(kappa, m, n)) / scale ==
              (n < static_cast<int>(alpha.size()) ? alpha.exact_at(n) : Rational(0)));
      }
    }
  }
}

TEST_CASE("numeric transform agrees with the exact one") {
  const auto rule = make_quadrature(3, 128);
  const auto phi = SymbolFunction::polynomial({Rational(1, 2), 0, -1, 0, 3});
  const auto exact = hat_polynomial_exact({Rational(1, 2), 0, -1, 0, 3}, 3);
  const auto num = hat_numeric(phi, 3, 10, rule);
  CHECK_FALSE(num.is_exact());
  CHECK(num.quad_nodes() == 128);
  for (int n = 0; n <= 10; ++n) CHECK(num(n) == Approx(exact(n)).epsilon(1e-12).scale(1.0));
  // Parseval: ||phi||^2 = sum #S_n alpha(n)^2 for polynomials
  REQUIRE(num.l2_mass());
  CHECK(*num.l2_mass() == Approx(exact.row_norm_sq()).epsilon(1e-12));
  CHECK(*num.tail_mass() == Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("sine kernel coefficients") {
  const auto rule = make_quadrature(1, 256);
  for (double a : {0.25, 0.5, 0.8}) {
    const auto alpha = hat(SymbolFunction::indicator(std::cos(a * std::numbers::pi), 1.0), 1, 12, rule);
    CHECK(alpha(0) == Approx(a).epsilon(1e-12));
    for (int n = 1; n <= 12; ++n) {
      CHECK(alpha(n) == Approx(std::sin(n * a * std::numbers::pi) / (n * std::numbers::pi)).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("half support indicator has alpha(0) = 1/2") {
  for (int kappa = 1; kappa <= 3; ++kappa) {
    const auto alpha = hat(parse_symbol_spec("indicator:(0,c)", kappa), kappa, 4, make_quadrature(kappa, 128));
    CHECK(alpha(0) == Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("exact convolution matches the vertex sum") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> num(-5, 5), den(1, 6), len(1, 4);
  for (int kappa = 1; kappa <= 3; ++kappa) {
    for (int trial = 0; trial < 6; ++trial) {
      std::vector<Rational> av, bv;
      for (int i = len(rng); i > 0; --i) av.emplace_back(num(rng), den(rng));
      for (int i = len(rng); i > 0; --i) bv.emplace_back(num(rng), den(rng));
      const auto a = RadialSymbol::exact(kappa, av);
      const auto b = RadialSymbol::exact(kappa, bv);
      const auto r = convolve(a, b);
      CHECK(r.tail_bound == 0.0);
      CHECK(r.symbol.is_exact());
      for (int n = 0; n <= 6; ++n) {
        const auto bf = brute_force_convolve(a, b, n);
        REQUIRE(bf.exact);
        CHECK(*bf.exact == (n < static_cast<int>(r.symbol.size()) ? r.symbol.exact_at(n) : Rational(0)));
      }
    }
  }
}

TEST_CASE("convolution identities") {
  const auto a = RadialSymbol::exact(2, {1, 2, Rational(-1, 3)});
  CHECK(convolve(a, RadialSymbol::delta(2, 0)).symbol == a);
  const auto b = RadialSymbol::exact(2, {0, 5, 1, 7});
  CHECK(convolve(a, b).symbol == convolve(b, a).symbol);
  // delta_1 * delta_1 = (kappa+1) delta_0 + (kappa-1) delta_2 + ... : A^2 = (kappa+1) I + A_2
  const auto d11 = convolve(RadialSymbol::delta(2, 1), RadialSymbol::delta(2, 1)).symbol;
  CHECK(d11.exact_values() == std::vector<Rational>{3, 0, 1});
  CHECK_THROWS_AS(convolve(a, RadialSymbol::delta(3, 0)), ValidationError);
}

TEST_CASE("polynomial multiplicativity") {
  for (int kappa = 1; kappa <= 3; ++kappa) {
    for (int l = 0; l <= 4; ++l) {
      for (int m = 0; m <= 4; ++m) {
        const auto lhs = convolve(hat_polynomial_exact(monomial(l), kappa), hat_polynomial_exact(monomial(m), kappa));
        CHECK(lhs.symbol == hat_polynomial_exact(monomial(l + m), kappa));
      }
    }
  }
}

TEST_CASE("numeric convolution stays within its tail bound") {
  const int kappa = 2;
  const auto rule = make_quadrature(kappa, 256);
  const auto ind = SymbolFunction::indicator(-0.3, 0.6);
  const auto a = hat(ind, kappa, 24, rule);
  // 1_J * 1_J = 1_J, so the convolution must reproduce alpha itself
  const auto r = convolve(a, a);
  REQUIRE(std::isfinite(r.tail_bound));
  CHECK(r.tail_bound > 0);
  for (int n = 0; n <= 24; ++n) CHECK(std::abs(r.symbol(n) - a(n)) <= r.tail_bound + 1e-10);
  CHECK_THROWS_AS(convolve(a, a, ConvolveOptions{r.tail_bound / 10}), NumericError);

  // numeric polynomial inputs have no tail
  const auto t = hat_numeric(SymbolFunction::polynomial({0, 1}), kappa, 8, rule);
  const auto tt = convolve(t, t);
  CHECK(tt.tail_bound < 1e-12);
  CHECK(tt.symbol(0) == Approx(1.0 / 3.0));
  CHECK(tt.symbol(2) == Approx(1.0 / 9.0));
  // unknown mass means no bound
  const auto raw = RadialSymbol::numeric(kappa, {0.1, 0.2});
  CHECK(std::isinf(convolve(raw, raw).tail_bound));
}

TEST_CASE("radial symbol json round trip") {
  const auto a = RadialSymbol::exact(3, {Rational(1, 2), 0, Rational(-7, 3)});
  const auto j = to_json(a);
  CHECK(j["values"][2] == "-7/3");
  CHECK(radial_symbol_from_json(j) == a);
  const auto b = RadialSymbol::numeric(2, {0.5, 0.25}, 64, 0.75);
  CHECK(radial_symbol_from_json(to_json(b)) == b);
  CHECK(parse_alpha_list("1,0,-0.5", 1).exact_values() == std::vector<Rational>{1, 0, Rational(-1, 2)});
  CHECK_THROWS_AS(parse_alpha_list("1,,2", 1), ValidationError);
}

TEST_CASE("numeric multiplicativity for step symbols") {
  const int kappa = 2;
  const auto phi = parse_symbol_spec("indicator:(-0.3,0.6)", kappa);
  const auto psi = parse_symbol_spec("step:(-c,0)=0.5;(0,0.8)=1", kappa);
  const auto prod = multiply(phi, psi);
  std::vector<double> errors;
  for (int n_max : {8, 16, 32, 48}) {
    const auto rule = make_quadrature(kappa, 256);
    const auto lhs = hat_numeric(prod, kappa, 8, rule);
    const auto rhs = convolve(hat_numeric(phi, kappa, n_max, rule), hat_numeric(psi, kappa, n_max, rule));
    double err = 0;
    for (int n = 0; n <= 8; ++n) err = std::max(err, std::abs(lhs(n) - rhs.symbol(n)));
    CHECK(err <= rhs.tail_bound + 1e-12);
    errors.push_back(err);
  }
  CHECK(errors.back() <= 1e-4);
  CHECK(errors.back() < errors.front());
}
