#include "cayley/error.hpp"
#include "cayley/toeplitz.hpp"
#include "cayley/transform.hpp"
#include "oracles.hpp"

#include <cmath>

#include <doctest.h>

using namespace cayley;
using doctest::Approx;

TEST_CASE("matrix entries are alpha of the BFS distance") {
  const auto alpha = RadialSymbol::exact(2, {2, -1, Rational(1, 4), 3});
  const Ball ball = enumerate_ball(2, 3);
  const auto op = build_matrix(alpha, ball);
  const auto g = oracle::tree_ball(2, 3);
  for (std::size_t v = 0; v < g.adj.size(); ++v) {
    const auto d = oracle::bfs(g, static_cast<int>(v));
    const auto i = ball.index_of(Vertex{g.word[v]});
    for (std::size_t w = 0; w < g.adj.size(); ++w) {
      CHECK(op.matrix()(i, ball.index_of(Vertex{g.word[w]})) == alpha(d[w]));
    }
  }
  CHECK(op.matrix().isApprox(op.matrix().transpose(), 0.0));
}

TEST_CASE("identity symbol") {
  const auto op = build_matrix(RadialSymbol::delta(3, 0), enumerate_ball(3, 3));
  CHECK(op.matrix() == Eigen::MatrixXd::Identity(op.dim(), op.dim()));
}

TEST_CASE("numeric symbols must cover the diameter") {
  const auto alpha = RadialSymbol::numeric(2, {1.0, 0.5, 0.25});
  CHECK_THROWS_AS(build_matrix(alpha, enumerate_ball(2, 2)), ValidationError);
  CHECK_NOTHROW(build_matrix(alpha, enumerate_ball(2, 1)));
}

TEST_CASE("composition on the interior is exact") {
  // (T_a T_b)(x, y) = (a (*) b)(d(x, y)) whenever every z with a(d(x, z)) != 0
  // lies in the ball, i.e. depth(x) + supp a <= R. Checked in exact arithmetic.
  const int kappa = 2, R = 3;
  const auto a = RadialSymbol::exact(kappa, {1, Rational(2, 3)});
  const auto b = RadialSymbol::exact(kappa, {Rational(-1, 2), 1, 5});
  const auto ab = convolve(a, b).symbol;
  const Ball ball = enumerate_ball(kappa, R);
  const auto dist = ball.distance_table();
  const std::size_t n = ball.size();
  auto coef = [](const RadialSymbol& s, int d) { return d < static_cast<int>(s.size()) ? s.exact_at(d) : Rational(0); };
  for (std::size_t x = 0; x < ball.sphere_end(R - a.support()); ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      Rational sum = 0;
      for (std::size_t z = 0; z < n; ++z) sum += coef(a, dist[x * n + z]) * coef(b, dist[z * n + y]);
      CHECK(sum == coef(ab, dist[x * n + y]));
    }
  }
}

TEST_CASE("invariance under branch relabeling") {
  const auto alpha = hat_polynomial_exact({0, 1, 2, -1}, 3);
  const Ball ball = enumerate_ball(3, 3);
  const auto op = build_matrix(alpha, ball);
  const auto perm = relabel_indices(ball, BranchRelabeling{{3, 1, 0, 2}, {2, 0, 1}});
  for (std::size_t i = 0; i < ball.size(); ++i) {
    for (std::size_t j = 0; j < ball.size(); ++j) CHECK(op.matrix()(perm[i], perm[j]) == op.matrix()(i, j));
  }
}

TEST_CASE("nonnegative symbols give positive semidefinite compressions") {
  const auto op = build_matrix(hat_polynomial_exact({0, 0, 1}, 2), enumerate_ball(2, 4));
  const auto eig = spectrum(op);
  CHECK(eig.front() >= -1e-12);
  CHECK(std::is_sorted(eig.begin(), eig.end()));
  CHECK(op.eigen().max_residual < 1e-10);
}

TEST_CASE("spectrum of T[t] lies in the support") {
  const double c = support_edge(2);
  double prev = 0;
  for (int R : {2, 4, 6}) {
    const auto op = build_matrix(hat_polynomial_exact({0, 1}, 2), enumerate_ball(2, R));
    const auto eig = spectrum(op);
    CHECK(eig.front() >= -c - 1e-8);
    CHECK(eig.back() <= c + 1e-8);
    const double norm = spectral_norm(op);
    CHECK(norm > prev);
    prev = norm;
  }
}

TEST_CASE("radial compression of T[t] is the Jacobi matrix") {
  // <T[t] f_m, f_n> = integral t P_n P_m / (||P_n|| ||P_m||): off-diagonal sqrt(kappa)/(kappa+1)
  const int kappa = 3, R = 4;
  const auto op = build_matrix(hat_polynomial_exact({0, 1}, kappa), enumerate_ball(kappa, R));
  const auto basis = make_radial_basis(op.ball());
  CHECK(basis.dim() == 5);
  const Eigen::MatrixXd q = basis.as_matrix();
  CHECK((q.transpose() * q).isApprox(Eigen::MatrixXd::Identity(5, 5), 1e-14));
  const auto c = radial_compress(op, basis);
  CHECK(c(0, 1) == Approx(1.0 / std::sqrt(kappa + 1.0)));
  for (int n = 1; n < R; ++n) CHECK(c(n, n + 1) == Approx(std::sqrt(double(kappa)) / (kappa + 1)));
  for (int n = 0; n <= R; ++n) CHECK(c(n, n) == Approx(0.0).scale(1.0));
  CHECK((c - q.transpose() * op.matrix() * q).norm() < 1e-12);
  const auto other = make_radial_basis(enumerate_ball(kappa, 2));
  CHECK_THROWS_AS(radial_compress(op, other), ValidationError);
}

TEST_CASE("norm estimates increase with the radius") {
  const auto est = operator_norm_estimate(RadialSymbol::delta(2, 1), 2, {0, 1, 2, 3, 5});
  CHECK(est[0] == 0.0);
  CHECK(est[1] == Approx(std::sqrt(3.0)));
  for (std::size_t i = 1; i < est.size(); ++i) CHECK(est[i] >= est[i - 1]);
  CHECK(est.back() < 2 * std::sqrt(2.0));
  CHECK_THROWS_AS(operator_norm_estimate(RadialSymbol::delta(2, 1), 2, {40}), BudgetError);
}

TEST_CASE("radial norm check on the path") {
  const auto alpha = RadialSymbol::exact(1, {1, 0, Rational(-1, 2)});
  const auto r = radial_norm_check(alpha, 1, 1);
  CHECK(r.full_norm == Approx(std::sqrt(2.5)).epsilon(1e-13));
  CHECK(r.radial_norm == Approx(std::sqrt(1.5)).epsilon(1e-13));
  CHECK(r.gap > 0.35);
  CHECK(r.tail_bound == 0.0);
  // general b: sqrt(2b^2 + 2b + 1) and sqrt(2b^2 + 1)
  for (int q = 1; q <= 4; ++q) {
    const double b = q / 5.0;
    const auto s = radial_norm_check(RadialSymbol::exact(1, {1, 0, -Rational(q, 5)}), 1, 1);
    CHECK(s.full_norm == Approx(std::sqrt(2 * b * b + 2 * b + 1)).epsilon(1e-13));
    CHECK(s.radial_norm == Approx(std::sqrt(2 * b * b + 1)).epsilon(1e-13));
  }
}

TEST_CASE("csv and metadata") {
  const auto op = build_matrix(RadialSymbol::delta(1, 1), enumerate_ball(1, 1));
  CHECK(matrix_to_csv(op.matrix()) == "0,1,1\n1,0,0\n1,0,0\n");
  const auto meta = metadata_json(op);
  CHECK(meta["kappa"] == 1);
  CHECK(meta["radius"] == 1);
  CHECK(meta["max_eigenvalue"].get<double>() == Approx(std::sqrt(2.0)));
}
