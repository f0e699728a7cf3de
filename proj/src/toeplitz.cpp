#include "cayley/toeplitz.hpp"

#include "cayley/error.hpp"
#include "cayley/transform.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace cayley {

TruncatedOperator::TruncatedOperator(std::shared_ptr<const Ball> ball, RadialSymbol symbol, Eigen::MatrixXd matrix)
    : ball_(std::move(ball)), symbol_(std::move(symbol)), matrix_(std::move(matrix)), cache_(std::make_shared<Cache>()) {
  if (static_cast<std::size_t>(matrix_.rows()) != ball_->size() || matrix_.rows() != matrix_.cols()) {
    throw ValidationError("operator matrix does not match its ball");
  }
}

const Eigenpairs& TruncatedOperator::eigen() const {
  std::call_once(cache_->once, [this] {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix_);
    if (solver.info() != Eigen::Success) throw NumericError("symmetric eigendecomposition failed");
    Eigenpairs p;
    p.values = solver.eigenvalues();
    p.vectors = solver.eigenvectors();
    const Eigen::MatrixXd r = matrix_ * p.vectors - p.vectors * p.values.asDiagonal();
    p.max_residual = r.colwise().norm().maxCoeff();
    const double scale = std::max(1.0, p.values.cwiseAbs().maxCoeff());
    if (p.max_residual > 1e-8 * scale) {
      throw NumericError("eigen residual " + std::to_string(p.max_residual) + " exceeds 1e-8 ||M||");
    }
    cache_->pairs = std::move(p);
  });
  return *cache_->pairs;
}

TruncatedOperator build_matrix(const RadialSymbol& alpha, const Ball& ball) {
  return build_matrix(alpha, std::make_shared<const Ball>(ball));
}

TruncatedOperator build_matrix(const RadialSymbol& alpha, std::shared_ptr<const Ball> ball) {
  if (alpha.kappa() != ball->kappa()) throw ValidationError("symbol and ball have different kappa");
  const int diameter = 2 * ball->radius();
  if (!alpha.is_exact() && alpha.n_max() < diameter) {
    throw ValidationError("numeric symbol known up to n=" + std::to_string(alpha.n_max()) +
                          " but the ball needs n=" + std::to_string(diameter));
  }
  const auto n = static_cast<Eigen::Index>(ball->size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    m(j, j) = alpha(0);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = alpha(static_cast<std::size_t>(ball->distance(static_cast<std::size_t>(i), static_cast<std::size_t>(j))));
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return TruncatedOperator(std::move(ball), alpha, std::move(m));
}

Eigen::MatrixXd RadialBasis::as_matrix() const {
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(offsets.back()), static_cast<Eigen::Index>(dim()));
  for (std::size_t k = 0; k < dim(); ++k) {
    const double v = 1.0 / std::sqrt(static_cast<double>(offsets[k + 1] - offsets[k]));
    for (std::size_t i = offsets[k]; i < offsets[k + 1]; ++i) f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = v;
  }
  return f;
}

RadialBasis make_radial_basis(const Ball& ball) {
  RadialBasis b;
  b.kappa = ball.kappa();
  b.radius = ball.radius();
  for (int l = 0; l <= ball.radius(); ++l) b.offsets.push_back(ball.sphere_begin(l));
  b.offsets.push_back(ball.size());
  return b;
}

Eigen::MatrixXd radial_compress(const Eigen::MatrixXd& m, const RadialBasis& basis) {
  if (static_cast<std::size_t>(m.rows()) != basis.offsets.back() || m.rows() != m.cols()) {
    throw ValidationError("matrix and radial basis dimensions differ");
  }
  const auto d = static_cast<Eigen::Index>(basis.dim());
  Eigen::MatrixXd c(d, d);
  for (Eigen::Index n = 0; n < d; ++n) {
    const auto rn = static_cast<Eigen::Index>(basis.offsets[static_cast<std::size_t>(n)]);
    const auto sn = static_cast<Eigen::Index>(basis.offsets[static_cast<std::size_t>(n) + 1]) - rn;
    for (Eigen::Index k = 0; k < d; ++k) {
      const auto rk = static_cast<Eigen::Index>(basis.offsets[static_cast<std::size_t>(k)]);
      const auto sk = static_cast<Eigen::Index>(basis.offsets[static_cast<std::size_t>(k) + 1]) - rk;
      c(n, k) = m.block(rn, rk, sn, sk).sum() / std::sqrt(static_cast<double>(sn) * static_cast<double>(sk));
    }
  }
  return c;
}

Eigen::MatrixXd radial_compress(const TruncatedOperator& op, const RadialBasis& basis) {
  if (basis.kappa != op.ball().kappa() || basis.radius != op.ball().radius()) {
    throw ValidationError("radial basis was built for a different ball");
  }
  return radial_compress(op.matrix(), basis);
}

std::vector<double> spectrum(const TruncatedOperator& op) {
  const auto& v = op.eigen().values;
  return {v.data(), v.data() + v.size()};
}

double spectral_norm(const TruncatedOperator& op) {
  const auto& v = op.eigen().values;
  return v.size() == 0 ? 0.0 : std::max(std::abs(v(0)), std::abs(v(v.size() - 1)));
}

std::vector<double> operator_norm_estimate(const RadialSymbol& alpha, int kappa, const std::vector<int>& radii,
                                           std::size_t vertex_budget) {
  if (alpha.kappa() != kappa) throw ValidationError("symbol kappa does not match");
  std::vector<double> out;
  out.reserve(radii.size());
  for (int r : radii) out.push_back(spectral_norm(build_matrix(alpha, enumerate_ball(kappa, r, vertex_budget))));
  return out;
}

RadialNormCheck radial_norm_check(const RadialSymbol& alpha, int kappa, int radius, std::size_t vertex_budget) {
  if (alpha.kappa() != kappa) throw ValidationError("symbol kappa does not match");
  auto ball = std::make_shared<const Ball>(enumerate_ball(kappa, radius, vertex_budget));
  const auto square = convolve(alpha, alpha);
  const auto gram = build_matrix(square.symbol, ball);

  RadialNormCheck out;
  out.tail_bound = square.tail_bound;
  out.full_norm = std::sqrt(std::max(0.0, gram.eigen().values.maxCoeff()));
  const Eigen::MatrixXd radial = radial_compress(gram, make_radial_basis(*ball));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(radial, Eigen::EigenvaluesOnly);
  out.radial_norm = std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
  out.gap = out.full_norm - out.radial_norm;
  out.truncation_norm = spectral_norm(build_matrix(alpha, ball));
  return out;
}

std::string matrix_to_csv(const Eigen::MatrixXd& m) {
  std::string out;
  char buf[32];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      if (j) out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

nlohmann::json metadata_json(const TruncatedOperator& op) {
  const auto& v = op.eigen().values;
  return {{"kappa", op.ball().kappa()},
          {"radius", op.ball().radius()},
          {"dimension", op.dim()},
          {"symbol", to_json(op.symbol())},
          {"min_eigenvalue", v.size() ? v(0) : 0.0},
          {"max_eigenvalue", v.size() ? v(v.size() - 1) : 0.0}};
}

}  // namespace cayley
