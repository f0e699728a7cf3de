#pragma once

// Radial Toeplitz operators T_alpha(x, y) = alpha(d(x, y)) materialised on a
// finite ball B_R(o). The finite matrix is the compression P_B T P_B of the
// infinite operator: entries are exact, only the spectrum feels the boundary.

#include "cayley/symbol.hpp"
#include "cayley/tree.hpp"

#include <Eigen/Dense>

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include <json.hpp>

namespace cayley {

struct Eigenpairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, orthonormal
  /// max_i ||M v_i - lambda_i v_i||
  double max_residual = 0.0;
};

/// Dense symmetric matrix of T_alpha on a ball, in canonical vertex order.
/// Immutable; the eigendecomposition is computed on first request and cached.
class TruncatedOperator {
 public:
  TruncatedOperator(std::shared_ptr<const Ball> ball, RadialSymbol symbol, Eigen::MatrixXd matrix);

  const Ball& ball() const { return *ball_; }
  std::shared_ptr<const Ball> shared_ball() const { return ball_; }
  const RadialSymbol& symbol() const { return symbol_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

  /// Throws NumericError if the residual exceeds 1e-8 ||M||.
  const Eigenpairs& eigen() const;

 private:
  struct Cache {
    std::once_flag once;
    std::optional<Eigenpairs> pairs;
  };
  std::shared_ptr<const Ball> ball_;
  RadialSymbol symbol_;
  Eigen::MatrixXd matrix_;
  std::shared_ptr<Cache> cache_;
};

/// Throws ValidationError when a numeric alpha does not reach 2 * radius.
TruncatedOperator build_matrix(const RadialSymbol& alpha, const Ball& ball);
TruncatedOperator build_matrix(const RadialSymbol& alpha, std::shared_ptr<const Ball> ball);

/// f_n = 1_{S_n(o)} / sqrt(#S_n(o)), n = 0..R, over a ball. Spheres are
/// contiguous in canonical order, so the basis is stored as index ranges.
struct RadialBasis {
  int kappa = 1;
  int radius = 0;
  std::vector<std::size_t> offsets;  // sphere n is [offsets[n], offsets[n+1])

  std::size_t dim() const { return offsets.size() - 1; }
  /// |B| x (R+1) matrix with the f_n as columns.
  Eigen::MatrixXd as_matrix() const;
};

RadialBasis make_radial_basis(const Ball& ball);

/// C[n][m] = <M f_m, f_n> for any |B| x |B| matrix M.
Eigen::MatrixXd radial_compress(const Eigen::MatrixXd& m, const RadialBasis& basis);
/// Throws ValidationError when the basis belongs to another ball.
Eigen::MatrixXd radial_compress(const TruncatedOperator& op, const RadialBasis& basis);

/// Eigenvalues ascending; residual-certified.
std::vector<double> spectrum(const TruncatedOperator& op);

/// max |lambda| of the truncated matrix.
double spectral_norm(const TruncatedOperator& op);

/// ||P_{B_R} T_alpha P_{B_R}|| for each R. Nested compressions, so the
/// sequence is nondecreasing and tends to ||T_alpha|| from below.
std::vector<double> operator_norm_estimate(const RadialSymbol& alpha, int kappa, const std::vector<int>& radii,
                                           std::size_t vertex_budget = kDefaultVertexBudget);

struct RadialNormCheck {
  /// sup over eta supported in B_R of ||T_alpha eta|| / ||eta||, the image
  /// measured in l^2 of the whole tree.
  double full_norm = 0.0;
  /// The same supremum over radial eta only.
  double radial_norm = 0.0;
  double gap = 0.0;
  /// ||P_B T_alpha P_B|| for reference.
  double truncation_norm = 0.0;
  /// Truncation bound inherited from alpha (*) alpha for numeric symbols.
  double tail_bound = 0.0;
};

/// Uses (T_alpha^2)(x, y) = (alpha (*) alpha)(d(x, y)), so the full norm is
/// sqrt(lambda_max) of that kernel on B_R and the radial norm is sqrt of the
/// top eigenvalue of its radial compression.
RadialNormCheck radial_norm_check(const RadialSymbol& alpha, int kappa, int radius,
                                  std::size_t vertex_budget = kDefaultVertexBudget);

/// Dense CSV, one row per line, full precision.
std::string matrix_to_csv(const Eigen::MatrixXd& m);

/// { kappa, radius, symbol, min_eigenvalue, max_eigenvalue }
nlohmann::json metadata_json(const TruncatedOperator& op);

}  // namespace cayley
