#pragma once

// Determinantal point processes P_K on a ball B_R with radial correlation
// kernel K = T[phi], 0 <= phi <= 1. The process is the restriction of the
// infinite-volume process to B_R, which is determinantal with the compressed
// kernel; its entries alpha(d(x, y)) carry no truncation error.

#include "cayley/quadrature.hpp"
#include "cayley/symbol.hpp"
#include "cayley/toeplitz.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cayley {

/// Sorted vertex indices of a point configuration inside the ball.
using Configuration = std::vector<std::size_t>;

struct KernelCertificate {
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  /// Largest excursion of the spectrum outside [0, 1].
  double violation = 0.0;
  /// violation <= 1e-9
  bool certified = false;
};

class DppKernel {
 public:
  /// Certification thresholds: within kTolerance the eigenvalues are clamped
  /// silently; beyond kRejectTolerance the kernel is rejected (NumericError).
  static constexpr double kTolerance = 1e-9;
  static constexpr double kRejectTolerance = 1e-6;

  /// Eigendecomposes and certifies 0 <= K <= 1.
  explicit DppKernel(TruncatedOperator op);

  const TruncatedOperator& op() const { return op_; }
  const Ball& ball() const { return op_.ball(); }
  const Eigen::MatrixXd& matrix() const { return op_.matrix(); }
  std::size_t size() const { return op_.dim(); }
  /// Eigenvalues clamped to [0, 1].
  const Eigen::VectorXd& eigenvalues() const { return clamped_; }
  const Eigen::MatrixXd& eigenvectors() const { return op_.eigen().vectors; }
  const KernelCertificate& certificate() const { return cert_; }

  /// E #xi = trace K = sum of eigenvalues.
  double expected_count() const { return clamped_.sum(); }

 private:
  TruncatedOperator op_;
  Eigen::VectorXd clamped_;
  KernelCertificate cert_;
};

/// Builds T[phi] on B_R(o) (exact transform for polynomial phi, quadrature
/// otherwise) and certifies it as a DPP kernel. Throws NumericError when phi
/// takes values outside [0, 1] or the spectrum leaves [-1e-6, 1 + 1e-6].
DppKernel validate_kernel(const SymbolFunction& phi, int kappa, int radius, const QuadratureRule& rule,
                          std::size_t vertex_budget = kDefaultVertexBudget);

enum class SamplerKind {
  /// Two-stage spectral construction: keep eigenvector i with probability
  /// lambda_i, then draw the projection process point by point, each time
  /// with probability proportional to the remaining diagonal, and project
  /// the chosen direction out.
  spectral,
  /// Vertex-by-vertex chain rule on K itself: decide vertex j with its
  /// conditional probability and update the Schur complement (blocked LDL).
  sequential,
};

struct SampleConfig {
  std::uint64_t seed = 0;
  std::size_t n_samples = 0;
  SamplerKind sampler = SamplerKind::spectral;
};

/// Diagonal entries below this are treated as zero during projection sampling.
inline constexpr double kDiagonalFloor = 1e-14;

/// Sample i uses RandomStream::child(seed, i); output is in sample order.
std::vector<Configuration> sample(const DppKernel& kernel, const SampleConfig& config);
Configuration sample_one(const DppKernel& kernel, std::uint64_t seed, std::uint64_t index, SamplerKind sampler);

/// det K restricted to Lambda; 1 for the empty set.
double inclusion_probability(const DppKernel& kernel, const Configuration& lambda);

struct CorrelationRow {
  Configuration lambda;
  double determinant = 0.0;
  double empirical = 0.0;
  double standard_error = 0.0;
  bool pass = false;
};

struct CorrelationReport {
  std::vector<CorrelationRow> rows;
  std::size_t n_samples = 0;
  double n_sigma = 4.0;
  /// Every determinant within [-1e-10, 1 + 1e-10].
  bool determinants_in_range = true;
  bool pass = false;

  std::string to_csv() const;
};

/// Compares the frequency of {xi contains Lambda} with det K_Lambda. A row
/// passes when |emp - det| <= n_sigma * sqrt(det (1 - det) / n); degenerate
/// rows (det in {0, 1}) must match to 1e-9. Requires at least `min_samples`
/// samples and |Lambda| <= 3.
CorrelationReport verify_correlations(const DppKernel& kernel, const std::vector<Configuration>& samples,
                                      const std::vector<Configuration>& lambdas, double n_sigma = 4.0,
                                      std::size_t min_samples = 10000);

/// Every singleton, then every pair {x, y} with x < y and 1 <= d(x, y) <= max_distance.
std::vector<Configuration> singletons_and_pairs(const Ball& ball, int max_distance);

struct CountStatistics {
  double mean = 0.0;
  double variance = 0.0;
  /// sum_{x in region, y in ball \ region} K(x, y)^2
  double boundary_energy = 0.0;
  /// sum_{x in region} (K(x, x) - sum_{y in ball} K(x, y)^2); zero when K is a
  /// projection on the ball. variance = boundary_energy + projection_defect.
  double projection_defect = 0.0;
  std::optional<double> empirical_mean;
  std::optional<double> empirical_variance;
};

/// Exact count moments of #(xi cap region):
///   mean = sum K(x, x),  variance = mean - sum_{x, y in region} K(x, y)^2.
CountStatistics count_statistics(const DppKernel& kernel, const Configuration& region);
/// Adds the sample mean and (unbiased) sample variance.
CountStatistics count_statistics(const DppKernel& kernel, const Configuration& region,
                                 const std::vector<Configuration>& samples);

/// Indices of B_r(o) inside a ball of radius >= r.
Configuration ball_region(const Ball& ball, int r);

struct RigidityRow {
  int radius = 0;         // kernel built on B_R
  int region_radius = 0;  // counts taken in B_{R-2}
  std::size_t region_size = 0;
  double mean = 0.0;
  double variance = 0.0;
};

/// For each R >= 2: variance of #(xi cap B_{R-2}) under T[1_J] built on B_R.
/// Exploratory; no rigidity claim is made from the numbers.
std::vector<RigidityRow> rigidity_probe(int kappa, double j_lo, double j_hi, const std::vector<int>& radii,
                                        const QuadratureRule& rule, std::size_t vertex_budget = kDefaultVertexBudget);

/// {"sample": i, "points": [...]} per line.
std::string samples_to_jsonl(const std::vector<Configuration>& samples);

}  // namespace cayley
