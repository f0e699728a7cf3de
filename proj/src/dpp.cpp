#include "cayley/dpp.hpp"

#include "cayley/error.hpp"
#include "cayley/random.hpp"
#include "cayley/transform.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace cayley {

DppKernel::DppKernel(TruncatedOperator op) : op_(std::move(op)) {
  const auto& values = op_.eigen().values;
  const auto n = values.size();
  cert_.min_eigenvalue = n ? values(0) : 0.0;
  cert_.max_eigenvalue = n ? values(n - 1) : 0.0;
  cert_.violation = std::max({0.0, -cert_.min_eigenvalue, cert_.max_eigenvalue - 1.0});
  cert_.certified = cert_.violation <= kTolerance;
  if (cert_.violation > kRejectTolerance) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "kernel is not a positive contraction: spectrum [%.3e, %.3e] leaves [0,1] by %.3e",
                  cert_.min_eigenvalue, cert_.max_eigenvalue, cert_.violation);
    throw NumericError(buf);
  }
  clamped_ = values.cwiseMax(0.0).cwiseMin(1.0);
}

DppKernel validate_kernel(const SymbolFunction& phi, int kappa, int radius, const QuadratureRule& rule,
                          std::size_t vertex_budget) {
  phi.validate_for(kappa);
  const auto [lo, hi] = phi.range(kappa);
  if (lo < -1e-12 || hi > 1.0 + 1e-12) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "symbol out of range: values span [%.6g, %.6g], need 0 <= phi <= 1", lo, hi);
    throw NumericError(buf);
  }
  auto ball = std::make_shared<const Ball>(enumerate_ball(kappa, radius, vertex_budget));
  return DppKernel(build_matrix(hat(phi, kappa, 2 * radius, rule), std::move(ball)));
}

namespace {

Configuration sample_spectral(const DppKernel& kernel, RandomStream& rng) {
  const auto& lambda = kernel.eigenvalues();
  const auto& vectors = kernel.eigenvectors();
  const Eigen::Index n = vectors.rows();

  std::vector<Eigen::Index> chosen;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (rng.uniform() < lambda(i)) chosen.push_back(i);
  }
  const auto k = static_cast<Eigen::Index>(chosen.size());
  Configuration points;
  if (k == 0) return points;

  Eigen::MatrixXd y(n, k);
  for (Eigen::Index j = 0; j < k; ++j) y.col(j) = vectors.col(chosen[static_cast<std::size_t>(j)]);

  // Residual diagonal of the projection after conditioning, and an
  // orthonormal basis (in R^k) of the directions already projected out.
  Eigen::VectorXd diag = y.rowwise().squaredNorm();
  Eigen::MatrixXd basis(k, k);
  Eigen::VectorXd q(k);
  Eigen::VectorXd s(n);
  for (Eigen::Index step = 0; step < k; ++step) {
    const double total = diag.sum();
    if (total < kDiagonalFloor) break;
    double u = rng.uniform() * total;
    Eigen::Index x = 0;
    Eigen::Index last_positive = -1;
    for (; x < n; ++x) {
      if (diag(x) <= 0.0) continue;
      last_positive = x;
      u -= diag(x);
      if (u < 0.0) break;
    }
    if (x == n) x = last_positive;  // rounding at the top end
    points.push_back(static_cast<std::size_t>(x));

    q = y.row(x).transpose();
    const double before = q.norm();
    if (step > 0) {
      q -= basis.leftCols(step) * (basis.leftCols(step).transpose() * q);
      // Second Gram-Schmidt pass only after heavy cancellation.
      if (q.norm() < 0.5 * before) q -= basis.leftCols(step) * (basis.leftCols(step).transpose() * q);
    }
    const double norm = q.norm();
    if (norm < std::sqrt(kDiagonalFloor)) break;
    q /= norm;
    basis.col(step) = q;
    s.noalias() = y * q;
    diag -= s.cwiseAbs2();
    diag = diag.cwiseMax(0.0);
    diag(x) = 0.0;
  }
  std::sort(points.begin(), points.end());
  return points;
}

Configuration sample_sequential(const DppKernel& kernel, RandomStream& rng) {
  Eigen::MatrixXd a = kernel.matrix();
  const Eigen::Index n = a.rows();
  constexpr Eigen::Index kBlock = 48;
  Configuration points;
  for (Eigen::Index j0 = 0; j0 < n; j0 += kBlock) {
    const Eigen::Index bs = std::min(kBlock, n - j0);
    const Eigen::Index end = j0 + bs;
    for (Eigen::Index c = j0; c < end; ++c) {
      const double p = a(c, c);
      const bool in = rng.uniform() < std::clamp(p, 0.0, 1.0);
      if (in) points.push_back(static_cast<std::size_t>(c));
      // Conditioning on c in xi keeps the pivot; on c not in xi the pivot is p - 1.
      double d = in ? p : p - 1.0;
      if (std::abs(d) < kDiagonalFloor) d = d < 0.0 ? -kDiagonalFloor : kDiagonalFloor;
      a(c, c) = d;
      const Eigen::Index below = n - c - 1;
      if (below == 0) continue;
      a.col(c).tail(below) /= d;
      const Eigen::Index panel = end - c - 1;
      if (panel > 0) {
        a.block(c + 1, c + 1, below, panel).noalias() -= (a.col(c).tail(below) * d) * a.col(c).segment(c + 1, panel).transpose();
      }
    }
    const Eigen::Index rest = n - end;
    if (rest > 0) {
      const Eigen::MatrixXd l21 = a.block(end, j0, rest, bs);
      const Eigen::MatrixXd w = l21 * a.diagonal().segment(j0, bs).asDiagonal();
      a.block(end, end, rest, rest).triangularView<Eigen::Lower>() -= w * l21.transpose();
    }
  }
  return points;
}

}  // namespace

Configuration sample_one(const DppKernel& kernel, std::uint64_t seed, std::uint64_t index, SamplerKind sampler) {
  auto rng = RandomStream::child(seed, index);
  return sampler == SamplerKind::spectral ? sample_spectral(kernel, rng) : sample_sequential(kernel, rng);
}

std::vector<Configuration> sample(const DppKernel& kernel, const SampleConfig& config) {
  std::vector<Configuration> out;
  out.reserve(config.n_samples);
  for (std::size_t i = 0; i < config.n_samples; ++i) out.push_back(sample_one(kernel, config.seed, i, config.sampler));
  return out;
}

double inclusion_probability(const DppKernel& kernel, const Configuration& lambda) {
  if (lambda.empty()) return 1.0;
  const auto m = static_cast<Eigen::Index>(lambda.size());
  Eigen::MatrixXd minor(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto xi = lambda[static_cast<std::size_t>(i)];
      const auto xj = lambda[static_cast<std::size_t>(j)];
      if (xi >= kernel.size() || xj >= kernel.size()) throw ValidationError("configuration index outside the ball");
      minor(i, j) = kernel.matrix()(static_cast<Eigen::Index>(xi), static_cast<Eigen::Index>(xj));
    }
  }
  return minor.determinant();
}

CorrelationReport verify_correlations(const DppKernel& kernel, const std::vector<Configuration>& samples,
                                      const std::vector<Configuration>& lambdas, double n_sigma,
                                      std::size_t min_samples) {
  if (samples.size() < min_samples) {
    throw ValidationError("correlation check needs at least " + std::to_string(min_samples) + " samples, got " +
                          std::to_string(samples.size()));
  }
  for (const auto& l : lambdas) {
    if (l.size() > 3) throw ValidationError("correlation check supports |Lambda| <= 3");
  }
  const std::size_t n = kernel.size();
  std::vector<std::size_t> hits(lambdas.size(), 0);
  std::vector<char> present(n, 0);
  for (const auto& s : samples) {
    for (auto x : s) present[x] = 1;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      bool all = true;
      for (auto x : lambdas[i]) all = all && x < n && present[x];
      hits[i] += all ? 1 : 0;
    }
    for (auto x : s) present[x] = 0;
  }

  CorrelationReport report;
  report.n_samples = samples.size();
  report.n_sigma = n_sigma;
  report.pass = true;
  const double count = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    CorrelationRow row;
    row.lambda = lambdas[i];
    row.determinant = inclusion_probability(kernel, lambdas[i]);
    row.empirical = static_cast<double>(hits[i]) / count;
    const double p = std::clamp(row.determinant, 0.0, 1.0);
    row.standard_error = std::sqrt(p * (1.0 - p) / count);
    const double allowed = std::max(n_sigma * row.standard_error, 1e-9);
    row.pass = std::abs(row.empirical - row.determinant) <= allowed;
    if (row.determinant < -1e-10 || row.determinant > 1.0 + 1e-10) report.determinants_in_range = false;
    report.pass = report.pass && row.pass;
    report.rows.push_back(std::move(row));
  }
  report.pass = report.pass && report.determinants_in_range;
  return report;
}

std::string CorrelationReport::to_csv() const {
  std::string out = "lambda,determinant,empirical,standard_error,z,pass\n";
  char buf[160];
  for (const auto& r : rows) {
    std::string lam;
    for (std::size_t i = 0; i < r.lambda.size(); ++i) lam += (i ? " " : "") + std::to_string(r.lambda[i]);
    const double z = r.standard_error > 0 ? (r.empirical - r.determinant) / r.standard_error : 0.0;
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g,%.6f,%s\n", r.determinant, r.empirical, r.standard_error, z,
                  r.pass ? "PASS" : "FAIL");
    out += lam;
    out += buf;
  }
  return out;
}

std::vector<Configuration> singletons_and_pairs(const Ball& ball, int max_distance) {
  std::vector<Configuration> out;
  for (std::size_t x = 0; x < ball.size(); ++x) out.push_back({x});
  for (std::size_t x = 0; x < ball.size(); ++x) {
    for (std::size_t y = x + 1; y < ball.size(); ++y) {
      const int d = ball.distance(x, y);
      if (d >= 1 && d <= max_distance) out.push_back({x, y});
    }
  }
  return out;
}

CountStatistics count_statistics(const DppKernel& kernel, const Configuration& region) {
  const auto& k = kernel.matrix();
  const std::size_t n = kernel.size();
  std::vector<char> inside(n, 0);
  for (auto x : region) {
    if (x >= n) throw ValidationError("region index outside the ball");
    if (inside[x]) throw ValidationError("region has duplicate vertices");
    inside[x] = 1;
  }
  CountStatistics st;
  double inner = 0.0;
  for (auto x : region) {
    const auto xi = static_cast<Eigen::Index>(x);
    st.mean += k(xi, xi);
    double row = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      const double v = k(xi, static_cast<Eigen::Index>(y));
      row += v * v;
      if (inside[y]) inner += v * v;
      else st.boundary_energy += v * v;
    }
    st.projection_defect += k(xi, xi) - row;
  }
  st.variance = st.mean - inner;
  return st;
}

CountStatistics count_statistics(const DppKernel& kernel, const Configuration& region,
                                 const std::vector<Configuration>& samples) {
  auto st = count_statistics(kernel, region);
  if (samples.empty()) return st;
  std::vector<char> inside(kernel.size(), 0);
  for (auto x : region) inside[x] = 1;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& s : samples) {
    double c = 0.0;
    for (auto x : s) c += inside[x] ? 1.0 : 0.0;
    sum += c;
    sum_sq += c * c;
  }
  const double m = static_cast<double>(samples.size());
  st.empirical_mean = sum / m;
  st.empirical_variance = m > 1 ? (sum_sq - sum * sum / m) / (m - 1.0) : 0.0;
  return st;
}

Configuration ball_region(const Ball& ball, int r) {
  if (r < 0 || r > ball.radius()) throw ValidationError("region radius outside the ball");
  Configuration region(ball.sphere_end(r));
  for (std::size_t i = 0; i < region.size(); ++i) region[i] = i;
  return region;
}

std::vector<RigidityRow> rigidity_probe(int kappa, double j_lo, double j_hi, const std::vector<int>& radii,
                                        const QuadratureRule& rule, std::size_t vertex_budget) {
  const auto phi = SymbolFunction::indicator(j_lo, j_hi);
  std::vector<RigidityRow> rows;
  for (int r : radii) {
    if (r < 2) throw ValidationError("rigidity probe needs R >= 2");
    const auto kernel = validate_kernel(phi, kappa, r, rule, vertex_budget);
    const auto region = ball_region(kernel.ball(), r - 2);
    const auto st = count_statistics(kernel, region);
    rows.push_back({r, r - 2, region.size(), st.mean, st.variance});
  }
  return rows;
}

std::string samples_to_jsonl(const std::vector<Configuration>& samples) {
  std::string out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out += nlohmann::json{{"sample", i}, {"points", samples[i]}}.dump();
    out += '\n';
  }
  return out;
}

}  // namespace cayley
