#include "cayley/tree.hpp"

#include "cayley/error.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace cayley {

std::strong_ordering operator<=>(const Vertex& a, const Vertex& b) {
  if (auto c = a.word.size() <=> b.word.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(a.word.begin(), a.word.end(), b.word.begin(), b.word.end());
}

bool is_valid(const Vertex& v, int kappa) {
  for (std::size_t i = 0; i < v.word.size(); ++i) {
    const int limit = i == 0 ? kappa + 1 : kappa;
    if (v.word[i] < 0 || v.word[i] >= limit) return false;
  }
  return true;
}

int distance(const Vertex& u, const Vertex& v) {
  const auto [iu, iv] = std::mismatch(u.word.begin(), u.word.end(), v.word.begin(), v.word.end());
  const auto common = static_cast<int>(iu - u.word.begin());
  return u.depth() + v.depth() - 2 * common;
}

std::uint64_t sphere_size(int kappa, int l) {
  if (kappa < 1) throw ValidationError("kappa must be >= 1, got " + std::to_string(kappa));
  if (l < 0) throw ValidationError("sphere radius must be >= 0, got " + std::to_string(l));
  if (l == 0) return 1;
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  const auto k = static_cast<std::uint64_t>(kappa);
  std::uint64_t count = k + 1;
  for (int i = 1; i < l; ++i) {
    if (count > kMax / k) throw BudgetError("sphere size overflows 64 bits at l=" + std::to_string(l));
    count *= k;
  }
  return count;
}

std::uint64_t ball_size(int kappa, int radius) {
  if (radius < 0) throw ValidationError("radius must be >= 0, got " + std::to_string(radius));
  std::uint64_t total = 0;
  for (int l = 0; l <= radius; ++l) {
    const auto s = sphere_size(kappa, l);
    if (total > std::numeric_limits<std::uint64_t>::max() - s) throw BudgetError("ball size overflows 64 bits");
    total += s;
  }
  return total;
}

std::vector<Vertex> geodesic_ray(int kappa, int n) {
  if (kappa < 1) throw ValidationError("kappa must be >= 1");
  if (n < 0) throw ValidationError("ray length must be >= 0");
  std::vector<Vertex> ray;
  ray.reserve(static_cast<std::size_t>(n) + 1);
  Vertex v;
  ray.push_back(v);
  for (int k = 1; k <= n; ++k) {
    v.word.push_back(0);
    ray.push_back(v);
  }
  return ray;
}

Ball::Ball(int kappa, int radius, std::vector<Vertex> vertices)
    : kappa_(kappa), radius_(radius), vertices_(std::move(vertices)) {
  offsets_.assign(static_cast<std::size_t>(radius_) + 2, 0);
  depth_.resize(vertices_.size());
  parent_.resize(vertices_.size());
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    depth_[i] = vertices_[i].depth();
    offsets_[static_cast<std::size_t>(depth_[i]) + 1] = i + 1;
  }
  for (std::size_t l = 1; l < offsets_.size(); ++l) offsets_[l] = std::max(offsets_[l], offsets_[l - 1]);
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (depth_[i] == 0) {
      parent_[i] = -1;
    } else {
      Vertex p{std::vector<int>(vertices_[i].word.begin(), vertices_[i].word.end() - 1)};
      parent_[i] = static_cast<std::ptrdiff_t>(index_of(p));
    }
  }
}

std::size_t Ball::index_of(const Vertex& v) const {
  if (v.depth() > radius_ || !is_valid(v, kappa_)) {
    throw ValidationError("vertex not in ball (kappa=" + std::to_string(kappa_) + ", radius=" + std::to_string(radius_) + ")");
  }
  if (v.is_root()) return 0;
  // Mixed radix: (kappa+1) choices for the first letter, kappa for the rest.
  std::size_t pos = static_cast<std::size_t>(v.word[0]);
  for (std::size_t i = 1; i < v.word.size(); ++i) pos = pos * static_cast<std::size_t>(kappa_) + static_cast<std::size_t>(v.word[i]);
  return offsets_[static_cast<std::size_t>(v.depth())] + pos;
}

int Ball::distance(std::size_t i, std::size_t j) const {
  int d = 0;
  auto a = static_cast<std::ptrdiff_t>(i);
  auto b = static_cast<std::ptrdiff_t>(j);
  while (depth_[static_cast<std::size_t>(a)] > depth_[static_cast<std::size_t>(b)]) {
    a = parent_[static_cast<std::size_t>(a)];
    ++d;
  }
  while (depth_[static_cast<std::size_t>(b)] > depth_[static_cast<std::size_t>(a)]) {
    b = parent_[static_cast<std::size_t>(b)];
    ++d;
  }
  while (a != b) {
    a = parent_[static_cast<std::size_t>(a)];
    b = parent_[static_cast<std::size_t>(b)];
    d += 2;
  }
  return d;
}

std::vector<int> Ball::distance_table() const {
  const std::size_t n = size();
  std::vector<int> table(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const int d = distance(i, j);
      table[i * n + j] = d;
      table[j * n + i] = d;
    }
  }
  return table;
}

Ball enumerate_ball(int kappa, int radius, std::size_t vertex_budget) {
  if (kappa < 1) throw ValidationError("kappa must be >= 1, got " + std::to_string(kappa));
  if (radius < 0) throw ValidationError("radius must be >= 0, got " + std::to_string(radius));
  const auto total = ball_size(kappa, radius);
  if (total > vertex_budget) {
    throw BudgetError("ball too large: " + std::to_string(total) + " vertices for kappa=" + std::to_string(kappa) +
                      ", radius=" + std::to_string(radius) + " exceeds budget " + std::to_string(vertex_budget));
  }
  std::vector<Vertex> vertices;
  vertices.reserve(static_cast<std::size_t>(total));
  vertices.push_back(Vertex{});
  std::size_t level_begin = 0;
  for (int l = 0; l < radius; ++l) {
    const std::size_t level_end = vertices.size();
    const int branches = l == 0 ? kappa + 1 : kappa;
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (int b = 0; b < branches; ++b) {
        Vertex child = vertices[i];
        child.word.push_back(b);
        vertices.push_back(std::move(child));
      }
    }
    level_begin = level_end;
  }
  return Ball(kappa, radius, std::move(vertices));
}

Vertex BranchRelabeling::apply(const Vertex& v) const {
  Vertex out = v;
  for (std::size_t i = 0; i < out.word.size(); ++i) {
    const auto& perm = i == 0 ? root_perm : child_perm;
    out.word[i] = perm.at(static_cast<std::size_t>(out.word[i]));
  }
  return out;
}

std::vector<std::size_t> relabel_indices(const Ball& ball, const BranchRelabeling& g) {
  auto check = [](const std::vector<int>& perm, int n, const char* what) {
    std::vector<int> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> iota(static_cast<std::size_t>(n));
    std::iota(iota.begin(), iota.end(), 0);
    if (sorted != iota) throw ValidationError(std::string(what) + " is not a permutation of 0.." + std::to_string(n - 1));
  };
  check(g.root_perm, ball.kappa() + 1, "root_perm");
  check(g.child_perm, ball.kappa(), "child_perm");
  std::vector<std::size_t> perm(ball.size());
  for (std::size_t i = 0; i < ball.size(); ++i) perm[i] = ball.index_of(g.apply(ball[i]));
  return perm;
}

nlohmann::json to_json(const Ball& ball) {
  nlohmann::json vertices = nlohmann::json::array();
  for (const auto& v : ball.vertices()) vertices.push_back(v.word);
  return {{"kappa", ball.kappa()}, {"radius", ball.radius()}, {"vertices", std::move(vertices)}};
}

}  // namespace cayley
