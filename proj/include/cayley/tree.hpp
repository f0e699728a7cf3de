#pragma once

// Cayley tree T_kappa: every vertex has kappa+1 neighbours. Vertices are
// addressed by words relative to a fixed root o: the first letter picks one of
// the kappa+1 root neighbours, every later letter one of the kappa forward
// children. The empty word is the root, and depth(v) = d(v, o).

#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <json.hpp>

namespace cayley {

inline constexpr std::size_t kDefaultVertexBudget = 100000;

struct Vertex {
  std::vector<int> word;

  int depth() const { return static_cast<int>(word.size()); }
  bool is_root() const { return word.empty(); }

  friend bool operator==(const Vertex&, const Vertex&) = default;
  /// Canonical order: depth first, then lexicographic on the word.
  friend std::strong_ordering operator<=>(const Vertex& a, const Vertex& b);
};

bool is_valid(const Vertex& v, int kappa);

/// d(u,v) = depth(u) + depth(v) - 2 * |longest common prefix|.
int distance(const Vertex& u, const Vertex& v);

/// 1 for l = 0, (kappa+1) kappa^(l-1) otherwise. Throws BudgetError when the
/// count does not fit in 64 bits.
std::uint64_t sphere_size(int kappa, int l);

/// 1 + sum_{l=1..radius} sphere_size(kappa, l), overflow-checked.
std::uint64_t ball_size(int kappa, int radius);

/// v_0 = root, v_{k+1} = v_k with branch 0 appended, so d(v_k, v_m) = |k - m|.
std::vector<Vertex> geodesic_ray(int kappa, int n);

/// All vertices of depth <= radius, in canonical order, with O(depth)
/// index lookup and distances through parent links.
class Ball {
 public:
  Ball(int kappa, int radius, std::vector<Vertex> vertices);

  int kappa() const { return kappa_; }
  int radius() const { return radius_; }
  std::size_t size() const { return vertices_.size(); }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const Vertex& operator[](std::size_t i) const { return vertices_[i]; }

  /// Index range [begin, end) of the sphere S_l(o) within the canonical order.
  std::size_t sphere_begin(int l) const { return offsets_[static_cast<std::size_t>(l)]; }
  std::size_t sphere_end(int l) const { return offsets_[static_cast<std::size_t>(l) + 1]; }

  int depth(std::size_t i) const { return depth_[i]; }
  /// Parent index, or -1 for the root.
  std::ptrdiff_t parent(std::size_t i) const { return parent_[i]; }

  /// Position of `v` in the canonical order. Throws ValidationError if `v` is
  /// not a valid word of depth <= radius.
  std::size_t index_of(const Vertex& v) const;

  /// Graph distance between the vertices at positions i and j.
  int distance(std::size_t i, std::size_t j) const;

  /// Row-major |B| x |B| table of pairwise distances.
  std::vector<int> distance_table() const;

 private:
  int kappa_;
  int radius_;
  std::vector<Vertex> vertices_;
  std::vector<std::size_t> offsets_;
  std::vector<int> depth_;
  std::vector<std::ptrdiff_t> parent_;
};

Ball enumerate_ball(int kappa, int radius, std::size_t vertex_budget = kDefaultVertexBudget);

/// A root-fixing automorphism that permutes the root's branches by
/// `root_perm` (size kappa+1) and every forward branch by `child_perm`
/// (size kappa).
struct BranchRelabeling {
  std::vector<int> root_perm;
  std::vector<int> child_perm;

  Vertex apply(const Vertex& v) const;
};

/// perm[i] = index in `ball` of the image of vertex i.
std::vector<std::size_t> relabel_indices(const Ball& ball, const BranchRelabeling& g);

nlohmann::json to_json(const Ball& ball);

}  // namespace cayley
