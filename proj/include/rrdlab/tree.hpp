#pragma once

// Combinatorics of a rooted d-regular tree in path coordinates: distances, Gromov products,
// Busemann values, boundary cylinders and their measures, and ball counts in a product of two
// such trees.

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "rrdlab/algebraic.hpp"
#include "rrdlab/error.hpp"

namespace rrdlab {

/// Vertex of the d-regular tree rooted at the base point, addressed by its path from the
/// root. The first label is in [0, d), later ones in [0, d - 1).
class TreeVertex {
 public:
  explicit TreeVertex(int degree) : degree_(degree) {
    if (degree < 3) throw Error(Errc::degree_too_small, "tree degree must be >= 3, got " + std::to_string(degree));
  }
  TreeVertex(int degree, std::vector<int> path) : TreeVertex(degree) {
    for (std::size_t i = 0; i < path.size(); ++i) {
      const int bound = i == 0 ? degree : degree - 1;
      if (path[i] < 0 || path[i] >= bound) throw Error(Errc::invalid_argument, "edge label out of range at position " + std::to_string(i));
    }
    path_ = std::move(path);
  }

  int degree() const noexcept { return degree_; }
  int depth() const noexcept { return static_cast<int>(path_.size()); }
  const std::vector<int>& path() const noexcept { return path_; }
  bool is_root() const noexcept { return path_.empty(); }

  /// Number of children: d at the root, d - 1 elsewhere.
  int child_count() const noexcept { return is_root() ? degree_ : degree_ - 1; }
  TreeVertex child(int label) const {
    TreeVertex r = *this;
    r.path_.push_back(label);
    if (label < 0 || label >= child_count()) throw Error(Errc::invalid_argument, "child label out of range");
    return r;
  }
  TreeVertex parent() const {
    if (is_root()) throw Error(Errc::invalid_argument, "root has no parent");
    TreeVertex r = *this;
    r.path_.pop_back();
    return r;
  }
  /// Ancestor at the given depth (a prefix of the path).
  TreeVertex prefix(int k) const {
    TreeVertex r(degree_);
    r.path_.assign(path_.begin(), path_.begin() + std::clamp(k, 0, depth()));
    return r;
  }
  /// All d neighbours: the parent (if any) first, then children in label order.
  std::vector<TreeVertex> neighbors() const {
    std::vector<TreeVertex> out;
    if (!is_root()) out.push_back(parent());
    for (int l = 0; l < child_count(); ++l) out.push_back(child(l));
    return out;
  }

  bool is_prefix_of(const TreeVertex& other) const {
    return depth() <= other.depth() && std::equal(path_.begin(), path_.end(), other.path_.begin());
  }

  /// Slash-joined label path; the root is the empty string.
  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < path_.size(); ++i) {
      if (i) s += '/';
      s += std::to_string(path_[i]);
    }
    return s;
  }
  static TreeVertex parse(int degree, const std::string& s) {
    std::vector<int> path;
    std::size_t start = 0;
    while (start < s.size()) {
      auto slash = s.find('/', start);
      if (slash == std::string::npos) slash = s.size();
      const std::string tok = s.substr(start, slash - start);
      if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) throw Error(Errc::parse_error, "bad vertex path '" + s + "'");
      path.push_back(std::stoi(tok));
      start = slash + 1;
    }
    return {degree, std::move(path)};
  }

  friend bool operator==(const TreeVertex& a, const TreeVertex& b) { return a.degree_ == b.degree_ && a.path_ == b.path_; }
  friend bool operator<(const TreeVertex& a, const TreeVertex& b) { return a.path_ < b.path_; }

 private:
  int degree_;
  std::vector<int> path_;
};

inline void check_degree(const TreeVertex& u, const TreeVertex& v) {
  if (u.degree() != v.degree()) throw Error(Errc::invalid_argument, "vertices from trees of different degree");
}

inline int common_prefix_length(const TreeVertex& u, const TreeVertex& v) {
  const auto& a = u.path();
  const auto& b = v.path();
  const auto n = std::min(a.size(), b.size());
  std::size_t k = 0;
  while (k < n && a[k] == b[k]) ++k;
  return static_cast<int>(k);
}

inline int tree_distance(const TreeVertex& u, const TreeVertex& v) {
  check_degree(u, v);
  return u.depth() + v.depth() - 2 * common_prefix_length(u, v);
}

/// (u | v) based at the root.
inline int gromov_product(const TreeVertex& u, const TreeVertex& v) {
  check_degree(u, v);
  return common_prefix_length(u, v);
}

/// Cylinder O_y: ends whose ray from the root passes through y. The root as base stands for
/// the whole boundary.
class BoundaryCylinder {
 public:
  explicit BoundaryCylinder(TreeVertex base) : base_(std::move(base)) {}
  static BoundaryCylinder whole(int degree) { return BoundaryCylinder(TreeVertex(degree)); }

  const TreeVertex& base() const noexcept { return base_; }
  int depth() const noexcept { return base_.depth(); }
  int degree() const noexcept { return base_.degree(); }
  bool is_whole() const noexcept { return base_.is_root(); }
  bool contains(const BoundaryCylinder& finer) const { return base_.is_prefix_of(finer.base_); }

  friend bool operator==(const BoundaryCylinder& a, const BoundaryCylinder& b) { return a.base_ == b.base_; }
  friend bool operator<(const BoundaryCylinder& a, const BoundaryCylinder& b) { return a.base_ < b.base_; }

 private:
  TreeVertex base_;
};

struct ProductCylinder {
  BoundaryCylinder zero;
  BoundaryCylinder infinity;
};

/// Number of vertices at distance k from the root: d(d-1)^(k-1), or 1 at k = 0.
inline std::int64_t sphere_size(int degree, int k) {
  if (k == 0) return 1;
  std::int64_t s = degree;
  for (int i = 1; i < k; ++i) s *= degree - 1;
  return s;
}

/// Number of depth-k cylinders; they partition the boundary.
inline std::int64_t cylinder_count(int degree, int k) { return sphere_size(degree, k); }

/// Position of a depth-k vertex in lexicographic path order (mixed radix d, d-1, ..., d-1).
inline std::int64_t vertex_index(const TreeVertex& v) {
  std::int64_t idx = 0;
  for (int i = 0; i < v.depth(); ++i) idx = idx * (i == 0 ? v.degree() : v.degree() - 1) + v.path()[i];
  return idx;
}

inline TreeVertex vertex_at(int degree, int depth, std::int64_t index) {
  std::vector<int> path(depth);
  for (int i = depth - 1; i >= 0; --i) {
    const int radix = i == 0 ? degree : degree - 1;
    path[i] = static_cast<int>(index % radix);
    index /= radix;
  }
  return {degree, std::move(path)};
}

/// All vertices at distance k from the root, in index order.
inline std::vector<TreeVertex> sphere_vertices(int degree, int k) {
  std::vector<TreeVertex> out;
  const auto n = sphere_size(degree, k);
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) out.push_back(vertex_at(degree, k, i));
  return out;
}

inline Rational cylinder_measure(const BoundaryCylinder& b) { return Rational(1) / Rational(cylinder_count(b.degree(), b.depth())); }

/// The Busemann value beta_xi(root, w), constant over xi in O_b. Constancy holds exactly when
/// base(b) is not a proper ancestor of w; otherwise the call is refused.
inline int busemann(const BoundaryCylinder& b, const TreeVertex& w) {
  check_degree(b.base(), w);
  if (b.base().depth() < w.depth() && b.base().is_prefix_of(w))
    throw Error(Errc::depth_too_small, "cylinder '" + b.base().str() + "' does not resolve vertex '" + w.str() + "'");
  return 2 * gromov_product(w, b.base()) - w.depth();
}

/// |{(x, y) : d_0(root, x) + d_inf(root, y) <= n}| for two d-regular trees, from the closed
/// form (An + B)(d-1)^n + C with A = d^2/((d-2)(d-1)), B = d(d-4)/(d-2)^2, C = 1 - B.
inline BigInt ball_count_formula(int degree, int n) {
  if (degree < 3) throw Error(Errc::degree_too_small, "ball count formula needs d >= 3");
  if (n < 0) throw Error(Errc::invalid_argument, "negative radius");
  const Rational d = degree;
  const Rational A = d * d / ((d - 2) * (d - 1));
  const Rational B = d * (d - 4) / ((d - 2) * (d - 2));
  const Rational C = 1 - B;
  BigInt pw = 1;
  for (int i = 0; i < n; ++i) pw *= degree - 1;
  const Rational value = (A * n + B) * Rational(pw) + C;
  if (boost::multiprecision::denominator(value) != 1) throw Error(Errc::invalid_argument, "ball count formula produced a non-integer");
  return boost::multiprecision::numerator(value);
}

/// Exhaustive version of the ball count: breadth-first enumeration of one tree up to radius n
/// (visited set over explicit vertices), then a count of all pairs within L1 radius n.
inline BigInt ball_count_bfs(int degree, int n) {
  if (degree < 3) throw Error(Errc::degree_too_small, "ball count needs d >= 3");
  std::vector<std::int64_t> at_distance(static_cast<std::size_t>(n) + 1, 0);
  std::set<std::vector<int>> seen;
  std::vector<TreeVertex> frontier{TreeVertex(degree)};
  seen.insert(std::vector<int>{});
  for (int r = 0; r <= n && !frontier.empty(); ++r) {
    at_distance[r] = static_cast<std::int64_t>(frontier.size());
    std::vector<TreeVertex> next;
    for (const auto& v : frontier)
      for (auto& w : v.neighbors())
        if (seen.insert(w.path()).second) next.push_back(std::move(w));
    frontier = std::move(next);
  }
  std::vector<std::int64_t> ball(at_distance.size());
  std::int64_t acc = 0;
  for (std::size_t r = 0; r < ball.size(); ++r) ball[r] = acc += at_distance[r];
  BigInt total = 0;
  for (int i = 0; i <= n; ++i) total += BigInt(at_distance[i]) * ball[n - i];
  return total;
}

/// Depth-K cylinders making up the shadow of v seen from u, i.e. the ends xi with
/// v on the ray [u, xi). Requires K >= max(depth u, depth v) and K >= 1.
inline std::vector<std::int64_t> end_image_indices(const TreeVertex& u, const TreeVertex& v, int K) {
  check_degree(u, v);
  const int d = u.degree();
  if (K < 1 || K < u.depth() || K < v.depth())
    throw Error(Errc::depth_too_small, "end image depth " + std::to_string(K) + " below vertex depths");
  const std::int64_t total = cylinder_count(d, K);
  std::vector<std::int64_t> out;
  auto refinements = [&](const TreeVertex& y) {
    // indices of depth-K cylinders inside O_y form a contiguous block
    const std::int64_t width = y.is_root() ? total : sphere_size(d, K) / sphere_size(d, y.depth());
    const std::int64_t start = y.is_root() ? 0 : vertex_index(y) * width;
    return std::pair{start, width};
  };
  if (v == u) {
    out.resize(static_cast<std::size_t>(total));
    for (std::int64_t i = 0; i < total; ++i) out[i] = i;
  } else if (v.is_prefix_of(u)) {
    const auto [skip_start, skip_width] = refinements(u.prefix(v.depth() + 1));
    out.reserve(static_cast<std::size_t>(total - skip_width));
    for (std::int64_t i = 0; i < total; ++i)
      if (i < skip_start || i >= skip_start + skip_width) out.push_back(i);
  } else {
    const auto [start, width] = refinements(v);
    out.resize(static_cast<std::size_t>(width));
    for (std::int64_t i = 0; i < width; ++i) out[i] = start + i;
  }
  return out;
}

inline std::vector<BoundaryCylinder> end_image_set(const TreeVertex& u, const TreeVertex& v, int K) {
  std::vector<BoundaryCylinder> out;
  for (auto i : end_image_indices(u, v, K)) out.emplace_back(vertex_at(u.degree(), K, i));
  return out;
}

/// One piece of the boundary partition seen from a vertex w at distance n: either the
/// cylinder beyond w (branch 0) or a cylinder O_y with y in the branch class S_i (1 <= i <= n).
struct PartitionPiece {
  TreeVertex base;
  int branch;
};

/// O_w together with the classes S_i of vertices at depth i leaving the geodesic [root, w]
/// right after its (i-1)-th vertex.
inline std::vector<PartitionPiece> boundary_partition(const TreeVertex& w) {
  std::vector<PartitionPiece> out;
  if (w.is_root()) {
    out.push_back({w, 0});
    return out;
  }
  out.push_back({w, 0});
  for (int i = 1; i <= w.depth(); ++i) {
    const TreeVertex anchor = w.prefix(i - 1);
    for (int l = 0; l < anchor.child_count(); ++l)
      if (l != w.path()[i - 1]) out.push_back({anchor.child(l), i});
  }
  return out;
}

}  // namespace rrdlab
