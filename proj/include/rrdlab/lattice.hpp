#pragma once

// Concrete model of the Bruhat-Tits tree at a place: homothety classes of O-lattices in K^2,
// a canonical form for them, neighbour enumeration, and a registry that assigns every vertex
// within a radius its rooted path coordinate.

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "rrdlab/sl2.hpp"
#include "rrdlab/tree.hpp"

namespace rrdlab {

/// Plain 2x2 matrix over A, columns spanning a lattice.
struct Mat2 {
  LaurentPolynomial m11, m12, m21, m22;

  static Mat2 of(const SL2Element& g) { return {g.a(), g.b(), g.c(), g.d()}; }
  /// Entries rewritten in the coordinate where `place` is X = 0.
  Mat2 at_place(Place place) const { return {m11.at_place(place), m12.at_place(place), m21.at_place(place), m22.at_place(place)}; }
  LaurentPolynomial det() const { return m11 * m22 - m12 * m21; }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.m11 * y.m11 + x.m12 * y.m21, x.m11 * y.m12 + x.m12 * y.m22, x.m21 * y.m11 + x.m22 * y.m21, x.m21 * y.m12 + x.m22 * y.m22};
  }
};

/// Homothety class of a lattice, stored as the canonical basis [[1, 0], [c, X^e]] (in place
/// coordinates) with c reduced modulo X^e, i.e. only terms of exponent < e kept.
class LatticeVertex {
 public:
  LatticeVertex(Place place, int e, LaurentPolynomial c) : place_(place), e_(e), c_(std::move(c)) {}

  static LatticeVertex base(const Field& f, Place place) { return {place, 0, LaurentPolynomial::zero(f)}; }

  Place place() const noexcept { return place_; }
  int exponent() const noexcept { return e_; }
  const LaurentPolynomial& offdiagonal() const noexcept { return c_; }
  const Field& field() const noexcept { return c_.field(); }

  /// Canonical basis matrix in place coordinates.
  Mat2 basis() const {
    const Field& f = field();
    return {LaurentPolynomial::one(f), LaurentPolynomial::zero(f), c_, LaurentPolynomial::monomial(f, 1, e_)};
  }

  std::string key() const { return "e=" + std::to_string(e_) + ";c=" + c_.serialize(); }

  friend bool operator==(const LatticeVertex& x, const LatticeVertex& y) { return x.place_ == y.place_ && x.e_ == y.e_ && x.c_ == y.c_; }

 private:
  Place place_;
  int e_;
  LaurentPolynomial c_;
};

/// Canonical representative of the class of the lattice spanned by the columns of `m`, where
/// `m` is already written in place coordinates.
inline LatticeVertex canonical_vertex_local(const Mat2& m, Place place) {
  const LaurentPolynomial det = m.det();
  if (det.is_zero()) throw Error(Errc::invalid_argument, "singular lattice basis");
  // Column whose first coordinate has the least valuation becomes the pivot column.
  const bool swap = m.m12.valuation(Place::zero) < m.m11.valuation(Place::zero);
  const LaurentPolynomial& x = swap ? m.m12 : m.m11;
  const LaurentPolynomial& y = swap ? m.m22 : m.m21;
  const int a = x.low();
  const int e = det.low() - 2 * a;
  return {place, e, expand_quotient_below(y, x, e)};
}

inline LatticeVertex canonical_vertex(const Mat2& m, Place place) { return canonical_vertex_local(m.at_place(place), place); }

/// The vertex g . v_place of the tree at `place`.
inline LatticeVertex canonical_vertex(const SL2Element& g, Place place) { return canonical_vertex(Mat2::of(g), place); }

/// The q + 1 neighbours: index-q sublattices of the canonical basis, q of them from the residue
/// lines spanned by (1, t), one from the line spanned by (0, 1).
inline std::vector<LatticeVertex> vertex_neighbors(const LatticeVertex& v) {
  const Field& f = v.field();
  const Mat2 basis = v.basis();
  std::vector<LatticeVertex> out;
  out.reserve(static_cast<std::size_t>(f.q()) + 1);
  for (int t = 0; t < f.q(); ++t) {
    const Mat2 step{LaurentPolynomial::one(f), LaurentPolynomial::zero(f), LaurentPolynomial::constant(f, static_cast<Coeff>(t)),
                    LaurentPolynomial::monomial(f, 1, 1)};
    out.push_back(canonical_vertex_local(basis * step, v.place()));
  }
  const Mat2 step{LaurentPolynomial::monomial(f, 1, 1), LaurentPolynomial::zero(f), LaurentPolynomial::zero(f), LaurentPolynomial::one(f)};
  out.push_back(canonical_vertex_local(basis * step, v.place()));
  return out;
}

/// Breadth-first map from canonical lattice classes to rooted path coordinates, built once
/// to a fixed radius and read-only afterwards. Children are labelled in the order
/// vertex_neighbors lists them, skipping the parent.
class VertexRegistry {
 public:
  VertexRegistry(const Field& f, Place place, int radius) : field_(&f), place_(place), radius_(radius) {
    if (radius < 0) throw Error(Errc::invalid_argument, "negative registry radius");
    const int d = f.q() + 1;
    const LatticeVertex root = LatticeVertex::base(f, place);
    std::vector<std::pair<LatticeVertex, TreeVertex>> frontier{{root, TreeVertex(d)}};
    std::vector<std::string> parent_key{""};
    insert(root, TreeVertex(d));
    for (int r = 0; r < radius; ++r) {
      std::vector<std::pair<LatticeVertex, TreeVertex>> next;
      std::vector<std::string> next_parent;
      for (std::size_t i = 0; i < frontier.size(); ++i) {
        const auto& [lv, tv] = frontier[i];
        int label = 0;
        for (auto& nb : vertex_neighbors(lv)) {
          const std::string k = nb.key();
          if (k == parent_key[i]) continue;
          TreeVertex child = tv.child(label++);
          if (!insert(nb, child)) throw Error(Errc::invalid_argument, "lattice graph is not a tree: revisited " + k);
          next.emplace_back(std::move(nb), std::move(child));
          next_parent.push_back(lv.key());
        }
        if (label != tv.child_count()) throw Error(Errc::invalid_argument, "neighbour count mismatch at " + lv.key());
      }
      frontier = std::move(next);
      parent_key = std::move(next_parent);
    }
  }

  const Field& field() const noexcept { return *field_; }
  Place place() const noexcept { return place_; }
  int radius() const noexcept { return radius_; }
  int degree() const noexcept { return field_->q() + 1; }
  std::size_t size() const noexcept { return by_key_.size(); }

  /// Path coordinate of a lattice class; throws out_of_registry beyond the radius.
  const TreeVertex& path_of(const LatticeVertex& v) const {
    auto it = by_key_.find(v.key());
    if (it == by_key_.end()) throw Error(Errc::out_of_registry, "vertex " + v.key() + " outside radius " + std::to_string(radius_));
    return it->second;
  }
  const LatticeVertex& lattice_of(const TreeVertex& t) const {
    auto it = by_path_.find(t.path());
    if (it == by_path_.end()) throw Error(Errc::out_of_registry, "path '" + t.str() + "' outside radius " + std::to_string(radius_));
    return it->second;
  }

  /// Position of g applied to the base vertex.
  const TreeVertex& locate(const SL2Element& g) const { return path_of(canonical_vertex(g, place_)); }
  /// Position of g applied to the vertex with path t.
  const TreeVertex& act(const SL2Element& g, const TreeVertex& t) const {
    return path_of(canonical_vertex_local(Mat2::of(g).at_place(place_) * lattice_of(t).basis(), place_));
  }

  nlohmann::json to_json() const {
    nlohmann::json vertices = nlohmann::json::object();
    for (const auto& [k, t] : by_key_) vertices[k] = t.str();
    return {{"q", field_->q()}, {"place", place_name(place_)}, {"radius", radius_}, {"vertices", vertices}};
  }

 private:
  bool insert(const LatticeVertex& lv, const TreeVertex& tv) {
    if (!by_key_.emplace(lv.key(), tv).second) return false;
    by_path_.emplace(tv.path(), lv);
    return true;
  }

  const Field* field_;
  Place place_;
  int radius_;
  std::map<std::string, TreeVertex> by_key_;
  std::map<std::vector<int>, LatticeVertex> by_path_;
};

inline const TreeVertex& locate(const SL2Element& g, Place place, const VertexRegistry& registry) {
  if (registry.place() != place) throw Error(Errc::invalid_argument, "registry built for another place");
  return registry.locate(g);
}

}  // namespace rrdlab
