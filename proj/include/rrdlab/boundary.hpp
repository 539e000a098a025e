#pragma once

// Radon-Nikodym cocycles on tree boundaries and the Harish-Chandra function Xi: closed forms,
// brute-force integration over the boundary partition, the product over two trees, and the
// sphere-average identity.

#include <map>
#include <utility>

#include "rrdlab/algebraic.hpp"
#include "rrdlab/tree.hpp"

namespace rrdlab {

/// q^(beta/2): square root of the Radon-Nikodym derivative, exact.
using CocycleValue = AlgebraicValue;

/// Xi evaluated at a pair of factor lengths (lengths are all Xi depends on).
struct HarishChandraValue {
  AlgebraicValue value;
  int length_zero = 0;
  int length_infinity = 0;
};

/// q^(beta_b(root, w) / 2) with q = d - 1, for ends in the cylinder b.
inline CocycleValue cocycle_sqrt(const TreeVertex& w, const BoundaryCylinder& b) {
  return AlgebraicValue::sqrt_q_power(w.degree() - 1, busemann(b, w));
}

/// (1 + (q-1)/(q+1) n) q^(-n/2), q = d - 1.
inline HarishChandraValue hc_tree_closed(int degree, int n) {
  if (degree < 3) throw Error(Errc::degree_too_small, "Harish-Chandra function needs d >= 3");
  if (n < 0) throw Error(Errc::invalid_argument, "negative distance");
  const int q = degree - 1;
  const Rational poly = 1 + Rational(q - 1, q + 1) * n;
  return {AlgebraicValue::sqrt_q_power(q, -n) * poly, n, 0};
}

/// The same integral computed piece by piece over the boundary partition seen from a vertex
/// at distance n: sum of mu(O_y) * q^(beta/2) with pieces, measures and Busemann values all
/// produced by the tree geometry.
inline HarishChandraValue hc_tree_bruteforce(int degree, int n) {
  if (degree < 3) throw Error(Errc::degree_too_small, "Harish-Chandra function needs d >= 3");
  const TreeVertex w(degree, std::vector<int>(static_cast<std::size_t>(n), 0));
  AlgebraicValue sum(degree - 1);
  for (const auto& piece : boundary_partition(w)) {
    const BoundaryCylinder cyl(piece.base);
    sum += cocycle_sqrt(w, cyl) * cylinder_measure(cyl);
  }
  return {sum, n, 0};
}

/// Xi on the product of two (q+1)-regular trees: product of the factor functions.
inline HarishChandraValue hc_product(int length_zero, int length_infinity, int q) {
  if (length_zero < 0 || length_infinity < 0) throw Error(Errc::invalid_argument, "negative length");
  const auto v = hc_tree_closed(q + 1, length_zero).value * hc_tree_closed(q + 1, length_infinity).value;
  return {v, length_zero, length_infinity};
}

/// Expanded form (1 + r L + r^2 L0 Linf) q^(-L/2), r = (q-1)/(q+1), L = L0 + Linf.
inline AlgebraicValue hc_product_expanded(int length_zero, int length_infinity, int q) {
  const Rational r(q - 1, q + 1);
  const int total = length_zero + length_infinity;
  const Rational poly = 1 + r * total + r * r * length_zero * length_infinity;
  return AlgebraicValue::sqrt_q_power(q, -total) * poly;
}

/// Average of the cocycle over the sphere of radius n, normalized by Xi at distance n. Equal to
/// one for every cylinder of depth >= n.
inline AlgebraicValue sphere_average_check(int degree, int n, const BoundaryCylinder& b) {
  if (b.depth() < n) throw Error(Errc::depth_too_small, "cylinder depth below sphere radius");
  // Group sphere vertices by their Busemann value, then sum exactly.
  std::map<int, std::int64_t> by_beta;
  const auto count = sphere_size(degree, n);
  for (std::int64_t i = 0; i < count; ++i) ++by_beta[busemann(b, vertex_at(degree, n, i))];
  AlgebraicValue sum(degree - 1);
  for (const auto& [beta, k] : by_beta) sum += AlgebraicValue::sqrt_q_power(degree - 1, beta) * Rational(k);
  const AlgebraicValue mean = sum * Rational(1, count);
  return mean / hc_tree_closed(degree, n).value;
}

}  // namespace rrdlab
