#pragma once

// Step functions on the product boundary and the Koopman operators pi(g) h = c(g^-1, .)^(1/2) h(g^-1 .)
// restricted to them. Everything here is exact.

#include <vector>

#include "rrdlab/boundary.hpp"
#include "rrdlab/lattice.hpp"

namespace rrdlab {

/// Ratio of cylinder counts between two depths: each depth-`coarse` cylinder is the disjoint
/// union of this many contiguous depth-`fine` cylinders.
inline std::int64_t refinement_width(int degree, int coarse, int fine) {
  if (fine < coarse) throw Error(Errc::depth_too_small, "refinement to a coarser depth");
  return sphere_size(degree, fine) / sphere_size(degree, coarse);
}

/// Function on dT_0 x dT_inf constant on product cylinders of depth (k0, kinf), stored row-major
/// with the place-zero index outermost.
class StepFunction {
 public:
  StepFunction(int q, int depth_zero, int depth_infinity)
      : q_(q), k0_(depth_zero), kinf_(depth_infinity),
        n0_(sphere_size(q + 1, depth_zero)), ninf_(sphere_size(q + 1, depth_infinity)),
        values_(static_cast<std::size_t>(n0_ * ninf_), AlgebraicValue(q)) {}

  static StepFunction constant(int q, int k0, int kinf, const AlgebraicValue& v) {
    StepFunction s(q, k0, kinf);
    for (auto& x : s.values_) x = v;
    return s;
  }

  int q() const noexcept { return q_; }
  int degree() const noexcept { return q_ + 1; }
  int depth(Place p) const noexcept { return p == Place::zero ? k0_ : kinf_; }
  std::int64_t size(Place p) const noexcept { return p == Place::zero ? n0_ : ninf_; }
  std::size_t cells() const noexcept { return values_.size(); }

  AlgebraicValue& at(std::int64_t i0, std::int64_t iinf) { return values_[static_cast<std::size_t>(i0 * ninf_ + iinf)]; }
  const AlgebraicValue& at(std::int64_t i0, std::int64_t iinf) const { return values_[static_cast<std::size_t>(i0 * ninf_ + iinf)]; }
  const std::vector<AlgebraicValue>& values() const noexcept { return values_; }

  /// The same function written at a deeper uniform depth.
  StepFunction refined(int k0, int kinf) const {
    const auto w0 = refinement_width(degree(), k0_, k0);
    const auto winf = refinement_width(degree(), kinf_, kinf);
    StepFunction r(q_, k0, kinf);
    for (std::int64_t i = 0; i < r.n0_; ++i)
      for (std::int64_t j = 0; j < r.ninf_; ++j) r.at(i, j) = at(i / w0, j / winf);
    return r;
  }

  Rational cell_measure() const { return Rational(1) / (Rational(n0_) * Rational(ninf_)); }

  AlgebraicValue sup_norm() const {
    AlgebraicValue m(q_);
    for (const auto& v : values_) m = std::max(m, v.sign() < 0 ? -v : v);
    return m;
  }
  AlgebraicValue integral() const {
    AlgebraicValue s(q_);
    for (const auto& v : values_) s += v;
    return s * cell_measure();
  }
  /// Total variation against the product measure (the L1 norm).
  AlgebraicValue l1_norm() const {
    AlgebraicValue s(q_);
    for (const auto& v : values_) s += v.sign() < 0 ? -v : v;
    return s * cell_measure();
  }
  AlgebraicValue l2_norm_squared() const {
    AlgebraicValue s(q_);
    for (const auto& v : values_) s += v * v;
    return s * cell_measure();
  }

  friend bool operator==(const StepFunction& a, const StepFunction& b) {
    return a.q_ == b.q_ && a.k0_ == b.k0_ && a.kinf_ == b.kinf_ && a.values_ == b.values_;
  }

 private:
  int q_, k0_, kinf_;
  std::int64_t n0_, ninf_;
  std::vector<AlgebraicValue> values_;
};

/// pi(g) on one factor tree from depth-k to depth-(k + L) step functions. Every output cylinder
/// lies in the image of exactly one input cylinder, so the map is a weighted selection:
/// (pi(g) h)[r] = q^(beta[r]/2) h[source[r]].
struct FactorMap {
  int q = 2;
  int in_depth = 0;
  int out_depth = 0;
  std::vector<std::int64_t> source;
  std::vector<int> beta;

  std::size_t out_size() const noexcept { return source.size(); }
  std::int64_t in_size() const { return sphere_size(q + 1, in_depth); }

  /// Same map with outputs written at a deeper depth.
  FactorMap refined(int depth) const {
    const auto w = refinement_width(q + 1, out_depth, depth);
    FactorMap r{q, in_depth, depth, {}, {}};
    const auto n = sphere_size(q + 1, depth);
    r.source.resize(static_cast<std::size_t>(n));
    r.beta.resize(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
      r.source[static_cast<std::size_t>(i)] = source[static_cast<std::size_t>(i / w)];
      r.beta[static_cast<std::size_t>(i)] = beta[static_cast<std::size_t>(i / w)];
    }
    return r;
  }
};

/// Assembles pi(g) at the registry's place on depth-k step functions: the cylinder O_y is carried
/// to the shadow of g y seen from g x0, with weight q^(beta_b(x0, g x0)/2).
inline FactorMap koopman_factor(const SL2Element& g, const VertexRegistry& reg, int in_depth) {
  const int len = g.length(reg.place());
  const int out_depth = std::max(1, in_depth + len);
  if (reg.radius() < out_depth)
    throw Error(Errc::out_of_registry, "registry radius " + std::to_string(reg.radius()) + " below depth " + std::to_string(out_depth));
  const int d = reg.degree();
  const TreeVertex& u = reg.locate(g);
  FactorMap m{d - 1, in_depth, out_depth, {}, {}};
  const auto n_out = sphere_size(d, out_depth);
  m.source.assign(static_cast<std::size_t>(n_out), -1);
  m.beta.assign(static_cast<std::size_t>(n_out), 0);
  for (std::int64_t y = 0; y < sphere_size(d, in_depth); ++y) {
    const TreeVertex& gy = reg.act(g, vertex_at(d, in_depth, y));
    for (auto r : end_image_indices(u, gy, out_depth)) {
      auto& src = m.source[static_cast<std::size_t>(r)];
      if (src != -1) throw Error(Errc::invalid_argument, "images of disjoint cylinders overlap");
      src = y;
      m.beta[static_cast<std::size_t>(r)] = busemann(BoundaryCylinder(vertex_at(d, out_depth, r)), u);
    }
  }
  for (auto s : m.source)
    if (s == -1) throw Error(Errc::invalid_argument, "images of a partition fail to cover the boundary");
  return m;
}

/// pi(g) on the product boundary: the tensor product of the two factor maps.
struct KoopmanMatrix {
  FactorMap zero;
  FactorMap infinity;

  StepFunction apply(const StepFunction& h) const {
    if (h.depth(Place::zero) != zero.in_depth || h.depth(Place::infinity) != infinity.in_depth)
      throw Error(Errc::invalid_argument, "step function depth does not match the operator");
    const int q = zero.q;
    StepFunction out(q, zero.out_depth, infinity.out_depth);
    std::vector<AlgebraicValue> w0, winf;
    for (int b : zero.beta) w0.push_back(AlgebraicValue::sqrt_q_power(q, b));
    for (int b : infinity.beta) winf.push_back(AlgebraicValue::sqrt_q_power(q, b));
    for (std::size_t i = 0; i < zero.out_size(); ++i)
      for (std::size_t j = 0; j < infinity.out_size(); ++j)
        out.at(static_cast<std::int64_t>(i), static_cast<std::int64_t>(j)) = w0[i] * winf[j] * h.at(zero.source[i], infinity.source[j]);
    return out;
  }
};

/// Vertex registries for both places, deep enough for every operator used in a run.
struct Registries {
  VertexRegistry zero;
  VertexRegistry infinity;
  Registries(const Field& f, int radius) : zero(f, Place::zero, radius), infinity(f, Place::infinity, radius) {}
  const VertexRegistry& at(Place p) const noexcept { return p == Place::zero ? zero : infinity; }
  int radius() const noexcept { return zero.radius(); }
};

inline KoopmanMatrix koopman_matrix(const SL2Element& g, int k0, int kinf, const Registries& regs) {
  return {koopman_factor(g, regs.zero, k0), koopman_factor(g, regs.infinity, kinf)};
}

}  // namespace rrdlab
