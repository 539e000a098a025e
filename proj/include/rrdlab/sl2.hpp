#pragma once

// SL_2(A) for A = F_q[X, X^-1], with the tree lengths L_0, L_inf and L = L_0 + L_inf.

#include <array>
#include <string>
#include <utility>

#include "rrdlab/laurent.hpp"
#include "rrdlab/rational_function.hpp"

namespace rrdlab {

/// A determinant-one matrix [[a, b], [c, d]] over A. Both tree lengths are computed at
/// construction, so values are immutable and freely shareable.
class SL2Element {
 public:
  /// Checked construction; throws determinant_violation unless ad - bc = 1.
  SL2Element(LaurentPolynomial a, LaurentPolynomial b, LaurentPolynomial c, LaurentPolynomial d)
      : SL2Element(std::move(a), std::move(b), std::move(c), std::move(d), Unchecked{}) {
    verify_determinant();
  }

  static SL2Element identity(const Field& f) {
    return {LaurentPolynomial::one(f), LaurentPolynomial::zero(f), LaurentPolynomial::zero(f), LaurentPolynomial::one(f)};
  }
  /// [[1, p], [0, 1]]
  static SL2Element upper(const LaurentPolynomial& p) {
    const Field& f = p.field();
    return {LaurentPolynomial::one(f), p, LaurentPolynomial::zero(f), LaurentPolynomial::one(f)};
  }
  /// [[1, 0], [p, 1]]
  static SL2Element lower(const LaurentPolynomial& p) {
    const Field& f = p.field();
    return {LaurentPolynomial::one(f), LaurentPolynomial::zero(f), p, LaurentPolynomial::one(f)};
  }
  /// diag(X^k, X^-k)
  static SL2Element diagonal(const Field& f, int k) {
    return {LaurentPolynomial::monomial(f, 1, k), LaurentPolynomial::zero(f), LaurentPolynomial::zero(f), LaurentPolynomial::monomial(f, 1, -k)};
  }

  const Field& field() const noexcept { return a_.field(); }
  const LaurentPolynomial& a() const noexcept { return a_; }
  const LaurentPolynomial& b() const noexcept { return b_; }
  const LaurentPolynomial& c() const noexcept { return c_; }
  const LaurentPolynomial& d() const noexcept { return d_; }
  std::array<const LaurentPolynomial*, 4> entries() const noexcept { return {&a_, &b_, &c_, &d_}; }

  /// Tree distance d(v, g v) at the place, via the shortcut -2 * min entry valuation.
  int length(Place place) const noexcept { return place == Place::zero ? len0_ : leninf_; }
  int total_length() const noexcept { return len0_ + leninf_; }

  SL2Element inverse() const { return {d_, -b_, -c_, a_, Unchecked{}}; }

  friend SL2Element operator*(const SL2Element& g, const SL2Element& h) {
    if (&g.field() != &h.field()) throw Error(Errc::field_mismatch, "SL2 product over different fields");
    SL2Element r(g.a_ * h.a_ + g.b_ * h.c_, g.a_ * h.b_ + g.b_ * h.d_, g.c_ * h.a_ + g.d_ * h.c_, g.c_ * h.b_ + g.d_ * h.d_, Unchecked{});
#ifndef NDEBUG
    r.verify_determinant();
#endif
    return r;
  }

  friend bool operator==(const SL2Element& g, const SL2Element& h) {
    return g.a_ == h.a_ && g.b_ == h.b_ && g.c_ == h.c_ && g.d_ == h.d_;
  }
  /// Canonical total order (used to emit sphere buckets deterministically).
  friend bool operator<(const SL2Element& g, const SL2Element& h) {
    if (!(g.a_ == h.a_)) return g.a_ < h.a_;
    if (!(g.b_ == h.b_)) return g.b_ < h.b_;
    if (!(g.c_ == h.c_)) return g.c_ < h.c_;
    return g.d_ < h.d_;
  }

  /// Canonical text: the four entries in `low=..;coeffs=..` form joined by '|'.
  std::string serialize() const { return a_.serialize() + "|" + b_.serialize() + "|" + c_.serialize() + "|" + d_.serialize(); }

  static SL2Element parse(const Field& f, const std::string& text) {
    std::array<std::string, 4> parts;
    std::size_t start = 0;
    for (int i = 0; i < 4; ++i) {
      const auto bar = text.find('|', start);
      if ((i < 3) == (bar == std::string::npos)) throw Error(Errc::parse_error, "expected four '|'-separated entries in '" + text + "'");
      parts[i] = text.substr(start, i < 3 ? bar - start : std::string::npos);
      start = bar + 1;
    }
    return {LaurentPolynomial::parse(f, parts[0]), LaurentPolynomial::parse(f, parts[1]), LaurentPolynomial::parse(f, parts[2]),
            LaurentPolynomial::parse(f, parts[3])};
  }

  std::string pretty() const { return "[[" + a_.pretty() + ", " + b_.pretty() + "], [" + c_.pretty() + ", " + d_.pretty() + "]]"; }

  std::size_t hash() const noexcept {
    std::size_t h = a_.hash();
    for (const auto* e : {&b_, &c_, &d_}) h = h * 0x9E3779B97F4A7C15ULL + e->hash();
    return h;
  }

 private:
  struct Unchecked {};
  SL2Element(LaurentPolynomial a, LaurentPolynomial b, LaurentPolynomial c, LaurentPolynomial d, Unchecked)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
    len0_ = shortcut_length(Place::zero);
    leninf_ = shortcut_length(Place::infinity);
  }

  int shortcut_length(Place place) const {
    Valuation m = Valuation::infinity();
    for (const auto* e : entries()) m = std::min(m, e->valuation(place));
    return -2 * m.value();
  }

  void verify_determinant() const {
    const auto det = a_ * d_ - b_ * c_;
    if (!(det == LaurentPolynomial::one(a_.field()))) throw Error(Errc::determinant_violation, "ad - bc = " + det.pretty());
  }

  LaurentPolynomial a_, b_, c_, d_;
  int len0_ = 0, leninf_ = 0;
};

struct SL2Hash {
  std::size_t operator()(const SL2Element& g) const noexcept { return g.hash(); }
};

inline SL2Element sl2_mul(const SL2Element& g, const SL2Element& h) { return g * h; }
inline SL2Element sl2_inv(const SL2Element& g) { return g.inverse(); }
inline int length_at_place(const SL2Element& g, Place place) { return g.length(place); }
inline int total_length(const SL2Element& g) { return g.total_length(); }

/// Elementary-divisor valuations (a1 <= a2) of g over the valuation ring at `place`,
/// computed by valuation-guided pivoting over K. Independent of the shortcut in SL2Element.
inline std::pair<int, int> smith_valuations(const SL2Element& g, Place place) {
  std::array<std::array<RationalFunction, 2>, 2> m = {{{RationalFunction(g.a()), RationalFunction(g.b())},
                                                       {RationalFunction(g.c()), RationalFunction(g.d())}}};
  // Pivot: an entry of minimal valuation, moved to position (0, 0).
  int pi = 0, pj = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (m[i][j].valuation(place) < m[pi][pj].valuation(place)) pi = i, pj = j;
  if (pi) std::swap(m[0], m[1]);
  if (pj) {
    std::swap(m[0][0], m[0][1]);
    std::swap(m[1][0], m[1][1]);
  }
  // Row and column clearing; multipliers are integral because the pivot has minimal valuation.
  const RationalFunction row_mult = m[1][0] / m[0][0];
  m[1][1] = m[1][1] - row_mult * m[0][1];
  m[1][0] = RationalFunction(g.field());
  // Clearing m[0][1] by a column operation leaves m[1][1] alone once m[1][0] is zero.
  m[0][1] = RationalFunction(g.field());
  const int a1 = m[0][0].valuation(place).value();
  const int a2 = m[1][1].valuation(place).value();
  return {a1, a2};
}

}  // namespace rrdlab
