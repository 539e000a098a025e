#pragma once

// The upper-triangular subgroup H = {[[X^n, P], [0, X^-n]]}, its generating set S, word growth,
// and the short words reaching E12(sum a_i X^(2i)).

#include <cmath>
#include <optional>
#include <set>
#include <unordered_set>

#include "rrdlab/sl2.hpp"

namespace rrdlab {

/// [[X^n, P], [0, X^-n]] stored as (n, P).
class HElement {
 public:
  HElement(int n, LaurentPolynomial p) : n_(n), p_(std::move(p)) {}
  static HElement identity(const Field& f) { return {0, LaurentPolynomial::zero(f)}; }

  int exponent() const noexcept { return n_; }
  const LaurentPolynomial& offdiagonal() const noexcept { return p_; }
  const Field& field() const noexcept { return p_.field(); }

  /// (n1, P1)(n2, P2) = (n1 + n2, X^n1 P2 + P1 X^-n2)
  friend HElement operator*(const HElement& x, const HElement& y) {
    return {x.n_ + y.n_, y.p_.shifted(x.n_) + x.p_.shifted(-y.n_)};
  }
  HElement inverse() const { return {-n_, -p_}; }

  SL2Element matrix() const {
    const Field& f = field();
    return SL2Element(LaurentPolynomial::monomial(f, 1, n_), p_, LaurentPolynomial::zero(f), LaurentPolynomial::monomial(f, 1, -n_));
  }

  friend bool operator==(const HElement& x, const HElement& y) { return x.n_ == y.n_ && x.p_ == y.p_; }
  friend bool operator<(const HElement& x, const HElement& y) { return x.n_ != y.n_ ? x.n_ < y.n_ : x.p_ < y.p_; }
  std::size_t hash() const noexcept { return LaurentHash{}(p_) * 1000003u ^ std::hash<int>{}(n_); }
  std::string str() const { return "(" + std::to_string(n_) + ", " + p_.pretty() + ")"; }

 private:
  int n_;
  LaurentPolynomial p_;
};

struct HElementHash {
  std::size_t operator()(const HElement& h) const noexcept { return h.hash(); }
};

/// The (n, P) form of g when g lies in H.
inline std::optional<HElement> h_membership(const SL2Element& g) {
  if (!g.c().is_zero()) return std::nullopt;
  const auto& a = g.a();
  if (!a.is_unit() || a.coeffs()[0] != 1) return std::nullopt;
  const int n = a.low();
  if (!(g.d() == LaurentPolynomial::monomial(g.field(), 1, -n))) return std::nullopt;
  return HElement(n, g.b());
}

/// The homomorphism H -> Z.
inline int psi(const HElement& h) { return h.exponent(); }

/// S = {diag(X, X^-1), diag(X^-1, X), E12(+-1), E12(+-X)} as a set; for q = 2 the signs coincide.
inline std::vector<HElement> generating_set_s(const Field& f) {
  std::set<HElement> s;
  s.insert(HElement(1, LaurentPolynomial::zero(f)));
  s.insert(HElement(-1, LaurentPolynomial::zero(f)));
  for (Coeff c : {Coeff{1}, f.neg(1)})
    for (int k : {0, 1}) s.insert(HElement(0, LaurentPolynomial::monomial(f, c, k)));
  return {s.begin(), s.end()};
}

/// Word over S for E12(P) with P = sum_{i<=n} a_i X^(2i), a_i in {0, 1}: D^n, E(a_n), then
/// D^-1, E(a_{n-j}) for j = 1..n, where D = diag(X, X^-1) and letters E(0) are dropped.
inline std::vector<HElement> lamplighter_word(const LaurentPolynomial& p, int n) {
  const Field& f = p.field();
  if (n < 0) throw Error(Errc::malformed_polynomial, "negative word parameter");
  if (!p.is_zero() && (p.low() < 0 || p.high() > 2 * n))
    throw Error(Errc::malformed_polynomial, "support of " + p.pretty() + " outside X^0 .. X^" + std::to_string(2 * n));
  for (int k = 0; k <= 2 * n; ++k) {
    const Coeff c = p.coeff(k);
    if ((k % 2 == 1 && c != 0) || c > 1) throw Error(Errc::malformed_polynomial, p.pretty() + " is not a 0/1 polynomial in X^2");
  }
  const HElement down(1, LaurentPolynomial::zero(f));
  const HElement up(-1, LaurentPolynomial::zero(f));
  const HElement e(0, LaurentPolynomial::one(f));
  std::vector<HElement> word(static_cast<std::size_t>(n), down);
  if (p.coeff(2 * n)) word.push_back(e);
  for (int j = 1; j <= n; ++j) {
    word.push_back(up);
    if (p.coeff(2 * (n - j))) word.push_back(e);
  }
  return word;
}

inline HElement evaluate_word(const Field& f, const std::vector<HElement>& word) {
  HElement r = HElement::identity(f);
  for (const auto& w : word) r = r * w;
  return r;
}

/// Every 0/1 polynomial in X^2 of degree <= 2n, i.e. the 2^(n+1) targets of the word family.
inline std::vector<LaurentPolynomial> lamplighter_targets(const Field& f, int n) {
  std::vector<LaurentPolynomial> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n + 1)); ++mask) {
    std::vector<Coeff> c(static_cast<std::size_t>(2 * n + 1), 0);
    for (int i = 0; i <= n; ++i) c[static_cast<std::size_t>(2 * i)] = (mask >> i) & 1u;
    out.emplace_back(f, 0, std::move(c));
  }
  return out;
}

/// |B_S(r)| for r = 0..R by breadth-first search inside H.
inline std::vector<std::uint64_t> h_ball_growth(int q, int R, std::size_t max_elements = 50'000'000) {
  const Field& f = Field::get(q);
  const auto gens = generating_set_s(f);
  std::unordered_set<HElement, HElementHash> seen;
  std::vector<HElement> frontier{HElement::identity(f)};
  seen.insert(frontier.front());
  std::vector<std::uint64_t> sizes{1};
  for (int r = 1; r <= R; ++r) {
    std::vector<HElement> next;
    for (const auto& g : frontier)
      for (const auto& s : gens) {
        HElement h = g * s;
        if (seen.insert(h).second) next.push_back(std::move(h));
      }
    if (seen.size() > max_elements) throw Error(Errc::memory_budget, "ball of radius " + std::to_string(r) + " exceeds the element budget");
    frontier = std::move(next);
    sizes.push_back(seen.size());
  }
  return sizes;
}

struct GrowthCertificate {
  double certified_rate = 0;  // 2^(1/3) from the word family
  double empirical_rate = 0;  // max over r >= 1 of |B(r)|^(1/r)
  bool family_bound_holds = true;  // |B(3n+1)| >= 2^(n+1) wherever 3n+1 is tabulated
  bool rd_failure = false;
};

inline GrowthCertificate exponential_certificate(const std::vector<std::uint64_t>& ball_sizes) {
  GrowthCertificate c;
  c.certified_rate = std::cbrt(2.0);
  for (std::size_t r = 1; r < ball_sizes.size(); ++r)
    c.empirical_rate = std::max(c.empirical_rate, std::exp(std::log(static_cast<double>(ball_sizes[r])) / static_cast<double>(r)));
  for (std::size_t n = 0; 3 * n + 1 < ball_sizes.size(); ++n)
    if (n < 63 && ball_sizes[3 * n + 1] < (std::uint64_t{1} << (n + 1))) c.family_bound_holds = false;
  c.rd_failure = c.family_bound_holds && c.certified_rate > 1.0;
  return c;
}

}  // namespace rrdlab
