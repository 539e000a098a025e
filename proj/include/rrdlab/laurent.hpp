#pragma once

// Laurent polynomials over F_q, i.e. elements of A = F_q[X, X^-1], plus the ordinary
// polynomial kernels (division, gcd, inverses, truncated series) the rest of the library needs.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rrdlab/error.hpp"
#include "rrdlab/field.hpp"

namespace rrdlab {

/// The two places of F_q(X) that matter here: X = 0 (uniformizer X) and X = infinity
/// (uniformizer X^-1).
enum class Place { zero, infinity };

inline const char* place_name(Place p) { return p == Place::zero ? "zero" : "infinity"; }

/// Value of a discrete valuation: an integer, or the +infinity attained only by zero.
class Valuation {
 public:
  constexpr Valuation(int v) : infinite_(false), value_(v) {}  // NOLINT(implicit)
  static constexpr Valuation infinity() { return Valuation(); }

  constexpr bool is_infinite() const noexcept { return infinite_; }
  int value() const {
    if (infinite_) throw Error(Errc::invalid_argument, "value() of the infinite valuation");
    return value_;
  }

  friend constexpr bool operator==(const Valuation& a, const Valuation& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend constexpr std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
    return a.value_ <=> b.value_;
  }
  friend constexpr Valuation operator+(const Valuation& a, const Valuation& b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return Valuation(a.value_ + b.value_);
  }

 private:
  constexpr Valuation() : infinite_(true), value_(0) {}
  bool infinite_;
  int value_;
};

namespace poly {

// Ordinary polynomials over F_q: coefficient vectors, constant term first, no trailing zeros.
using Poly = std::vector<Coeff>;

inline void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

inline Poly add(const Field& f, const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = f.add(r[i], b[i]);
  trim(r);
  return r;
}

inline Poly sub(const Field& f, const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = f.sub(r[i], b[i]);
  trim(r);
  return r;
}

inline Poly mul(const Field& f, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
  }
  trim(r);
  return r;
}

inline Poly scale(const Field& f, const Poly& a, Coeff c) {
  Poly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.mul(a[i], c);
  trim(r);
  return r;
}

/// Euclidean division a = quo * b + rem with deg rem < deg b.
inline std::pair<Poly, Poly> divmod(const Field& f, const Poly& a, const Poly& b) {
  if (b.empty()) throw Error(Errc::invalid_argument, "polynomial division by zero");
  Poly rem = a;
  if (rem.size() < b.size()) return {{}, rem};
  Poly quo(rem.size() - b.size() + 1, 0);
  const Coeff lead_inv = f.inv(b.back());
  for (int k = degree(rem); k >= degree(b); --k) {
    Coeff c = rem[k];
    if (c == 0) continue;
    c = f.mul(c, lead_inv);
    const int shift = k - degree(b);
    quo[shift] = c;
    for (std::size_t j = 0; j < b.size(); ++j) rem[shift + j] = f.sub(rem[shift + j], f.mul(c, b[j]));
  }
  trim(quo);
  trim(rem);
  return {quo, rem};
}

inline Poly monic(const Field& f, const Poly& a) {
  if (a.empty()) return a;
  return scale(f, a, f.inv(a.back()));
}

inline Poly gcd(const Field& f, Poly a, Poly b) {
  while (!b.empty()) {
    auto r = divmod(f, a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(f, a);
}

/// Inverse of a modulo m, or nullopt when gcd(a, m) != 1. Requires deg m >= 1.
inline std::optional<Poly> inverse_mod(const Field& f, const Poly& a, const Poly& m) {
  Poly r0 = m, r1 = divmod(f, a, m).second;
  Poly s0, s1 = {1};
  while (!r1.empty()) {
    auto [qt, r2] = divmod(f, r0, r1);
    Poly s2 = sub(f, s0, mul(f, qt, s1));
    r0 = std::move(r1);
    r1 = std::move(r2);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r0.size() != 1) return std::nullopt;
  return divmod(f, scale(f, s0, f.inv(r0[0])), m).second;
}

/// First `terms` coefficients of the power series a / b, which needs b(0) != 0.
inline Poly series_div(const Field& f, const Poly& a, const Poly& b, int terms) {
  if (b.empty() || b[0] == 0) throw Error(Errc::invalid_argument, "series division needs a unit constant term");
  Poly out(std::max(terms, 0), 0);
  Poly work = a;
  work.resize(std::max<std::size_t>(work.size(), out.size()), 0);
  const Coeff b0_inv = f.inv(b[0]);
  for (int k = 0; k < terms; ++k) {
    const Coeff c = f.mul(work[k], b0_inv);
    out[k] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j < b.size() && k + j < work.size(); ++j) work[k + j] = f.sub(work[k + j], f.mul(c, b[j]));
  }
  trim(out);
  return out;
}

}  // namespace poly

/// An element of A = F_q[X, X^-1], stored as X^low * (c_0 + c_1 X + ...) with c_0 and the
/// last coefficient nonzero. The zero polynomial has no coefficients and low = 0, so equal
/// polynomials always have identical representations.
class LaurentPolynomial {
 public:
  explicit LaurentPolynomial(const Field& f) : field_(&f) {}
  LaurentPolynomial(const Field& f, int low, std::vector<Coeff> coeffs) : field_(&f), low_(low), coeffs_(std::move(coeffs)) {
    for (Coeff c : coeffs_)
      if (c >= f.q()) throw Error(Errc::invalid_argument, "coefficient out of range for F_" + std::to_string(f.q()));
    normalize();
  }

  static LaurentPolynomial zero(const Field& f) { return LaurentPolynomial(f); }
  static LaurentPolynomial one(const Field& f) { return constant(f, 1); }
  static LaurentPolynomial constant(const Field& f, Coeff c) { return {f, 0, {c}}; }
  /// c * X^k
  static LaurentPolynomial monomial(const Field& f, Coeff c, int k) { return {f, k, {c}}; }
  static LaurentPolynomial from_poly(const Field& f, int low, poly::Poly p) { return {f, low, std::move(p)}; }

  const Field& field() const noexcept { return *field_; }
  int low() const noexcept { return low_; }
  const std::vector<Coeff>& coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// Highest exponent; meaningless for zero.
  int high() const noexcept { return low_ + static_cast<int>(coeffs_.size()) - 1; }
  /// Coefficient of X^k.
  Coeff coeff(int k) const noexcept {
    const int i = k - low_;
    return (i < 0 || i >= static_cast<int>(coeffs_.size())) ? Coeff{0} : coeffs_[i];
  }
  /// Units of A are exactly the nonzero monomials.
  bool is_unit() const noexcept { return coeffs_.size() == 1; }

  /// The same element re-normalized; normalization is idempotent.
  LaurentPolynomial normalized() const {
    LaurentPolynomial r = *this;
    r.normalize();
    return r;
  }

  Valuation valuation(Place place) const {
    if (is_zero()) return Valuation::infinity();
    return place == Place::zero ? Valuation(low_) : Valuation(-high());
  }

  /// Image under the ring automorphism X -> X^-1, which swaps the roles of the two places.
  LaurentPolynomial inverted_variable() const {
    if (is_zero()) return *this;
    std::vector<Coeff> r(coeffs_.rbegin(), coeffs_.rend());
    return {*field_, -high(), std::move(r)};
  }

  /// Coordinates at a place: identity at zero, X -> X^-1 at infinity, so that valuation at
  /// `place` becomes the lowest exponent.
  LaurentPolynomial at_place(Place place) const { return place == Place::zero ? *this : inverted_variable(); }

  LaurentPolynomial shifted(int k) const {
    LaurentPolynomial r = *this;
    if (!r.is_zero()) r.low_ += k;
    return r;
  }

  /// Drops every term of exponent >= k.
  LaurentPolynomial truncated_below(int k) const {
    if (is_zero() || k <= low_) return zero(*field_);
    std::vector<Coeff> r(coeffs_.begin(), coeffs_.begin() + std::min<std::size_t>(coeffs_.size(), static_cast<std::size_t>(k - low_)));
    return {*field_, low_, std::move(r)};
  }

  /// The ordinary polynomial part: *this = X^low() * stripped().
  const poly::Poly& stripped() const noexcept { return coeffs_; }

  friend LaurentPolynomial operator+(const LaurentPolynomial& a, const LaurentPolynomial& b) { return combine(a, b, false); }
  friend LaurentPolynomial operator-(const LaurentPolynomial& a, const LaurentPolynomial& b) { return combine(a, b, true); }
  LaurentPolynomial operator-() const {
    LaurentPolynomial r = *this;
    for (auto& c : r.coeffs_) c = field_->neg(c);
    return r;
  }
  friend LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    check_same(a, b);
    if (a.is_zero() || b.is_zero()) return zero(*a.field_);
    return {*a.field_, a.low_ + b.low_, poly::mul(*a.field_, a.coeffs_, b.coeffs_)};
  }
  LaurentPolynomial scaled(Coeff c) const { return {*field_, low_, poly::scale(*field_, coeffs_, c)}; }

  /// Exact quotient in A, or nullopt when b does not divide a.
  static std::optional<LaurentPolynomial> divide_exact(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    check_same(a, b);
    if (b.is_zero()) throw Error(Errc::invalid_argument, "division by zero in A");
    if (a.is_zero()) return zero(*a.field_);
    auto [quo, rem] = poly::divmod(*a.field_, a.coeffs_, b.coeffs_);
    if (!rem.empty()) return std::nullopt;
    return LaurentPolynomial(*a.field_, a.low_ - b.low_, std::move(quo));
  }

  friend bool operator==(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    return a.field_ == b.field_ && a.low_ == b.low_ && a.coeffs_ == b.coeffs_;
  }
  /// Total order used only for canonical sorting.
  friend bool operator<(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    if (a.coeffs_.size() != b.coeffs_.size()) return a.coeffs_.size() < b.coeffs_.size();
    if (a.low_ != b.low_) return a.low_ < b.low_;
    return a.coeffs_ < b.coeffs_;
  }

  /// Canonical text form `low=<int>;coeffs=<c0,c1,...>`.
  std::string serialize() const {
    std::string s = "low=" + std::to_string(low_) + ";coeffs=";
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(coeffs_[i]);
    }
    return s;
  }

  static LaurentPolynomial parse(const Field& f, const std::string& text) {
    const auto semi = text.find(';');
    if (text.rfind("low=", 0) != 0 || semi == std::string::npos || text.compare(semi, 8, ";coeffs=") != 0)
      throw Error(Errc::parse_error, "bad Laurent polynomial text '" + text + "'");
    int low = 0;
    try {
      low = std::stoi(text.substr(4, semi - 4));
    } catch (const std::exception&) {
      throw Error(Errc::parse_error, "bad exponent in '" + text + "'");
    }
    std::vector<Coeff> coeffs;
    const std::string body = text.substr(semi + 8);
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) throw Error(Errc::parse_error, "bad coefficient in '" + text + "'");
      const int c = std::stoi(tok);
      if (c >= f.q()) throw Error(Errc::parse_error, "coefficient out of range in '" + text + "'");
      coeffs.push_back(static_cast<Coeff>(c));
    }
    LaurentPolynomial r(f, low, std::move(coeffs));
    if (r.serialize() != text) throw Error(Errc::parse_error, "non-canonical Laurent polynomial text '" + text + "'");
    return r;
  }

  /// Human-readable form such as `X^-1 + 1 + X`.
  std::string pretty() const {
    if (is_zero()) return "0";
    std::string s;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (coeffs_[i] == 0) continue;
      const int k = low_ + static_cast<int>(i);
      if (!s.empty()) s += " + ";
      const bool show_c = coeffs_[i] != 1 || k == 0;
      if (show_c) s += std::to_string(coeffs_[i]);
      if (k != 0) s += std::string(show_c ? "*" : "") + (k == 1 ? "X" : "X^" + std::to_string(k));
    }
    return s;
  }

  std::size_t hash() const noexcept {
    std::size_t h = std::hash<int>{}(low_) ^ (coeffs_.size() * 0x9E3779B97F4A7C15ULL);
    for (Coeff c : coeffs_) h = (h ^ c) * 0x100000001B3ULL;
    return h;
  }

 private:
  static void check_same(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    if (a.field_ != b.field_) throw Error(Errc::field_mismatch, "F_" + std::to_string(a.field_->q()) + " vs F_" + std::to_string(b.field_->q()));
  }

  static LaurentPolynomial combine(const LaurentPolynomial& a, const LaurentPolynomial& b, bool subtract) {
    check_same(a, b);
    if (b.is_zero()) return a;
    if (a.is_zero()) return subtract ? -b : b;
    const Field& f = *a.field_;
    const int lo = std::min(a.low_, b.low_);
    const int hi = std::max(a.high(), b.high());
    std::vector<Coeff> r(static_cast<std::size_t>(hi - lo + 1), 0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) r[a.low_ - lo + i] = a.coeffs_[i];
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) {
      Coeff& t = r[b.low_ - lo + i];
      t = subtract ? f.sub(t, b.coeffs_[i]) : f.add(t, b.coeffs_[i]);
    }
    return {f, lo, std::move(r)};
  }

  void normalize() {
    std::size_t first = 0;
    while (first < coeffs_.size() && coeffs_[first] == 0) ++first;
    if (first == coeffs_.size()) {
      coeffs_.clear();
      low_ = 0;
      return;
    }
    if (first) coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(first));
    low_ += static_cast<int>(first);
    poly::trim(coeffs_);
  }

  const Field* field_;
  int low_ = 0;
  std::vector<Coeff> coeffs_;
};

struct LaurentHash {
  std::size_t operator()(const LaurentPolynomial& p) const noexcept { return p.hash(); }
};

/// Terms of the expansion of num/den at X = 0 with exponent < precision. num, den in A,
/// den nonzero. Used to reduce lattice off-diagonal entries modulo a power of the uniformizer.
inline LaurentPolynomial expand_quotient_below(const LaurentPolynomial& num, const LaurentPolynomial& den, int precision) {
  const Field& f = num.field();
  if (den.is_zero()) throw Error(Errc::invalid_argument, "expansion with zero denominator");
  if (num.is_zero()) return LaurentPolynomial::zero(f);
  const int lead = num.low() - den.low();
  const int terms = precision - lead;
  if (terms <= 0) return LaurentPolynomial::zero(f);
  return LaurentPolynomial::from_poly(f, lead, poly::series_div(f, num.stripped(), den.stripped(), terms));
}

}  // namespace rrdlab
