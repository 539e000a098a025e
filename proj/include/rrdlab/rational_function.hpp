#pragma once

#include <string>

#include "rrdlab/laurent.hpp"

namespace rrdlab {

/// Element of K = F_q(X). Canonical form: numerator in A, denominator an ordinary monic
/// polynomial with nonzero constant term, coprime to the numerator. Zero is 0/1.
class RationalFunction {
 public:
  explicit RationalFunction(const Field& f) : num_(f), den_{1} {}
  RationalFunction(const LaurentPolynomial& p)  // NOLINT(implicit): A embeds in K
      : num_(p), den_{1} {}
  RationalFunction(const LaurentPolynomial& num, const LaurentPolynomial& den) : num_(num.field()), den_{1} {
    if (&num.field() != &den.field()) throw Error(Errc::field_mismatch, "rational function parts over different fields");
    if (den.is_zero()) throw Error(Errc::invalid_argument, "zero denominator");
    num_ = num.shifted(-den.low());
    den_ = den.stripped();
    reduce();
  }

  const Field& field() const noexcept { return num_.field(); }
  const LaurentPolynomial& numerator() const noexcept { return num_; }
  LaurentPolynomial denominator() const { return LaurentPolynomial::from_poly(field(), 0, den_); }
  bool is_zero() const noexcept { return num_.is_zero(); }

  /// Valuation at zero is the X-adic order; at infinity it is deg(den) - deg(num).
  Valuation valuation(Place place) const {
    if (is_zero()) return Valuation::infinity();
    if (place == Place::zero) return Valuation(num_.low());
    return Valuation(poly::degree(den_) - num_.high());
  }

  RationalFunction normalized() const {
    RationalFunction r = *this;
    r.reduce();
    return r;
  }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    const auto da = a.denominator(), db = b.denominator();
    return {a.num_ * db + b.num_ * da, da * db};
  }
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    const auto da = a.denominator(), db = b.denominator();
    return {a.num_ * db - b.num_ * da, da * db};
  }
  RationalFunction operator-() const {
    RationalFunction r = *this;
    r.num_ = -r.num_;
    return r;
  }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return {a.num_ * b.num_, a.denominator() * b.denominator()};
  }
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw Error(Errc::invalid_argument, "division by zero in K");
    return {a.num_ * b.denominator(), a.denominator() * b.num_};
  }

  friend bool operator==(const RationalFunction& a, const RationalFunction& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

  std::string pretty() const {
    if (den_.size() == 1) return num_.pretty();
    return "(" + num_.pretty() + ")/(" + denominator().pretty() + ")";
  }

 private:
  void reduce() {
    const Field& f = num_.field();
    if (num_.is_zero()) {
      den_ = {1};
      return;
    }
    // Move any X-power of the denominator into the numerator's exponent.
    std::size_t lead_zeros = 0;
    while (lead_zeros < den_.size() && den_[lead_zeros] == 0) ++lead_zeros;
    if (lead_zeros) {
      den_.erase(den_.begin(), den_.begin() + static_cast<std::ptrdiff_t>(lead_zeros));
      num_ = num_.shifted(-static_cast<int>(lead_zeros));
    }
    poly::Poly n = num_.stripped();
    const poly::Poly g = poly::gcd(f, n, den_);
    if (g.size() > 1) {
      n = poly::divmod(f, n, g).first;
      den_ = poly::divmod(f, den_, g).first;
    }
    const Coeff lead_inv = f.inv(den_.back());
    den_ = poly::scale(f, den_, lead_inv);
    num_ = LaurentPolynomial::from_poly(f, num_.low(), poly::scale(f, n, lead_inv));
  }

  LaurentPolynomial num_;
  poly::Poly den_;
};

/// Valuation of an element of A or K at a place. Zero maps to the infinite sentinel.
inline Valuation valuation(const LaurentPolynomial& f, Place place) { return f.valuation(place); }
inline Valuation valuation(const RationalFunction& f, Place place) { return f.valuation(place); }

}  // namespace rrdlab
