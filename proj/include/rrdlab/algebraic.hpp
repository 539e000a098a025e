#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <compare>
#include <string>

#include "rrdlab/error.hpp"

namespace rrdlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& r) { return r.str(); }

inline Rational parse_rational(const std::string& s) {
  try {
    return Rational(s);
  } catch (const std::exception&) {
    throw Error(Errc::parse_error, "bad rational '" + s + "'");
  }
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Exact scalar a + b*sqrt(q) with rational a, b. When q is a perfect square the radical is
/// folded into a, so b != 0 always means an irrational part.
class AlgebraicValue {
 public:
  explicit AlgebraicValue(int q, Rational a = 0, Rational b = 0) : q_(q), a_(std::move(a)), b_(std::move(b)) {
    if (q < 2) throw Error(Errc::invalid_argument, "q must be >= 2");
    const int s = static_cast<int>(std::lround(std::sqrt(static_cast<double>(q))));
    if (s * s == q) {
      a_ += b_ * s;
      b_ = 0;
    }
  }

  /// q^(k/2) for any integer k.
  static AlgebraicValue sqrt_q_power(int q, int k) {
    const int half = k >= 0 ? k / 2 : -((-k + 1) / 2);  // floor(k / 2)
    Rational base = pow_rational(q, half);
    if (k - 2 * half == 0) return AlgebraicValue(q, base, 0);
    return AlgebraicValue(q, 0, base);
  }

  int q() const noexcept { return q_; }
  const Rational& a() const noexcept { return a_; }
  const Rational& b() const noexcept { return b_; }
  bool is_rational() const noexcept { return b_ == 0; }
  bool is_zero() const noexcept { return a_ == 0 && b_ == 0; }

  /// Sign of a + b*sqrt(q), decided through a^2 - q b^2 when a and b disagree in sign.
  int sign() const {
    const int sa = a_.sign(), sb = b_.sign();
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    const Rational diff = a_ * a_ - Rational(q_) * b_ * b_;
    return diff.sign() * sa;
  }

  double to_double() const { return rrdlab::to_double(a_) + rrdlab::to_double(b_) * std::sqrt(static_cast<double>(q_)); }

  AlgebraicValue inverse() const {
    const Rational norm = a_ * a_ - Rational(q_) * b_ * b_;
    if (norm == 0) throw Error(Errc::invalid_argument, "inverse of zero algebraic value");
    return AlgebraicValue(q_, a_ / norm, -b_ / norm);
  }

  friend AlgebraicValue operator+(const AlgebraicValue& x, const AlgebraicValue& y) {
    check(x, y);
    return AlgebraicValue(x.q_, x.a_ + y.a_, x.b_ + y.b_);
  }
  friend AlgebraicValue operator-(const AlgebraicValue& x, const AlgebraicValue& y) {
    check(x, y);
    return AlgebraicValue(x.q_, x.a_ - y.a_, x.b_ - y.b_);
  }
  AlgebraicValue operator-() const { return AlgebraicValue(q_, -a_, -b_); }
  friend AlgebraicValue operator*(const AlgebraicValue& x, const AlgebraicValue& y) {
    check(x, y);
    return AlgebraicValue(x.q_, x.a_ * y.a_ + Rational(x.q_) * x.b_ * y.b_, x.a_ * y.b_ + x.b_ * y.a_);
  }
  friend AlgebraicValue operator*(const AlgebraicValue& x, const Rational& r) { return AlgebraicValue(x.q_, x.a_ * r, x.b_ * r); }
  friend AlgebraicValue operator/(const AlgebraicValue& x, const AlgebraicValue& y) { return x * y.inverse(); }
  AlgebraicValue& operator+=(const AlgebraicValue& y) {
    check(*this, y);
    a_ += y.a_;
    b_ += y.b_;
    return *this;
  }

  friend bool operator==(const AlgebraicValue& x, const AlgebraicValue& y) { return x.q_ == y.q_ && x.a_ == y.a_ && x.b_ == y.b_; }
  friend std::strong_ordering operator<=>(const AlgebraicValue& x, const AlgebraicValue& y) { return cmp(x, y); }

  /// Exact comparison of two values over the same q.
  friend std::strong_ordering cmp(const AlgebraicValue& x, const AlgebraicValue& y) {
    check(x, y);
    const int s = (x - y).sign();
    return s < 0 ? std::strong_ordering::less : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// e.g. "5/6", "2/3*sqrt(2)", "1 + 1/2*sqrt(3)".
  std::string str() const {
    if (b_ == 0) return a_.str();
    std::string rad = b_.str() + "*sqrt(" + std::to_string(q_) + ")";
    if (a_ == 0) return rad;
    return a_.str() + " + " + rad;
  }

 private:
  static Rational pow_rational(int q, int k) {
    BigInt p = 1;
    for (int i = 0; i < (k < 0 ? -k : k); ++i) p *= q;
    return k >= 0 ? Rational(p) : Rational(1) / Rational(p);
  }
  static void check(const AlgebraicValue& x, const AlgebraicValue& y) {
    if (x.q_ != y.q_) throw Error(Errc::q_mismatch, std::to_string(x.q_) + " vs " + std::to_string(y.q_));
  }

  int q_;
  Rational a_, b_;
};

}  // namespace rrdlab
