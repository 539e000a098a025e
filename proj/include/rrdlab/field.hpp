#pragma once

// Finite fields F_q with q = p^e <= 256, realized through full operation tables.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "rrdlab/error.hpp"

namespace rrdlab {

using Coeff = std::uint8_t;

/// Irreducible moduli for the extension fields we support, low-degree coefficient first,
/// monic leading term omitted. These are the Conway polynomials for p^e <= 256.
inline const std::vector<Coeff>* extension_modulus(int p, int e) {
  static const std::map<std::pair<int, int>, std::vector<Coeff>> table = {
      {{2, 2}, {1, 1}},          // x^2 + x + 1
      {{2, 3}, {1, 1, 0}},       // x^3 + x + 1
      {{2, 4}, {1, 1, 0, 0}},    // x^4 + x + 1
      {{2, 5}, {1, 0, 1, 0, 0}}, // x^5 + x^2 + 1
      {{2, 6}, {1, 1, 0, 1, 1, 0}},
      {{2, 7}, {1, 1, 0, 0, 0, 0, 0}},
      {{2, 8}, {1, 0, 1, 1, 1, 0, 0, 0}},
      {{3, 2}, {2, 2}},          // x^2 + 2x + 2
      {{3, 3}, {1, 2, 0}},       // x^3 + 2x + 1
      {{3, 4}, {2, 0, 0, 2}},    // x^4 + 2x^3 + 2
      {{3, 5}, {1, 2, 0, 0, 0}},
      {{5, 2}, {2, 4}},          // x^2 + 4x + 2
      {{5, 3}, {3, 3, 0}},       // x^3 + 3x + 3
      {{7, 2}, {3, 6}},          // x^2 + 6x + 3
      {{11, 2}, {2, 7}},
      {{13, 2}, {2, 12}},
  };
  auto it = table.find({p, e});
  return it == table.end() ? nullptr : &it->second;
}

/// Descriptor and operation tables of one finite field. Instances are interned by
/// `Field::get`, so two elements live in the same field iff their descriptor pointers agree.
class Field {
 public:
  static const Field& get(int q) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<Field>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[q];
    if (!slot) slot.reset(new Field(q));
    return *slot;
  }

  int q() const noexcept { return q_; }
  int characteristic() const noexcept { return p_; }
  int degree() const noexcept { return e_; }
  const std::vector<Coeff>& modulus() const noexcept { return modulus_; }

  Coeff add(Coeff a, Coeff b) const noexcept { return add_[idx(a, b)]; }
  Coeff sub(Coeff a, Coeff b) const noexcept { return add_[idx(a, neg_[b])]; }
  Coeff mul(Coeff a, Coeff b) const noexcept { return mul_[idx(a, b)]; }
  Coeff neg(Coeff a) const noexcept { return neg_[a]; }
  Coeff inv(Coeff a) const {
    if (a == 0) throw Error(Errc::invalid_argument, "inverse of zero in F_" + std::to_string(q_));
    return inv_[a];
  }
  /// Image of the integer k in the prime subfield.
  Coeff from_int(long long k) const noexcept {
    long long r = k % p_;
    if (r < 0) r += p_;
    return static_cast<Coeff>(r);
  }

 private:
  explicit Field(int q) : q_(q) {
    if (q < 2 || q > 256) throw Error(Errc::invalid_argument, "q must lie in [2, 256], got " + std::to_string(q));
    int p = 0;
    for (int d = 2; d <= q; ++d) {
      if (q % d == 0) { p = d; break; }
    }
    int e = 0;
    for (int r = q; r > 1; r /= p) {
      if (r % p != 0) throw Error(Errc::invalid_argument, "q is not a prime power: " + std::to_string(q));
      ++e;
    }
    p_ = p;
    e_ = e;
    if (e > 1) {
      const auto* m = extension_modulus(p, e);
      if (!m) throw Error(Errc::invalid_argument, "no modulus tabulated for F_" + std::to_string(q));
      modulus_ = *m;
    }
    build_tables();
  }

  std::size_t idx(Coeff a, Coeff b) const noexcept { return static_cast<std::size_t>(a) * q_ + b; }

  // Elements are integers whose base-p digits are the coordinates in the power basis.
  std::vector<int> digits(int x) const {
    std::vector<int> d(e_);
    for (int i = 0; i < e_; ++i, x /= p_) d[i] = x % p_;
    return d;
  }
  int from_digits(const std::vector<int>& d) const {
    int x = 0;
    for (int i = e_ - 1; i >= 0; --i) x = x * p_ + d[i];
    return x;
  }

  void build_tables() {
    const std::size_t n = static_cast<std::size_t>(q_);
    add_.assign(n * n, 0);
    mul_.assign(n * n, 0);
    neg_.assign(n, 0);
    inv_.assign(n, 0);
    for (int a = 0; a < q_; ++a) {
      auto da = digits(a);
      std::vector<int> dn(e_);
      for (int i = 0; i < e_; ++i) dn[i] = (p_ - da[i]) % p_;
      neg_[a] = static_cast<Coeff>(from_digits(dn));
      for (int b = 0; b < q_; ++b) {
        auto db = digits(b);
        std::vector<int> s(e_);
        for (int i = 0; i < e_; ++i) s[i] = (da[i] + db[i]) % p_;
        add_[idx(a, b)] = static_cast<Coeff>(from_digits(s));
        // schoolbook product then reduction by the monic modulus
        std::vector<int> prod(2 * e_ - 1, 0);
        for (int i = 0; i < e_; ++i)
          for (int j = 0; j < e_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
        for (int k = 2 * e_ - 2; k >= e_; --k) {
          int c = prod[k];
          if (c == 0) continue;
          prod[k] = 0;
          for (int i = 0; i < e_; ++i) prod[k - e_ + i] = ((prod[k - e_ + i] - c * modulus_[i]) % p_ + p_) % p_;
        }
        prod.resize(e_);
        mul_[idx(a, b)] = static_cast<Coeff>(from_digits(prod));
      }
    }
    for (int a = 1; a < q_; ++a) {
      for (int b = 1; b < q_; ++b) {
        if (mul_[idx(a, b)] == 1) { inv_[a] = static_cast<Coeff>(b); break; }
      }
      if (inv_[a] == 0) throw Error(Errc::invalid_argument, "tabulated modulus is reducible for F_" + std::to_string(q_));
    }
  }

  int q_ = 0, p_ = 0, e_ = 0;
  std::vector<Coeff> modulus_;
  std::vector<Coeff> add_, mul_, neg_, inv_;
};

/// An element of F_q: index into the field's element list plus its field descriptor.
class FqElement {
 public:
  FqElement(const Field& f, Coeff index) : field_(&f), index_(index) {
    if (index >= f.q()) throw Error(Errc::invalid_argument, "field element index out of range");
  }

  const Field& field() const noexcept { return *field_; }
  Coeff index() const noexcept { return index_; }
  bool is_zero() const noexcept { return index_ == 0; }

  friend FqElement operator+(FqElement a, FqElement b) {
    check(a, b);
    return {*a.field_, a.field_->add(a.index_, b.index_)};
  }
  friend FqElement operator-(FqElement a, FqElement b) {
    check(a, b);
    return {*a.field_, a.field_->sub(a.index_, b.index_)};
  }
  friend FqElement operator*(FqElement a, FqElement b) {
    check(a, b);
    return {*a.field_, a.field_->mul(a.index_, b.index_)};
  }
  FqElement operator-() const { return {*field_, field_->neg(index_)}; }
  FqElement inverse() const { return {*field_, field_->inv(index_)}; }

  friend bool operator==(const FqElement& a, const FqElement& b) {
    return a.field_ == b.field_ && a.index_ == b.index_;
  }

 private:
  static void check(const FqElement& a, const FqElement& b) {
    if (a.field_ != b.field_) throw Error(Errc::field_mismatch, "F_" + std::to_string(a.field_->q()) + " vs F_" + std::to_string(b.field_->q()));
  }

  const Field* field_;
  Coeff index_;
};

}  // namespace rrdlab
