#pragma once

// Random generators shared by the property-style tests.

#include <random>
#include <vector>

#include "rrdlab/laurent.hpp"
#include "rrdlab/sl2.hpp"

namespace rrdlab_test {

using Rng = std::mt19937_64;

inline rrdlab::LaurentPolynomial random_laurent(const rrdlab::Field& f, Rng& rng, int lo, int hi) {
  std::uniform_int_distribution<int> coeff(0, f.q() - 1);
  std::vector<rrdlab::Coeff> c(static_cast<std::size_t>(hi - lo + 1));
  for (auto& x : c) x = static_cast<rrdlab::Coeff>(coeff(rng));
  return {f, lo, std::move(c)};
}

/// Elementary generating set of SL2(A): E12(s), E21(s) for s = a X^e, a != 0, |e| <= 1, and
/// diag(X, X^-1)^{+-1}.
inline std::vector<rrdlab::SL2Element> elementary_generators(const rrdlab::Field& f) {
  std::vector<rrdlab::SL2Element> gens;
  for (int a = 1; a < f.q(); ++a)
    for (int e = -1; e <= 1; ++e) {
      const auto s = rrdlab::LaurentPolynomial::monomial(f, static_cast<rrdlab::Coeff>(a), e);
      gens.push_back(rrdlab::SL2Element::upper(s));
      gens.push_back(rrdlab::SL2Element::lower(s));
    }
  gens.push_back(rrdlab::SL2Element::diagonal(f, 1));
  gens.push_back(rrdlab::SL2Element::diagonal(f, -1));
  return gens;
}

inline rrdlab::SL2Element random_word(const rrdlab::Field& f, Rng& rng, int length) {
  static thread_local std::vector<rrdlab::SL2Element> gens;
  if (gens.empty() || &gens.front().field() != &f) gens = elementary_generators(f);
  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
  auto g = rrdlab::SL2Element::identity(f);
  for (int i = 0; i < length; ++i) g = g * gens[pick(rng)];
  return g;
}

}  // namespace rrdlab_test
