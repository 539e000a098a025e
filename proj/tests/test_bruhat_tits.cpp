#include <gtest/gtest.h>

#include <set>

#include "rrdlab/lattice.hpp"
#include "rrdlab/sl2.hpp"
#include "test_support.hpp"

using namespace rrdlab;

namespace {

const Field& F2 = Field::get(2);
LaurentPolynomial X(int k) { return LaurentPolynomial::monomial(F2, 1, k); }

}  // namespace

TEST(SL2, MultiplicationLaws) {
  const auto e12_1 = SL2Element::upper(X(0));
  const auto e12_x = SL2Element::upper(X(1));
  EXPECT_EQ(e12_1 * e12_x, SL2Element::upper(X(0) + X(1)));
  EXPECT_EQ(SL2Element::diagonal(F2, 1) * SL2Element::diagonal(F2, 1), SL2Element::diagonal(F2, 2));
  rrdlab_test::Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const auto g = rrdlab_test::random_word(F2, rng, 6);
    EXPECT_EQ(g * g.inverse(), SL2Element::identity(F2));
  }
}

TEST(SL2, Inverse) {
  EXPECT_EQ(sl2_inv(SL2Element::identity(F2)), SL2Element::identity(F2));
  const Field& f3 = Field::get(3);
  const auto p = LaurentPolynomial(f3, -1, {1, 2, 1});
  EXPECT_EQ(sl2_inv(SL2Element::upper(p)), SL2Element::upper(-p));
  EXPECT_EQ(sl2_inv(SL2Element::diagonal(F2, 1)), SL2Element::diagonal(F2, -1));
}

TEST(SL2, DeterminantViolationIsRejected) {
  try {
    SL2Element(X(1), X(0), X(0), X(0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::determinant_violation);
  }
}

TEST(SL2, SmithValuationsAndLengths) {
  const auto id = SL2Element::identity(F2);
  EXPECT_EQ(smith_valuations(id, Place::zero), std::make_pair(0, 0));
  EXPECT_EQ(length_at_place(id, Place::zero), 0);
  EXPECT_EQ(total_length(id), 0);

  const auto h = SL2Element::diagonal(F2, -1);  // diag(X^-1, X)
  EXPECT_EQ(smith_valuations(h, Place::zero), std::make_pair(-1, 1));
  EXPECT_EQ(length_at_place(h, Place::zero), 2);
  EXPECT_EQ(total_length(h), 4);

  const auto u = SL2Element::upper(X(3));
  EXPECT_EQ(smith_valuations(u, Place::infinity), std::make_pair(-3, 3));
  EXPECT_EQ(length_at_place(u, Place::infinity), 6);
  EXPECT_EQ(length_at_place(u, Place::zero), 0);
  EXPECT_EQ(total_length(u), 6);
}

TEST(SL2, SerializationRoundTrip) {
  const Field& f = Field::get(3);
  rrdlab_test::Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const auto g = rrdlab_test::random_word(f, rng, 5);
    EXPECT_EQ(SL2Element::parse(f, g.serialize()), g);
  }
  EXPECT_THROW(SL2Element::parse(f, "low=0;coeffs=1|low=0;coeffs="), Error);
}

// Shortcut length -2 min v(entry) against the Smith pivoting path, plus the length axioms.
TEST(SL2Property, ShortcutMatchesSmithAndLengthAxioms) {
  for (int q : {2, 3}) {
    const Field& f = Field::get(q);
    rrdlab_test::Rng rng(40 + q);
    std::uniform_int_distribution<int> len(0, 8);
    EXPECT_EQ(total_length(SL2Element::identity(f)), 0);
    for (int i = 0; i < 10000; ++i) {
      const auto g = rrdlab_test::random_word(f, rng, len(rng));
      const auto h = rrdlab_test::random_word(f, rng, len(rng));
      for (Place pl : {Place::zero, Place::infinity}) {
        const auto [a1, a2] = smith_valuations(g, pl);
        ASSERT_LE(a1, a2);
        ASSERT_EQ(a1 + a2, 0);
        ASSERT_EQ(a2 - a1, length_at_place(g, pl));
        ASSERT_EQ(length_at_place(g, pl) % 2, 0);
        ASSERT_EQ(length_at_place(g.inverse(), pl), length_at_place(g, pl));
        ASSERT_LE(length_at_place(g * h, pl), length_at_place(g, pl) + length_at_place(h, pl));
      }
      ASSERT_EQ(total_length(g.inverse()), total_length(g));
      ASSERT_LE(total_length(g * h), total_length(g) + total_length(h));
    }
  }
}

TEST(Lattice, CanonicalVertexExamples) {
  for (Place pl : {Place::zero, Place::infinity}) {
    EXPECT_EQ(canonical_vertex(SL2Element::identity(F2), pl), LatticeVertex::base(F2, pl));
  }
  const auto v = canonical_vertex(SL2Element::diagonal(F2, -1), Place::zero);
  // X^-1 O + X O is homothetic to O + X^2 O
  EXPECT_EQ(v.exponent(), 2);
  EXPECT_TRUE(v.offdiagonal().is_zero());
  // idempotent under re-reduction of its own basis
  EXPECT_EQ(canonical_vertex_local(v.basis(), Place::zero), v);
}

TEST(Lattice, StabilizerMapsToBase) {
  rrdlab_test::Rng rng(9);
  int seen = 0;
  for (int i = 0; i < 3000; ++i) {
    const auto g = rrdlab_test::random_word(F2, rng, 5);
    for (Place pl : {Place::zero, Place::infinity}) {
      const bool fixed = canonical_vertex(g, pl) == LatticeVertex::base(F2, pl);
      ASSERT_EQ(fixed, length_at_place(g, pl) == 0);
      seen += fixed;
    }
  }
  EXPECT_GT(seen, 0);
}

TEST(Lattice, NeighborsAreDistinctAndSymmetric) {
  for (int q : {2, 3, 4}) {
    const Field& f = Field::get(q);
    const auto base = LatticeVertex::base(f, Place::zero);
    const auto nbs = vertex_neighbors(base);
    ASSERT_EQ(nbs.size(), static_cast<std::size_t>(q + 1));
    std::set<std::string> keys;
    for (const auto& n : nbs) keys.insert(n.key());
    EXPECT_EQ(keys.size(), nbs.size());
    for (const auto& n : nbs) {
      int back = 0;
      for (const auto& m : vertex_neighbors(n)) back += (m == base);
      EXPECT_EQ(back, 1);
    }
  }
}

TEST(Lattice, RegistryIsRegularTree) {
  for (Place pl : {Place::zero, Place::infinity}) {
    const VertexRegistry reg(F2, pl, 3);
    EXPECT_EQ(reg.size(), 22u);  // 1 + 3 + 6 + 12
    const Field& f3 = Field::get(3);
    const VertexRegistry reg3(f3, pl, 3);
    EXPECT_EQ(reg3.size(), 1u + 4 + 12 + 36);
  }
  const VertexRegistry reg(F2, Place::zero, 2);
  const auto j = reg.to_json();
  EXPECT_EQ(j["radius"], 2);
  EXPECT_EQ(j["place"], "zero");
  EXPECT_EQ(j["vertices"].size(), 10u);
  EXPECT_EQ(j["vertices"]["e=0;c=low=0;coeffs="], "");
}

TEST(Lattice, LocateIsConsistentWithLengths) {
  for (int q : {2, 3}) {
    const Field& f = Field::get(q);
    rrdlab_test::Rng rng(60 + q);
    for (Place pl : {Place::zero, Place::infinity}) {
      const VertexRegistry reg(f, pl, 10);
      EXPECT_TRUE(locate(SL2Element::identity(f), pl, reg).is_root());
      int tested = 0;
      while (tested < 300) {
        const auto g = rrdlab_test::random_word(f, rng, 3);
        const auto h = rrdlab_test::random_word(f, rng, 3);
        if (length_at_place(g, pl) > 10 || length_at_place(g * h, pl) > 10) continue;
        ++tested;
        const auto& lg = locate(g, pl, reg);
        ASSERT_EQ(lg.depth(), length_at_place(g, pl));
        ASSERT_EQ(tree_distance(lg, locate(g * h, pl, reg)), length_at_place(h, pl));
        if (length_at_place(h, pl) <= 10)
          ASSERT_EQ(reg.act(g, locate(h, pl, reg)), locate(g * h, pl, reg));
      }
    }
  }
}

TEST(Lattice, OutOfRegistry) {
  const VertexRegistry reg(F2, Place::infinity, 2);
  try {
    (void)locate(SL2Element::upper(X(3)), Place::infinity, reg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::out_of_registry);
  }
}
