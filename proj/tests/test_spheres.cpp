#include <gtest/gtest.h>

#include <set>

#include "rrdlab/spheres.hpp"

using namespace rrdlab;

namespace {

const SphereTable& table6() {
  static const SphereTable t = enumerate_ball(2, 6);
  return t;
}

}  // namespace

TEST(Spheres, SmallSpheres) {
  const auto& t = table6();
  EXPECT_EQ(t.sphere_size(0), 6u);
  for (int n = 1; n <= 5; n += 2) EXPECT_EQ(t.sphere_size(n), 0u);
  const auto t3 = enumerate_ball(3, 2);
  EXPECT_EQ(t3.sphere_size(0), 24u);
  EXPECT_EQ(t3.sphere_size(1), 0u);
  const auto t4 = enumerate_ball(4, 0);
  EXPECT_EQ(t4.sphere_size(0), 60u);
}

TEST(Spheres, PostconditionAudit) {
  const auto& t = table6();
  const auto id = SL2Element::identity(t.field());
  for (int n = 0; n <= t.max_length(); ++n) {
    const auto& s = t.sphere(n);
    const std::set<SL2Element> members(s.begin(), s.end());
    ASSERT_EQ(members.size(), s.size());
    if (n == 0) ASSERT_TRUE(members.count(id));
    for (const auto& g : s) {
      ASSERT_EQ(g.a() * g.d() - g.b() * g.c(), LaurentPolynomial::one(t.field()));
      ASSERT_EQ(g.total_length(), n);
      ASSERT_TRUE(members.count(g.inverse())) << "not inversion-closed at " << n;
      if (n > 0) ASSERT_FALSE(g == id);
      for (Place pl : {Place::zero, Place::infinity}) {
        const auto [a1, a2] = smith_valuations(g, pl);
        ASSERT_EQ(a2 - a1, g.length(pl));
      }
    }
  }
}

TEST(Spheres, FiberStructure) {
  // every sphere is a union of full fibres over vertex pairs, each of size |SL2(F_q)|
  const auto& t = table6();
  for (int n = 0; n <= t.max_length(); n += 2) {
    const BigInt pairs = ball_count_formula(3, n) - (n > 0 ? ball_count_formula(3, n - 1) : BigInt(0));
    EXPECT_EQ(t.sphere_size(n) % 6, 0u);
    EXPECT_LE(BigInt(t.sphere_size(n)), pairs * 6);
  }
}

TEST(Spheres, BfsAgreesWithWindow) {
  for (int N : {2, 4, 6}) {
    const auto w = enumerate_ball(2, N);
    const auto b = bfs_crosscheck(2, N, 10);
    EXPECT_TRUE(b.table.saturated());
    for (int n = 0; n <= N; ++n) ASSERT_EQ(b.table.sphere(n), w.sphere(n)) << "N=" << N << " n=" << n;
    for (std::size_t r = 1; r < b.counts_by_radius.size(); ++r) ASSERT_GE(b.counts_by_radius[r], b.counts_by_radius[r - 1]);
  }
  const auto zero = bfs_crosscheck(2, 4, 0);
  EXPECT_EQ(zero.table.ball_size(4), 1u);
  EXPECT_FALSE(zero.table.saturated());
}

TEST(Spheres, ThreadCountDoesNotChangeTable) {
  const auto a = enumerate_ball(2, 4, 1);
  const auto b = enumerate_ball(2, 4, 3);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
}

TEST(Spheres, SerializationRoundTrip) {
  const auto& t = table6();
  const auto j = t.to_json();
  const auto back = SphereTable::from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back.to_json().dump(), j.dump());

  auto stale = j;
  stale["tool_version"] = "0.9.0";
  try {
    (void)SphereTable::from_json(stale);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::stale_cache);
  }
  auto misfiled = j;
  misfiled["buckets"]["2"].push_back(t.sphere(4).front().serialize());
  EXPECT_THROW((void)SphereTable::from_json(misfiled), Error);
}

TEST(Spheres, MemoryBudget) {
  try {
    (void)enumerate_ball(2, 20, 1, 1e6);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::window_overflow);
  }
}

TEST(Spheres, SupXi) {
  const auto& t = table6();
  EXPECT_EQ(sup_xi_on_sphere(t, 0)->value, AlgebraicValue(2, 1));
  EXPECT_FALSE(sup_xi_on_sphere(t, 3).has_value());
  const auto s4 = sup_xi_on_sphere(t, 4);
  EXPECT_EQ(s4->value, AlgebraicValue(2, Rational(25, 36)));
  EXPECT_EQ(s4->length_zero, 2);
  EXPECT_EQ(s4->length_infinity, 2);
}

TEST(Spheres, ConditionOneCertificate) {
  const auto rep = condition_one_certificate(table6());
  ASSERT_EQ(rep.rows.size(), 4u);
  EXPECT_TRUE(rep.rigorous_dominates);
  for (const auto& row : rep.rows) {
    EXPECT_GE(row.rigorous, row.value);
    if (row.n >= 2) EXPECT_LE(row.value, rep.fitted_constant * std::pow(row.n, 2.5) * (1 + 1e-12));
  }
  EXPECT_NEAR(rep.rows[0].value, std::sqrt(6.0), 1e-12);
}

TEST(Spheres, GrowthComparison) {
  const auto rep = growth_comparison(table6());
  EXPECT_EQ(rep.rows.front().ratio, Rational(1, 6));
  for (const auto& row : rep.rows) {
    EXPECT_GT(row.ratio, 0);
    EXPECT_LE(row.ratio, rep.empirical_constant);
  }
}
