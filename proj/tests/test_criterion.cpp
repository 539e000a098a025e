#include <gtest/gtest.h>

#include "rrdlab/criterion.hpp"
#include "test_support.hpp"

using namespace rrdlab;

namespace {

const Field& F2 = Field::get(2);

const SphereTable& table6() {
  static const SphereTable t = enumerate_ball(2, 6);
  return t;
}

const Registries& regs() {
  static const Registries r(F2, 8);
  return r;
}

StepFunction random_step(rrdlab_test::Rng& rng, int k0, int kinf, int lo, int hi) {
  StepFunction h(2, k0, kinf);
  std::uniform_int_distribution<int> num(lo, hi), den(1, 4);
  for (std::int64_t i = 0; i < h.size(Place::zero); ++i)
    for (std::int64_t j = 0; j < h.size(Place::infinity); ++j) h.at(i, j) = AlgebraicValue(2, Rational(num(rng), den(rng)));
  return h;
}

std::vector<SL2Element> short_elements(rrdlab_test::Rng& rng, int count, int max_length) {
  std::vector<SL2Element> out;
  while (static_cast<int>(out.size()) < count) {
    auto g = rrdlab_test::random_word(F2, rng, 3);
    if (g.total_length() <= max_length) out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

TEST(StepFunction, RefinementPreservesNorms) {
  rrdlab_test::Rng rng(5);
  const auto h = random_step(rng, 1, 2, -3, 3);
  const auto r = h.refined(3, 2);
  EXPECT_EQ(r.integral(), h.integral());
  EXPECT_EQ(r.l2_norm_squared(), h.l2_norm_squared());
  EXPECT_EQ(r.l1_norm(), h.l1_norm());
  EXPECT_EQ(r.sup_norm(), h.sup_norm());
  EXPECT_THROW((void)h.refined(0, 2), Error);
}

TEST(Koopman, IdentityIsIdentity) {
  rrdlab_test::Rng rng(6);
  const auto h = random_step(rng, 2, 2, -3, 3);
  EXPECT_EQ(koopman_matrix(SL2Element::identity(F2), 2, 2, regs()).apply(h), h);
}

TEST(Koopman, ExactUnitarity) {
  rrdlab_test::Rng rng(7);
  for (const auto& g : short_elements(rng, 20, 4)) {
    const auto op = koopman_matrix(g, 2, 2, regs());
    for (int i = 0; i < 5; ++i) {
      const auto h = random_step(rng, 2, 2, -5, 5);
      ASSERT_EQ(op.apply(h).l2_norm_squared(), h.l2_norm_squared()) << g.pretty();
    }
  }
}

TEST(Koopman, InverseUndoesAction) {
  rrdlab_test::Rng rng(8);
  const Registries deep(F2, 10);
  for (const auto& g : short_elements(rng, 10, 4)) {
    const auto h = random_step(rng, 1, 2, -5, 5);
    const auto once = koopman_matrix(g, 1, 2, deep).apply(h);
    const auto back = koopman_matrix(g.inverse(), once.depth(Place::zero), once.depth(Place::infinity), deep).apply(once);
    ASSERT_EQ(back, h.refined(back.depth(Place::zero), back.depth(Place::infinity)));
  }
}

TEST(Koopman, RegistryTooShallow) {
  const Registries small(F2, 2);
  const auto g = SL2Element::upper(LaurentPolynomial::monomial(F2, 1, 2));
  try {
    (void)koopman_matrix(g, 1, 1, small);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::out_of_registry);
  }
}

TEST(Mean, ZeroSphereGivesConstantOne) {
  const auto m = mean_transfer_function(table6(), 0, regs());
  EXPECT_EQ(m, StepFunction::constant(2, 1, 1, AlgebraicValue(2, 1)));
  EXPECT_EQ(uniform_bound_value(table6(), 0, regs()).value, AlgebraicValue(2, 1));
}

TEST(Mean, TwoRoutesAgreeAndIntegrateToOne) {
  for (int n : {2, 4}) {
    const auto a = mean_transfer_function(table6(), n, regs());
    const auto b = mean_transfer_bruteforce(table6(), n, regs());
    ASSERT_EQ(a, b) << n;
    EXPECT_EQ(a.integral(), AlgebraicValue(2, 1));
    EXPECT_EQ(a.sup_norm(), uniform_bound_value(table6(), n, regs()).value);
  }
  EXPECT_EQ(mean_transfer_exact(table6(), 6, regs()).integral(), AlgebraicValue(2, 1));
  EXPECT_EQ(uniform_bound_value(table6(), 2, regs()).value, AlgebraicValue(2, Rational(6, 5)));
}

TEST(Mean, StabilizerSymmetry) {
  const int n = 4;
  const auto m = mean_transfer_function(table6(), n, regs());
  for (const auto& h : table6().sphere(0)) {
    for (std::int64_t i = 0; i < m.size(Place::zero); ++i)
      for (std::int64_t j = 0; j < m.size(Place::infinity); ++j) {
        const auto hi = vertex_index(regs().zero.act(h, vertex_at(3, n, i)));
        const auto hj = vertex_index(regs().infinity.act(h, vertex_at(3, n, j)));
        ASSERT_EQ(m.at(hi, hj), m.at(i, j));
      }
  }
}

TEST(Mean, EmptySphere) {
  try {
    (void)uniform_bound_value(table6(), 3, regs());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::empty_sphere);
  }
}

// 0 <= M_n h <= supXi * M^Xi_n h pointwise for nonnegative h.
TEST(Mean, PositivityTransport) {
  rrdlab_test::Rng rng(9);
  const int n = 2;
  const auto sup = sup_xi_on_sphere(table6(), n)->value;
  for (int i = 0; i < 100; ++i) {
    const auto h = random_step(rng, 1, 1, 0, 4);
    const auto plain = mean_operator_apply(table6(), n, h, regs(), false);
    const auto xi = mean_operator_apply(table6(), n, h, regs(), true);
    for (std::size_t c = 0; c < plain.cells(); ++c) {
      ASSERT_GE(plain.values()[c].sign(), 0);
      ASSERT_LE(plain.values()[c], sup * xi.values()[c]);
    }
  }
}

TEST(Mean, MeanOfConstantMatchesTransferFunction) {
  const auto one = StepFunction::constant(2, 0, 0, AlgebraicValue(2, 1));
  const auto via_operator = mean_operator_apply(table6(), 2, one, regs(), true);
  EXPECT_EQ(via_operator, mean_transfer_function(table6(), 2, regs()));
}

TEST(Compression, RieszThorinChainAndMonotonicity) {
  for (int n : {0, 2, 4}) {
    const double u = uniform_bound_value(table6(), n, regs()).value_double;
    double prev = 0;
    for (int K = 0; K <= 3; ++K) {
      const auto r = mean_matrix_2norm(table6(), n, K, regs());
      ASSERT_TRUE(r.converged);
      EXPECT_LE(r.value, u + 1e-8);
      EXPECT_GE(r.value, prev - 1e-8);
      if (n == 0) EXPECT_NEAR(r.value, 1.0, 1e-9);
      prev = r.value;
    }
  }
}

TEST(Convolution, FiniteSubgroupAndMonotonicity) {
  EXPECT_NEAR(convolution_opnorm_lower(table6(), 0, 2).value, 6.0, 1e-6);
  double prev = 0;
  for (int R = 0; R <= 4; R += 2) {
    const auto r = convolution_opnorm_lower(table6(), 2, R);
    EXPECT_GE(r.value, prev - 1e-9);
    EXPECT_LE(r.value, static_cast<double>(table6().sphere_size(2)) + 1e-9);
    prev = r.value;
  }
  EXPECT_THROW((void)convolution_opnorm_lower(table6(), 2, 6), Error);
}

TEST(Radial, SingleSphereAndZero) {
  const std::vector<double> p = {1, 1};
  const auto one = radial_bound_combiner({{4, {2.0, 3.0, 5.0}}}, p);
  EXPECT_DOUBLE_EQ(one.direct, 6.0);
  EXPECT_DOUBLE_EQ(one.constant, 1.0 / 5.0);
  EXPECT_DOUBLE_EQ(one.cauchy_schwarz, (1.0 / 5.0) * 25.0 * 25.0 * 10.0);
  const auto zero = radial_bound_combiner({}, p);
  EXPECT_EQ(zero.direct, 0);
  EXPECT_EQ(zero.cauchy_schwarz, 0);
}

TEST(Radial, CauchySchwarzDominatesDirectOverC) {
  rrdlab_test::Rng rng(10);
  std::uniform_real_distribution<double> a(-3, 3);
  std::uniform_int_distribution<int> idx(0, 3);
  const std::vector<double> p = {1, 1};
  for (int i = 0; i < 1000; ++i) {
    const int n1 = 2 * idx(rng), n2 = n1 + 2 + 2 * idx(rng);
    std::map<int, RadialTerm> terms;
    for (int n : {n1, n2}) {
      const double norm = 1.0 + std::abs(a(rng));
      terms[n] = {a(rng), (1.0 + n) * norm, norm};
    }
    const auto r = radial_bound_combiner(terms, p);
    ASSERT_GE(r.cauchy_schwarz * (1 + 1e-12), r.direct / r.constant);
    ASSERT_GE(r.cauchy_schwarz * (1 + 1e-12), r.direct);
  }
}
