#include <gtest/gtest.h>

#include <random>

#include "stqp/dnn.hpp"
#include "stqp/generators.hpp"
#include "test_support.hpp"

using namespace stqp;
using stqp::testing::fixture;

TEST(Ell, KnownValues) {
  EXPECT_NEAR(ell(fixture("horn")).ell, -0.1056, 1e-3);
  EXPECT_NEAR(ell(fixture("ex5")).ell, 0.4472, 1e-3);
  EXPECT_NEAR(ell(SymMatrix::identity(3)).ell, 1.0 / 3.0, 1e-7);
}

TEST(Ell, DualSplit) {
  const auto r = ell(fixture("ex3"));
  ASSERT_TRUE(r.converged());
  EXPECT_GE(r.P.min_eigenvalue(), -1e-7);
  for (std::size_t i = 0; i < r.N.n(); ++i)
    for (std::size_t j = i + 1; j < r.N.n(); ++j) EXPECT_GE(r.N(i, j), -1e-7);
  EXPECT_LE((r.P + r.N - r.dual_S).max_abs(), 1e-12);
  EXPECT_NEAR(r.primal_X.dense().sum(), 1.0, 1e-7);
}

TEST(Ell, LowerBoundOnRandom) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 25; ++t) {
    const auto q = stqp::testing::random_sym(rng, 3 + t % 4);
    const auto r = ell(q);
    ASSERT_TRUE(r.converged());
    EXPECT_LE(r.ell, solve_stqp(q).nu + 1e-6);
  }
}

TEST(IsSpn, Horn) {
  const auto c = is_spn(fixture("horn"));
  EXPECT_EQ(c.verdict, SpnVerdict::non_member);
  EXPECT_FALSE(c.is_member());
}

TEST(IsSpn, BoundaryMember) {
  const auto c = is_spn(shift(fixture("ex4"), -1.0));
  EXPECT_EQ(c.verdict, SpnVerdict::borderline);
  EXPECT_TRUE(c.is_member());
}

TEST(IsSpn, PositiveDefinite) {
  const auto c = is_spn(SymMatrix::identity(4));
  EXPECT_EQ(c.verdict, SpnVerdict::member);
  EXPECT_NEAR(c.margin, 0.25, 1e-7);
  EXPECT_LE((c.P + c.N - c.M).max_abs(), 1e-12);
}

TEST(IsSpn, NonConvergedIsBorderline) {
  ConicOptions opt;
  opt.max_iter = 1;
  const auto c = is_spn(fixture("horn"), opt);
  EXPECT_EQ(c.verdict, SpnVerdict::borderline);
  EXPECT_FALSE(c.note.empty());
}

TEST(InQx, OptimalPointOfExactInstance) {
  const auto q = fixture("ex2");
  const auto x = solve_stqp(q).minimizers.front();
  const auto r = in_Qx(q, x);
  EXPECT_TRUE(r.member);
  EXPECT_NEAR(r.lambda, 0.4, 1e-12);
  EXPECT_LE((r.certificate.P + r.certificate.N + SymMatrix::ones(5) * r.lambda - q).max_abs(), 1e-12);
}

TEST(InQx, HornMinimizerIsOutside) {
  Vector v(5);
  v << 0.5, 0.5, 0, 0, 0;
  EXPECT_FALSE(in_Qx(fixture("horn"), SimplexPoint::project(v)).member);
}

TEST(Classify, SmallDimensionsAreExact) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    const auto q = stqp::testing::random_sym(rng, 2 + t % 3);
    const auto rep = classify_exactness(q);
    EXPECT_EQ(rep.verdict, Exactness::exact) << "instance " << t << " gap " << rep.gap;
    ASSERT_TRUE(rep.witness_x.has_value());
    EXPECT_NEAR(quadratic_form(q, *rep.witness_x), rep.nu, 1e-9);
  }
}

TEST(Classify, Horn) {
  const auto rep = classify_exactness(fixture("horn"));
  EXPECT_EQ(rep.verdict, Exactness::positive_gap);
  EXPECT_NEAR(rep.nu, 0.0, 1e-9);
  EXPECT_NEAR(rep.gap, 0.1056, 1e-3);
  EXPECT_FALSE(rep.witness_x.has_value());
  EXPECT_EQ(rep.gap_certificate.verdict, SpnVerdict::non_member);
}

TEST(Classify, Example6Gap) {
  const auto rep = classify_exactness(fixture("ex6"));
  EXPECT_EQ(rep.verdict, Exactness::positive_gap);
  EXPECT_NEAR(rep.ell, 0.4472, 1e-3);
  EXPECT_NEAR(rep.nu, 0.4872, 1e-3);
}

TEST(Classify, ExactDecompositionReconstructs) {
  const auto q = fixture("ex3");
  const auto rep = classify_exactness(q);
  ASSERT_EQ(rep.verdict, Exactness::exact);
  EXPECT_LE((rep.P + rep.N + SymMatrix::ones(q.n()) * rep.lambda - q).max_abs(), 1e-7);
  EXPECT_GE(rep.gap, -1e-6);
}

TEST(Witness, OnesMatrix) {
  const auto q = fixture("e");
  const auto w = search_exact_witness(q, ell(q));
  ASSERT_TRUE(w.has_value());
  EXPECT_NEAR(quadratic_form(q, *w), 1.0, 1e-6);
}

TEST(Witness, Example2) {
  const auto q = fixture("ex2");
  const auto w = search_exact_witness(q, ell(q));
  ASSERT_TRUE(w.has_value());
  EXPECT_NEAR(quadratic_form(q, *w), 0.4, 1e-6);
}

TEST(Witness, NoneForHorn) {
  const auto q = fixture("horn");
  EXPECT_FALSE(search_exact_witness(q, ell(q)).has_value());
}

TEST(SpecialSupport, Vertex) {
  const auto q = fixture("ex1");
  const auto x = solve_stqp(q).minimizers.front();
  ASSERT_EQ(x.support().size(), 1u);
  const auto v = special_support_exactness(q, x);
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(*v, Exactness::exact);
}

TEST(SpecialSupport, FullSupport) {
  std::mt19937_64 rng(9);
  auto r = random_exact_recipe(rng, 6, 0.6, 6);
  const auto q = gen_exact(r);
  const auto v = special_support_exactness(q, r.x);
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(*v, Exactness::exact);
}

TEST(SpecialSupport, MidSizeSupportDecidesNothing) {
  std::mt19937_64 rng(10);
  auto r = random_exact_recipe(rng, 8, 0.6, 5);
  EXPECT_FALSE(special_support_exactness(gen_exact(r), r.x).has_value());
}

TEST(SpecialSupport, RejectsNonOptimalPoint) {
  EXPECT_THROW(special_support_exactness(fixture("horn"), SimplexPoint::barycenter(5)), InvalidArgument);
}
