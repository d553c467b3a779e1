#include <gtest/gtest.h>

#include <random>
#include <set>

#include "stqp/convexity.hpp"
#include "stqp/families.hpp"
#include "stqp/generators.hpp"
#include "test_support.hpp"

using namespace stqp;
using stqp::testing::fixture;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double d : v) x(k++) = d;
  return x;
}

std::set<IndexSet> supports(const std::vector<SimplexPoint>& xs) {
  std::set<IndexSet> s;
  for (const auto& x : xs) s.insert(x.support());
  return s;
}

}  // namespace

TEST(Q1, Fixtures) {
  const auto e1 = in_Q1(fixture("ex1"));
  EXPECT_TRUE(e1.member);
  EXPECT_EQ(e1.diag_index, 0u);
  EXPECT_FALSE(in_Q1(fixture("ex2")).member);
  EXPECT_TRUE(in_Q1(SymMatrix::ones(4)).member);
  EXPECT_FALSE(in_Q1(SymMatrix::identity(4)).member);
}

TEST(Q2, Fixtures) {
  EXPECT_TRUE(in_Q2(fixture("ex2")).member);
  EXPECT_TRUE(in_Q2(SymMatrix::ones(5)).member);
  const auto ev = in_Q2(fixture("ex1"));
  EXPECT_FALSE(ev.member);
  EXPECT_LT(ev.curvature, 0.0);
  EXPECT_NEAR(ev.direction.sum(), 0.0, 1e-12);
}

TEST(Q2, PaperDirections) {
  const Vector d = vec({4, -1, -1, -1, -1});
  EXPECT_DOUBLE_EQ(fixture("ex1").quad(d), -21.0);
  EXPECT_DOUBLE_EQ(fixture("ex3").quad(d), -2.0);
  EXPECT_DOUBLE_EQ(fixture("ex4").quad(d), -6.0);
  EXPECT_DOUBLE_EQ(fixture("ex8").quad(vec({-1, -1, -1, 2, 1})), -10.0);
  for (auto name : {"ex1", "ex3", "ex4", "ex8"}) EXPECT_FALSE(in_Q2(fixture(name)).member) << name;
}

TEST(Concave, Fixtures) {
  EXPECT_TRUE(in_concave(-fixture("ex2")));
  EXPECT_TRUE(in_concave(SymMatrix::ones(3)));
  const auto q = SymMatrix::from_rows({{0, 0}, {0, 1}});
  EXPECT_FALSE(in_concave(q));
  EXPECT_TRUE(in_Q1(q).member);
}

TEST(Concave, ContainedInQ1) {
  std::mt19937_64 rng(40);
  std::uniform_real_distribution<double> lam(-3, 3);
  for (int t = 0; t < 200; ++t) {
    const auto q = shift(-random_psd(rng, 2 + t % 6), lam(rng));
    ASSERT_TRUE(in_concave(q));
    EXPECT_TRUE(in_Q1(q).member) << "instance " << t;
  }
}

TEST(Q3, Example3) {
  const auto ev = in_Q3(fixture("ex3"));
  EXPECT_TRUE(ev.member);
  EXPECT_DOUBLE_EQ(ev.kappa, 0.0);
  EXPECT_EQ(ev.w, Vector::Ones(5));
}

TEST(Q3, Examples1And4) {
  for (auto name : {"ex1", "ex4"}) {
    const auto ev = in_Q3(fixture(name));
    EXPECT_FALSE(ev.member) << name;
    EXPECT_DOUBLE_EQ(ev.kappa1, 0.0) << name;
    EXPECT_DOUBLE_EQ(ev.kappa2, 1.0) << name;
  }
}

TEST(Q3, EmptyEdgeSet) {
  const auto ev = in_Q3(SymMatrix::ones(4));
  EXPECT_TRUE(ev.member);
  EXPECT_EQ(ev.step, "empty edge set");
}

TEST(Q3, OddHoleFails) {
  const auto ev = in_Q3(gen_Mgw(Graph::cycle(5), Vector::Ones(5)));
  EXPECT_FALSE(ev.member);
  EXPECT_EQ(ev.hole.size(), 5u);
}

TEST(Families, Independence) {
  auto f = family_verdict(fixture("ex1"));
  EXPECT_TRUE(f.in_Q1() && !f.in_Q2() && !f.in_Q3());
  f = family_verdict(fixture("ex2"));
  EXPECT_TRUE(!f.in_Q1() && f.in_Q2() && !f.in_Q3());
  f = family_verdict(fixture("ex3"));
  EXPECT_TRUE(!f.in_Q1() && !f.in_Q2() && f.in_Q3());
  EXPECT_FALSE(family_verdict(fixture("ex4")).in_any());
  EXPECT_FALSE(family_verdict(fixture("ex8")).in_any());
}

TEST(Families, MembersAreExact) {
  std::mt19937_64 rng(41);
  int members = 0;
  for (int t = 0; t < 60; ++t) {
    SymMatrix q;
    switch (t % 3) {
      case 0: q = shift(random_psd(rng, 5), -1.0); break;
      case 1: q = shift(-random_psd(rng, 5), 0.5); break;
      default: q = gen_Mgw(random_chordal_graph(rng, 6), random_weights(rng, 6)); break;
    }
    if (!family_verdict(q).in_any()) continue;
    ++members;
    EXPECT_EQ(classify_exactness(q).verdict, Exactness::exact) << "instance " << t;
  }
  EXPECT_GE(members, 50);
}

TEST(GenExact, VertexRecipe) {
  ExactRecipe r{SimplexPoint::vertex(4, 0), SymMatrix::identity(4), SymMatrix(4), 0.0};
  const auto q = gen_exact(r);
  const auto rep = classify_exactness(q);
  EXPECT_EQ(rep.verdict, Exactness::exact);
  EXPECT_NEAR(rep.nu, 0.0, 1e-12);
  EXPECT_NEAR(quadratic_form(q, r.x), 0.0, 1e-12);
}

TEST(GenExact, Constant) {
  ExactRecipe r{SimplexPoint::barycenter(3), SymMatrix(3), SymMatrix(3), 3.0};
  EXPECT_EQ(gen_exact(r), SymMatrix::ones(3) * 3.0);
}

TEST(GenExact, RandomRecipes) {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 20; ++t) {
    const auto r = random_exact_recipe(rng, 6);
    const auto q = gen_exact(r);
    EXPECT_TRUE(is_copositive(shift(q, -r.lambda)));
    EXPECT_NEAR(solve_stqp(q).nu, r.lambda, 1e-9);
    EXPECT_NEAR(ell(q).ell, r.lambda, 1e-5);
  }
}

TEST(GenExact, RejectsPatternOnSupport) {
  ExactRecipe r{SimplexPoint::barycenter(3), SymMatrix::identity(3), SymMatrix::ones(3), 0.0};
  EXPECT_THROW(gen_exact(r), InvalidArgument);
}

TEST(GenGap, HornSeed) {
  GapRecipe r;
  r.perm = {0, 1, 2, 3, 4};
  r.d = Vector::Ones(5);
  const auto q = gen_gap(r);
  EXPECT_EQ(q, horn_matrix());
  EXPECT_NEAR(solve_stqp(q).nu - ell(q).ell, 0.1056, 1e-3);
}

TEST(GenGap, ZeroBlockKeepsGap) {
  GapRecipe r;
  r.n = 6;
  r.B = SymMatrix(1);
  r.C = Dense::Zero(1, 5);
  r.perm = {0, 1, 2, 3, 4, 5};
  r.d = Vector::Ones(6);
  const auto q = gen_gap(r);
  EXPECT_NEAR(quadratic_form(q, SimplexPoint::vertex(6, 0)), 0.0, 1e-15);
  const auto rep = classify_exactness(q);
  EXPECT_NEAR(rep.nu, 0.0, 1e-9);
  EXPECT_EQ(rep.verdict, Exactness::positive_gap);
}

TEST(GenGap, RandomRecipes) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 12; ++t) {
    const auto r = random_gap_recipe(rng, 5 + t % 3);
    const auto q = gen_gap(r);
    const auto rep = classify_exactness(q);
    EXPECT_NEAR(rep.nu, r.lambda, 1e-9);
    EXPECT_EQ(rep.verdict, Exactness::positive_gap);
    const auto m = shift(q, -r.lambda);
    EXPECT_EQ(supports(optimal_set(q)), supports(copositive_zeros(m)));
  }
}

TEST(GenGap, RejectsNonCopositiveBlock) {
  GapRecipe r;
  r.n = 6;
  r.B = SymMatrix::from_rows({{-1}});
  r.C = Dense::Zero(1, 5);
  r.perm = {0, 1, 2, 3, 4, 5};
  r.d = Vector::Ones(6);
  EXPECT_THROW(gen_gap(r), InvalidArgument);
}

TEST(GenMgw, Example3) {
  const auto g = convexity_graph(fixture("ex3"));
  EXPECT_EQ(gen_Mgw(g, Vector::Ones(5)), fixture("ex3"));
}

TEST(GenMgw, CompleteIsIdentity) {
  const auto q = gen_Mgw(Graph::complete(5), Vector::Ones(5));
  EXPECT_EQ(q, SymMatrix::identity(5));
  EXPECT_NEAR(solve_stqp(q).nu, 0.2, 1e-12);
}

TEST(GenMgw, FiveCycle) {
  const auto q = gen_Mgw(Graph::cycle(5), Vector::Ones(5));
  EXPECT_NEAR(solve_stqp(q).nu, 0.5, 1e-12);
  const double tp = theta_prime(Graph::cycle(5).complement(), Vector::Ones(5));
  EXPECT_GT(tp, 2.0);
  EXPECT_NEAR(ell(q).ell, 1.0 / tp, 1e-6);
}

TEST(GenMgw, ConvexityGraphIsG) {
  std::mt19937_64 rng(44);
  for (int t = 0; t < 20; ++t) {
    const auto g = random_graph(rng, 7, 0.5);
    EXPECT_EQ(convexity_graph(gen_Mgw(g, random_weights(rng, 7))), g);
  }
}

TEST(GenMgw, RejectsBadWeights) {
  EXPECT_THROW(gen_Mgw(Graph(3), vec({1, 0, 1})), InvalidArgument);
}

TEST(Random, ChordalGraphsArePerfect) {
  std::mt19937_64 rng(45);
  for (int t = 0; t < 40; ++t) EXPECT_TRUE(is_perfect(random_chordal_graph(rng, 9)).perfect);
}
