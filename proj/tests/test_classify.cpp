#include <gtest/gtest.h>

#include <random>

#include "indefsl/classify.hpp"
#include "support.hpp"

using namespace indefsl;

TEST(LocalOrder, PowerFunctions) {
  auto sq = local_order([](cplx z) -> std::optional<cplx> { return std::sqrt(z - 1.0); }, 1.0);
  EXPECT_TRUE(sq.resolved);
  EXPECT_EQ(sq.order, 0.5);
  auto pole = local_order([](cplx z) -> std::optional<cplx> { return 1.0 / (z - 2.0); }, 2.0);
  EXPECT_TRUE(pole.resolved);
  EXPECT_EQ(pole.order, -1.0);
  auto bad = local_order([](cplx z) -> std::optional<cplx> { return std::pow(z, 0.25); }, 0.0);
  EXPECT_FALSE(bad.resolved);
}

TEST(LocalOrder, ConstNegativeAHasZeroOfDAtOrigin) {
  auto w = WeylPair::constant(-1.0);
  auto d = local_order([&](cplx z) { return w.D(z); }, 0.0);
  auto im = local_order([&](cplx z) -> std::optional<cplx> { return w.M(Side::Plus, z)->imag(); }, 0.0);
  EXPECT_TRUE(d.resolved);
  EXPECT_GT(d.order, im.order);
  // Im M+ / (M+ - M-) is unbounded near 0
  double r1 = w.M(Side::Plus, 1e-3)->imag() / std::abs(*w.D(1e-3));
  double r2 = w.M(Side::Plus, 1e-6)->imag() / std::abs(*w.D(1e-6));
  EXPECT_GT(r2, 100 * r1);
}

TEST(LocalOrder, ExactCrossCheckOnM) {
  std::mt19937 rng(2);
  for (int i = 0; i < 10; ++i) {
    auto w = WeylPair::finite_zone(testsupport::random_bands(rng, 1 + i % 2));
    for (double e : w.data.edges) {
      auto num = local_order([&](cplx z) { return w.M(Side::Plus, z); }, e);
      ASSERT_TRUE(num.resolved);
      EXPECT_EQ(num.order, exact_order_M(w.data, Side::Plus, e)) << e;
    }
  }
}

TEST(Singularities, TableRows) {
  auto s1 = singular_points(strong_singularities(WeylPair::example1(-0.1, 0.5)));
  ASSERT_EQ(s1.size(), 1u);
  EXPECT_NEAR(s1[0], 0.0, 1e-12);

  auto s2 = singular_points(strong_singularities(WeylPair::example2(-0.75, 0.25)));
  ASSERT_EQ(s2.size(), 2u);
  double l = std::sqrt(std::pow(-0.75 + 0.25, 2) + 0.25 * 0.75);
  EXPECT_NEAR(s2[0], -l, 1e-6);
  EXPECT_NEAR(s2[1], l, 1e-6);
  EXPECT_NEAR(l, 0.66144, 1e-5);

  EXPECT_TRUE(singular_points(strong_singularities(WeylPair::example1(0.3, 0.5))).empty());
}

TEST(ConditionIII, Examples) {
  EXPECT_TRUE(check_condition_iii(WeylPair::example1(0.3, 0.5)).holds);
  EXPECT_FALSE(check_condition_iii(WeylPair::example1(-1 + std::sqrt(0.5), 0.5)).holds);
  EXPECT_FALSE(check_condition_iii(WeylPair::example1(-0.2929, 0.5)).holds);
  EXPECT_TRUE(check_condition_iii(WeylPair::constant(1.0)).holds);
}

TEST(Classify, Examples) {
  auto v = classify_similarity(WeylPair::example1(-0.75, 0.5));
  EXPECT_EQ(v.overall, Overall::SimilarNormal);
  ASSERT_EQ(v.spectrum.eigenvalues.size(), 2u);
  EXPECT_NEAR(v.spectrum.eigenvalues[1].z.imag(), 0.66144, 1e-5);
  EXPECT_FALSE(v.definitizable.definitizable);

  EXPECT_EQ(classify_similarity(WeylPair::example2(-0.4, 0.25)).overall, Overall::SimilarSelfadjoint);
  auto n = classify_similarity(WeylPair::example2(-0.25, 0.75));
  EXPECT_EQ(n.overall, Overall::NotSimilar);
  ASSERT_EQ(n.singularities.size(), 1u);
  EXPECT_NEAR(n.singularities[0].point, 0.0, 1e-12);
}

TEST(Classify, ConditionIIIAgreesWithScan) {
  for (double k2 : {0.25, 0.5, 0.75})
    for (double xi = -2.0; xi <= 1.0; xi += 0.1) {
      for (auto w : {WeylPair::example1(xi, k2), WeylPair::example2(xi, k2)}) {
        auto v = classify_similarity(w);
        EXPECT_EQ(v.condition_iii.holds, v.singularities.empty()) << w.label();
      }
    }
}

TEST(Classify, NonnegativeLIsSimilarSelfadjoint) {
  std::mt19937 rng(8);
  for (int i = 0; i < 30; ++i) {
    auto w = WeylPair::finite_zone(testsupport::random_bands(rng, 1 + i % 2, 0.0, 3.0));
    EXPECT_EQ(classify_similarity(w).overall, Overall::SimilarSelfadjoint) << i;
  }
}

TEST(Classify, StableUnderWindowShift) {
  for (double xi : {1.0, 0.3, -0.1, -0.28, -0.4, -0.75, -1.5, -2.0}) {
    auto w = WeylPair::example1(xi, 0.5);
    auto a = classify_similarity(w);
    auto b = classify_similarity(w, SingularityOptions{3, 8});
    EXPECT_EQ(a.overall, b.overall) << xi;
  }
}
