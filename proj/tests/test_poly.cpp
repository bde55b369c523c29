#include <gtest/gtest.h>

#include <random>

#include "indefsl/poly.hpp"

using namespace indefsl;

TEST(PolyEval, RootAndConstant) {
  RealPoly p({-0.75, 1.0});
  EXPECT_EQ(p.eval(cplx(0.75)), cplx(0.0));
  RealPoly one({1.0});
  EXPECT_EQ(one.eval(cplx(0, 1)), cplx(1.0));
}

TEST(PolyEval, ExpandedCubic) {
  // lambda (lambda - 0.5)(lambda - 1) expanded by hand
  RealPoly p({0.0, 0.5, -1.5, 1.0});
  EXPECT_NEAR(p.eval(2.0), 3.0, 1e-15);
  EXPECT_EQ(RealPoly::from_roots({0.0, 0.5, 1.0}), p);
}

TEST(PolyArith, DivmodAndReflect) {
  RealPoly a = RealPoly::from_roots({1.0, 2.0, -3.0});
  RealPoly q, r;
  RealPoly::divmod(a, RealPoly({-2.0, 1.0}), q, r);
  EXPECT_TRUE(r.is_zero() || r.norm_inf() < 1e-14);
  EXPECT_NEAR(q.eval(5.0), 4.0 * 8.0, 1e-12);
  EXPECT_NEAR(a.reflect().eval(1.5), a.eval(-1.5), 1e-12);
  EXPECT_EQ(a.derivative().degree(), 2);
}

TEST(PolyRoots, Factored) {
  auto r = poly_roots(RealPoly({-1.0, 0.0, 1.0}));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0].z.real(), -1.0, 1e-14);
  EXPECT_NEAR(r[1].z.real(), 1.0, 1e-14);
  EXPECT_EQ(r[0].z.imag(), 0.0);

  auto c = poly_roots(RealPoly({1.0, 0.0, 1.0}));
  ASSERT_EQ(c.size(), 2u);
  EXPECT_NEAR(c[0].z.imag(), -1.0, 1e-14);
  EXPECT_NEAR(c[1].z.imag(), 1.0, 1e-14);
  EXPECT_EQ(c[0].z, std::conj(c[1].z));
}

TEST(PolyRoots, DoubleRootMerged) {
  // (l - 0.3)^2 (l + 2) = l^3 + 1.4 l^2 - 1.11 l + 0.18
  RealPoly p({0.18, -1.11, 1.4, 1.0});
  auto r = poly_roots(p);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0].z.real(), -2.0, 1e-12);
  EXPECT_EQ(r[0].mult, 1);
  EXPECT_NEAR(r[1].z.real(), 0.3, 1e-7);
  EXPECT_EQ(r[1].mult, 2);
}

TEST(PolyRoots, RandomResiduals) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + trial % 10;
    std::vector<double> roots;
    while ((int)roots.size() < n) {
      double x = u(rng);
      bool ok = true;
      for (double y : roots) ok = ok && std::abs(x - y) > 0.05;
      if (ok) roots.push_back(x);
    }
    RealPoly p = RealPoly::from_roots(roots, 0.5 + std::abs(u(rng)));
    auto rs = poly_roots(p);
    int count = 0;
    for (auto& r : rs) {
      EXPECT_LE(std::abs(p.eval(r.z)), 1e-8 * p.norm1());
      count += r.mult;
    }
    EXPECT_EQ(count, n);
  }
}

TEST(PolyRoots, ProductUnionAndConjugation) {
  std::mt19937 rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> ca(4), cb(3);
    for (auto& v : ca) v = g(rng);
    for (auto& v : cb) v = g(rng);
    RealPoly a(ca), b(cb);
    auto ra = poly_roots(a), rb = poly_roots(b), rab = poly_roots(a * b);
    std::vector<cplx> u;
    for (auto& r : ra) for (int k = 0; k < r.mult; ++k) u.push_back(r.z);
    for (auto& r : rb) for (int k = 0; k < r.mult; ++k) u.push_back(r.z);
    std::vector<cplx> w;
    for (auto& r : rab) for (int k = 0; k < r.mult; ++k) w.push_back(r.z);
    ASSERT_EQ(u.size(), w.size());
    std::vector<bool> used(w.size(), false);
    for (auto z : u) {
      double best = 1e300;
      std::size_t bi = 0;
      for (std::size_t i = 0; i < w.size(); ++i)
        if (!used[i] && std::abs(w[i] - z) < best) { best = std::abs(w[i] - z); bi = i; }
      used[bi] = true;
      EXPECT_LT(best, 1e-7 * (1 + std::abs(z)));
    }
    for (auto z : w) {
      double best = 1e300;
      for (auto y : w) best = std::min(best, std::abs(y - std::conj(z)));
      EXPECT_LT(best, 1e-12);
    }
  }
}
