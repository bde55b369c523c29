#include <gtest/gtest.h>

#include <random>

#include "indefsl/weyl.hpp"
#include "support.hpp"

using namespace indefsl;

TEST(SqrtCut, Values) {
  EXPECT_NEAR(std::abs(sqrt_cut(-1.0) - cplx(0, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(sqrt_cut(4.0) - cplx(2, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(sqrt_cut(4.0, false) - cplx(-2, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(sqrt_cut(-4.0) - cplx(0, 2)), 0.0, 1e-15);
  // continuity from above the cut
  EXPECT_NEAR(std::abs(sqrt_cut(cplx(4.0, 1e-12)) - cplx(2, 0)), 0.0, 1e-10);
  cplx z(0.3, 0.7);
  EXPECT_NEAR(std::abs(sqrt_cut(z) * sqrt_cut(z) - z), 0.0, 1e-15);
}

TEST(EvalM, ConstantPotentialClosedForm) {
  auto w = WeylPair::constant(0.0);
  cplx i(0, 1);
  auto mp = *eval_M(w, Side::Plus, i);
  auto mm = *eval_M(w, Side::Minus, i);
  EXPECT_NEAR(std::abs(mp - cplx(1, 1) / std::sqrt(2.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(mm - cplx(-1, 1) / std::sqrt(2.0)), 0.0, 1e-14);
  // D(i) = 2 rho^{-1/2} sin(phi/2) with rho = 1, phi = pi/2
  EXPECT_NEAR(std::abs(*eval_D(w, i) - cplx(std::sqrt(2.0), 0)), 0.0, 1e-14);

  auto w1 = WeylPair::constant(1.0);
  EXPECT_NEAR(std::abs(*eval_M(w1, Side::Plus, 2.0) - i), 0.0, 1e-15);

  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-3, 3);
  for (double a : {-1.0, 0.0, 0.5, 2.0}) {
    auto wa = WeylPair::constant(a);
    for (int k = 0; k < 50; ++k) {
      cplx z(u(rng), std::abs(u(rng)) + 1e-3);
      EXPECT_NEAR(std::abs(*wa.M(Side::Plus, z) - i / sqrt_cut(z - a)), 0.0, 1e-13);
      EXPECT_NEAR(std::abs(*wa.M(Side::Minus, z) + i / sqrt_cut(-z - a)), 0.0, 1e-13);
    }
  }
}

TEST(EvalM, ExamplePrintedFormula) {
  auto w = WeylPair::example1(0.0, 0.5);
  w.as_printed = true;
  auto m = *eval_M(w, Side::Plus, 0.75);
  EXPECT_NEAR(m.real(), 0.0, 1e-15);
  EXPECT_NEAR(m.imag(), -0.25 / std::sqrt(0.1875), 1e-14);
  EXPECT_NEAR(m.imag(), -0.57735, 1e-5);
  // the printed formula fails the Herglotz side check
  EXPECT_LT(eval_M(w, Side::Plus, cplx(0.75, 1e-6))->imag(), 0.0);
  auto fixed = WeylPair::example1(0.0, 0.5);
  EXPECT_GT(eval_M(fixed, Side::Plus, cplx(0.75, 1e-6))->imag(), 0.0);
}

TEST(EvalM, ExampleIsFiniteZoneForm) {
  // M+ = i P / sqrt(R) with P = l - xi - 1, R = (l - xi)(l - xi - k2)(l - xi - 1)
  auto w = WeylPair::example1(-0.3, 0.5);
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int k = 0; k < 50; ++k) {
    cplx z(u(rng), std::abs(u(rng)) + 1e-2);
    cplx W = std::sqrt(z + 0.3) * std::sqrt(z + 0.3 - 0.5) * std::sqrt(z + 0.3 - 1.0);
    cplx expect = cplx(0, 1) * (z + 0.3 - 1.0) / W;
    EXPECT_NEAR(std::abs(*w.M(Side::Plus, z) - expect), 0.0, 1e-12);
    // M-(l) = -M+(-l), continued to the lower half plane by reflection
    cplx mz = -z;
    cplx Wc = std::sqrt(std::conj(mz) + 0.3) * std::sqrt(std::conj(mz) - 0.2) * std::sqrt(std::conj(mz) - 0.7);
    cplx plus_at_mz = std::conj(cplx(0, 1) * (std::conj(mz) - 0.7) / Wc);
    EXPECT_NEAR(std::abs(*w.M(Side::Minus, z) + plus_at_mz), 0.0, 1e-12);
  }
}

TEST(EvalD, Example1EigenvalueZero) {
  auto w = WeylPair::example1(0.0, 0.5);
  double lp = std::sqrt(1.0 - 0.5);
  EXPECT_LT(std::abs(*eval_D(w, lp)), 1e-10);
  EXPECT_LT(std::abs(*eval_D(w, -lp)), 1e-10);
}

TEST(EvalD, NonzeroWhereOnlyOneSideIsImaginary) {
  auto w = WeylPair::constant(1.0);
  auto d = *eval_D(w, 2.0);
  EXPECT_GT(std::abs(d.imag()), 0.0);
}

TEST(EvalM, PoleHitIsTagged) {
  auto w = WeylPair::finite_zone({{0.0, 1.0}, {0.5}, {0.75}, {-1}});
  auto atoms = discrete_masses(w.data, Side::Plus);
  ASSERT_FALSE(atoms.empty());
  EXPECT_FALSE(w.M(Side::Plus, atoms[0].at).has_value());
}

TEST(Asymptotics, Reports) {
  auto c = asymptotics_check(WeylPair::constant(0.0));
  EXPECT_FALSE(c.mismatch);
  EXPECT_LT(c.worst_exponent_error, 1e-3);
  for (const auto& r : c.rays) {
    cplx expect = r.side == Side::Plus ? cplx(0, 1) : cplx(0, -1);
    EXPECT_NEAR(std::abs(r.constant - expect), 0.0, 1e-12);
  }
  auto f = asymptotics_check(WeylPair::finite_zone({{0.0, 1.0}, {0.5}, {0.75}, {1}}));
  EXPECT_FALSE(f.mismatch);
  auto e = WeylPair::example1(0.0, 0.5);
  e.as_printed = true;
  EXPECT_TRUE(asymptotics_check(e).mismatch);
  EXPECT_FALSE(asymptotics_check(WeylPair::example1(0.0, 0.5)).mismatch);
}

TEST(WeylProperties, RandomFiniteZone) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 20; ++i) {
    auto w = WeylPair::finite_zone(testsupport::random_bands(rng, 1 + i % 2));
    for (int k = 0; k < 500; ++k) {
      cplx z(u(rng), std::exp(u(rng)));
      auto p = w.M(Side::Plus, z), m = w.M(Side::Minus, z);
      ASSERT_TRUE(p && m);
      EXPECT_GT(p->imag(), 0.0);
      EXPECT_GT(m->imag(), 0.0);
      EXPECT_LT(std::abs(*w.M(Side::Plus, std::conj(z)) - std::conj(*p)), 1e-10);
      EXPECT_LT(std::abs(*w.M(Side::Minus, std::conj(z)) - std::conj(*m)), 1e-10);
    }
    // pi * density = Im M on band interiors, and boundary continuity
    for (const auto& b : w.data.bands_plus) {
      double hi = std::isfinite(b.hi) ? b.hi : b.lo + 3.0;
      for (int k = 1; k < 10; ++k) {
        double t = b.lo + (hi - b.lo) * k / 10.0;
        double dens = spectral_density(w.data, Side::Plus, t);
        EXPECT_NEAR(std::numbers::pi * dens, w.M(Side::Plus, t)->imag(), 1e-8 * (1 + dens));
        EXPECT_NEAR(std::numbers::pi * spectral_density(w.data, Side::Minus, -t),
                    w.M(Side::Minus, -t)->imag(), 1e-8 * (1 + dens));
        double e1 = std::abs(*w.M(Side::Plus, t) - *w.M(Side::Plus, cplx(t, 1e-6)));
        double e2 = std::abs(*w.M(Side::Plus, t) - *w.M(Side::Plus, cplx(t, 1e-9)));
        EXPECT_LT(e2, e1 + 1e-12);
      }
    }
  }
}
