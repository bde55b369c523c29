#include <gtest/gtest.h>

#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/jacobi_elliptic.hpp>
#include <random>

#include "indefsl/harness.hpp"

using namespace indefsl;
using namespace indefsl::harness;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Usage;
}

Eigen::MatrixXcd random_hermitian(std::mt19937& rng, int n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = cplx(g(rng), g(rng));
  return 0.5 * (A + A.adjoint());
}

}  // namespace

TEST(Elliptic, AgreesWithBoost) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> ux(-10.0, 10.0), uk(0.0, 0.99);
  for (int i = 0; i < 200; ++i) {
    double x = ux(rng), k = uk(rng);
    EXPECT_NEAR(jacobi_sn(x, k), boost::math::jacobi_sn(k, x), 1e-12) << x << " " << k;
    EXPECT_NEAR(ellint_K(k), boost::math::ellint_1(k), 1e-12) << k;
  }
}

TEST(Elliptic, SpecialValues) {
  for (double x : {-2.0, 0.3, 1.0, 7.5}) EXPECT_NEAR(jacobi_sn(x, 0.0), std::sin(x), 1e-15);
  for (double k : {0.0, 0.1, 0.5, 0.9, 0.999}) {
    EXPECT_NEAR(jacobi_sn(ellint_K(k), k), 1.0, 1e-12) << k;
    EXPECT_EQ(jacobi_sn(0.0, k), 0.0);
  }
  EXPECT_EQ(kind_of([] { jacobi_sn(0.5, 1.0); }), ErrorKind::ModulusOutOfRange);
  EXPECT_EQ(kind_of([] { ellint_K(-0.1); }), ErrorKind::ModulusOutOfRange);
}

TEST(Potentials, ValuesAtOrigin) {
  for (double k2 : {0.25, 0.5, 0.75})
    for (double xi : {-0.75, 0.3}) {
      double k = std::sqrt(k2);
      EXPECT_NEAR(q1(0.0, xi, k), -(1.0 - k2) + xi, 1e-15);
      EXPECT_NEAR(q2(0.0, xi, k), -2.0 * k2 + 1.0 + k2 + xi, 1e-15);
      EXPECT_NEAR(potential_of(WeylPair::example1(xi, k2))(0.7), q1(0.7, xi, k), 1e-15);
      EXPECT_NEAR(potential_of(WeylPair::example2(xi, k2))(0.7), q2(0.7, xi, k), 1e-15);
    }
  // q1 has period 2K(k')
  double k = std::sqrt(0.5), K = ellint_K(std::sqrt(1.0 - 0.5));
  EXPECT_NEAR(q1(0.4 + 2.0 * K, -0.2, k), q1(0.4, -0.2, k), 1e-12);
  EXPECT_EQ(potential_of(WeylPair::constant(-1.0))(3.0), -1.0);
  EXPECT_EQ(kind_of([] { q1(0.0, 0.0, 1.0); }), ErrorKind::ModulusOutOfRange);
}

TEST(Hilbert, IntervalIndicator) {
  auto chi = [](double t) { return std::abs(t) < 1.0 ? 1.0 : 0.0; };
  Density d{chi, {-1.0, 1.0}, {}, 1.0, Interval{-1.0, 1.0}};
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  int n = 0;
  while (n < 20) {
    double x = u(rng);
    if (std::abs(std::abs(x) - 1.0) < 0.05) continue;
    EXPECT_NEAR(hilbert_pv(d, x), std::log(std::abs((x + 1.0) / (x - 1.0))) / std::numbers::pi, 1e-6) << x;
    ++n;
  }
  EXPECT_NEAR(hilbert_pv(d, 2.0), std::log(3.0) / std::numbers::pi, 1e-10);
  EXPECT_NEAR(hilbert_pv(d, 0.0), 0.0, 1e-12);
}

TEST(Hilbert, LorentzianBruteForce) {
  auto f = [](double t) { return 1.0 / (1.0 + t * t); };
  // midpoint p.v. on a grid symmetric about x, 1e7 points
  const double x = 1.0, L = 2e4;
  const long N = 5000000;
  const double h = L / N;
  double brute = 0.0;
  for (long k = 0; k < N; ++k) {
    double s = (k + 0.5) * h;
    brute += (f(x - s) - f(x + s)) / s * h;
  }
  brute /= std::numbers::pi;
  double v = hilbert_pv(f, x);
  EXPECT_NEAR(v, brute, 1e-6);
  EXPECT_NEAR(v, 0.5, 1e-9);
}

TEST(Hilbert, AntiSelfAdjoint) {
  auto f = [](double t) { return smooth_bump(t, -1.0, 0.5) * (1.0 + t); };
  auto g = [](double t) { return smooth_bump(t, -0.3, 1.2); };
  Density df{f, {}, {}, 1.0, Interval{-1.0, 0.5}}, dg{g, {}, {}, 1.0, Interval{-0.3, 1.2}};
  double a = quad::integrate([&](double t) { return hilbert_pv(df, t) * g(t); }, -0.3, 1.2, 1e-8);
  double b = quad::integrate([&](double t) { return f(t) * hilbert_pv(dg, t); }, -1.0, 0.5, 1e-8);
  EXPECT_GT(std::abs(a), 1e-2);
  EXPECT_NEAR(a + b, 0.0, 1e-5);
}

TEST(Hilbert, AtomsAndTail) {
  Density d{[](double) { return 0.0; }, {}, {{0.5, 2.0}}, 1.0, Interval{0.0, 1.0}};
  EXPECT_NEAR(hilbert_pv(d, 1.5), 2.0 / std::numbers::pi, 1e-12);
  EXPECT_EQ(kind_of([] { hilbert_pv([](double) { return 1.0; }, 0.3); }), ErrorKind::TailDivergence);
}

TEST(TestFunctions, DefaultFamilyIsSeeded) {
  auto w = WeylPair::constant(1.0);
  auto a = default_family(w, Side::Plus, 7), b = default_family(w, Side::Plus, 7), c = default_family(w, Side::Plus, 8);
  ASSERT_EQ(a.size(), 30u);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].id, b[i].id);
    EXPECT_EQ(a[i].support.lo, b[i].support.lo);
    EXPECT_GE(a[i].support.lo, 1.0);
    differs = differs || a[i].support.lo != c[i].support.lo;
  }
  EXPECT_TRUE(differs);
}

TEST(TwoWeight, ConstantPositiveIsStable) {
  auto w = WeylPair::constant(1.0);
  auto r30 = two_weight_test(w, Side::Plus, default_family(w, Side::Plus, 20240601, 30));
  auto r60 = two_weight_test(w, Side::Plus, default_family(w, Side::Plus, 20240601, 60));
  ASSERT_TRUE(std::isfinite(r30.max_ratio));
  EXPECT_GT(r30.max_ratio, 0.0);
  EXPECT_GE(r60.max_ratio, r30.max_ratio);
  EXPECT_LT(r60.max_ratio, 2.0 * r30.max_ratio);
  for (const auto& row : r30.rows) EXPECT_FALSE(row.divergent) << row.id;
}

TEST(TwoWeight, ConstantNegativeDivergesAtOrigin) {
  auto w = WeylPair::constant(-1.0);
  auto r = two_weight_test(w, Side::Plus, concentrating_family(0.0, 2));
  for (const auto& row : r.rows) {
    EXPECT_TRUE(row.divergent) << row.id;
    EXPECT_GT(row.rhs, 0.0);
  }
  EXPECT_TRUE(std::isinf(r.max_ratio));
}

TEST(TwoWeight, ZeroFunction) {
  auto w = WeylPair::constant(1.0);
  TestFunction z{"zero", [](double) { return 0.0; }, Interval{1.5, 2.5}};
  auto r = two_weight_test(w, Side::Plus, {z});
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].lhs, 0.0);
  EXPECT_EQ(r.rows[0].rhs, 0.0);
  EXPECT_EQ(r.rows[0].ratio, 0.0);
}

TEST(ModelIntegral, Dichotomy) {
  std::vector<double> eps{1.0, 0.1, 0.01, 0.001};
  TestFunction gauss{"gauss", [](double t) { return std::exp(-(t - 2.0) * (t - 2.0)); }, Interval{1.0, 6.0}};
  auto pos = model_integral_check(WeylPair::constant(1.0), Side::Plus, gauss, eps);
  double lo = 1e300, hi = 0.0;
  for (const auto& r : pos) {
    lo = std::min(lo, r.lhs);
    hi = std::max(hi, r.lhs);
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(hi / lo, 3.0);
  auto neg = model_integral_check(WeylPair::constant(-1.0), Side::Plus, concentrating_family(0.0, 1)[0], eps);
  EXPECT_GT(neg.back().lhs, 1e3 * neg.front().lhs);
  for (std::size_t i = 1; i < neg.size(); ++i) EXPECT_GT(neg[i].lhs, neg[i - 1].lhs);
  TestFunction z{"zero", [](double) { return 0.0; }, Interval{1.0, 2.0}};
  for (const auto& r : model_integral_check(WeylPair::constant(1.0), Side::Plus, z, eps)) EXPECT_EQ(r.lhs, 0.0);
}

TEST(FDOperator, Structure) {
  auto op = fd_operator(WeylPair::example1(-0.75, 0.5), 10.0, 0.1);
  EXPECT_EQ(op.size(), 200);
  EXPECT_LT(op.j_asymmetry(), 1e-12);
  for (double x : op.x) EXPECT_NE(x, 0.0);
  Eigen::MatrixXd A = op.dense();
  Eigen::MatrixXd JA = Eigen::VectorXd::Map(op.sgn.data(), op.size()).asDiagonal() * A;
  EXPECT_LT((JA - JA.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_GE(op.norm_bound(), A.cwiseAbs().rowwise().sum().maxCoeff() - 1e-9);
}

TEST(FDOperator, SolveAndDeterminant) {
  auto op = fd_operator(WeylPair::constant(-1.0), 5.0, 0.1);
  Eigen::MatrixXcd A = op.dense().cast<cplx>();
  Eigen::VectorXcd f = packet(op, 0.3, 0.7, 2.0);
  for (cplx z : {cplx(0.2, 0.01), cplx(-3.0, 1e-6), cplx(50.0, 2.0)}) {
    Eigen::VectorXcd u = op.solve(z, f);
    Eigen::VectorXcd r = A * u - z * u - f;
    EXPECT_LT(r.norm(), 1e-9 * (1.0 + u.norm())) << z;
    auto [ld, dld] = op.log_det(z);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A - z * Eigen::MatrixXcd::Identity(op.size(), op.size()));
    cplx ref = 0.0;
    for (int i = 0; i < op.size(); ++i) ref += std::log(lu.matrixLU()(i, i));
    EXPECT_NEAR(std::exp(ld - ref).real(), lu.permutationP().determinant(), 1e-8);
    cplx hstep(1e-6, 0.0);
    cplx fd = (op.log_det(z + hstep).first - op.log_det(z - hstep).first) / (2.0 * hstep);
    EXPECT_LT(std::abs(fd - dld), 1e-5 * std::max(1.0, std::abs(dld)));
  }
}

TEST(FDOperator, RealEigenvaluesMatchDense) {
  auto op = fd_operator(WeylPair::constant(1.0), 5.0, 0.1);
  Eigen::EigenSolver<Eigen::MatrixXd> es(op.dense());
  std::vector<double> ref;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    cplx l = es.eigenvalues()[i];
    if (std::abs(l.imag()) < 1e-9 && std::abs(l.real()) < 30.0) ref.push_back(l.real());
  }
  std::sort(ref.begin(), ref.end());
  auto got = op.real_eigenvalues(30.0);
  ASSERT_EQ(got.size(), ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(got[i], ref[i], 1e-9 * std::max(1.0, std::abs(ref[i])));
}

TEST(FDOperator, ExampleOneNonrealEigenvalues) {
  const double target = 0.66144;
  auto w = WeylPair::example1(-0.75, 0.5);
  double prev_err = 1.0;
  for (double h : {0.1, 0.05, 0.025}) {
    auto op = fd_operator(w, 60.0, h);
    auto up = op.eigenvalue_near(cplx(0.0, 1.0));
    auto dn = op.eigenvalue_near(cplx(0.0, -1.0));
    ASSERT_TRUE(up && dn) << h;
    EXPECT_NEAR(std::abs(*up - std::conj(*dn)), 0.0, 1e-10);
    double err = std::abs(*up - cplx(0.0, target));
    EXPECT_LT(err, prev_err);
    prev_err = err;
  }
  EXPECT_LT(prev_err, 5e-2);
  // doubling X moves the eigenvalue by less than 1e-3
  auto a = fd_operator(w, 30.0, 0.05).eigenvalue_near(cplx(0.0, 1.0));
  auto b = fd_operator(w, 60.0, 0.05).eigenvalue_near(cplx(0.0, 1.0));
  ASSERT_TRUE(a && b);
  EXPECT_LT(std::abs(*a - *b), 1e-3);
}

TEST(Resolvent, DiagonalCalibration) {
  Eigen::MatrixXcd B = Eigen::Vector3cd(1.0, 2.0, 3.0).asDiagonal();
  Eigen::VectorXcd f = Eigen::Vector3cd(1.0, 0.0, 0.0);
  EXPECT_NEAR(resolvent_integral(B, f, 0.1).value, std::numbers::pi, 1e-3);
  EXPECT_EQ(kind_of([&] { resolvent_integral(B, f, 0.0); }), ErrorKind::SolveFailure);
}

TEST(Resolvent, RandomHermitianCalibration) {
  std::mt19937 rng(17);
  std::normal_distribution<double> g;
  for (int m = 0; m < 5; ++m) {
    Eigen::MatrixXcd B = random_hermitian(rng, 50);
    Eigen::VectorXcd f(50);
    for (int i = 0; i < 50; ++i) f[i] = cplx(g(rng), g(rng));
    for (double eps : {1.0, 0.1, 0.01})
      EXPECT_NEAR(resolvent_integral(B, f, eps).value / f.squaredNorm(), std::numbers::pi, 1e-3) << m << " " << eps;
  }
}

TEST(Resolvent, SpectralSumMatchesQuadrature) {
  for (double a : {1.0, -1.0}) {
    auto op = fd_operator(WeylPair::constant(a), 4.0, 0.2);
    SpectralResolvent sr(op);
    Eigen::MatrixXcd B = op.dense().cast<cplx>();
    for (double s : {0.5, 1.5}) {
      Eigen::VectorXcd f = packet(op, 0.0, s, 1.0);
      for (double eps : {1.0, 0.3}) {
        double q = resolvent_integral(B, f, eps).value, e = sr.integral(f, eps);
        EXPECT_NEAR(e, q, 1e-6 * q) << a << " " << s << " " << eps;
      }
    }
  }
}

TEST(Resolvent, FiniteDifferenceDichotomy) {
  const std::vector<double> eps{1.0, 0.1, 0.01, 0.001};
  auto pos = SpectralResolvent(fd_operator(WeylPair::constant(1.0), 20.0, 0.1));
  auto neg = SpectralResolvent(fd_operator(WeylPair::constant(-1.0), 20.0, 0.1));
  EXPECT_TRUE(pos.nonreal_eigenvalues().empty());
  auto nr = neg.nonreal_eigenvalues();
  ASSERT_FALSE(nr.empty());
  // the integral is unbounded near eps = Im(lambda) of a nonreal eigenvalue
  auto op = fd_operator(WeylPair::constant(-1.0), 20.0, 0.1);
  Eigen::VectorXcd f = packet(op, 0.0, 1.0);
  double far = neg.integral(f, 1.0), near = neg.integral(f, nr.back().imag() * (1.0 + 1e-6));
  EXPECT_GT(near, 1e3 * far);
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> uc(-5.0, 5.0), us(0.3, 2.0), uk(0.0, 3.0);
  for (int i = 0; i < 10; ++i) {
    Eigen::VectorXcd g = packet(op, uc(rng), us(rng), uk(rng));
    auto scan = resolvent_scan(pos, g, eps);
    EXPECT_LT(scan.spread(), 3.0) << i;
    EXPECT_LT(scan.growth(), 3.0) << i;
  }
}

TEST(Evidence, Flags) {
  EXPECT_EQ(evidence_flag(Overall::SimilarSelfadjoint, true), Evidence::Consistent);
  EXPECT_EQ(evidence_flag(Overall::SimilarSelfadjoint, false), Evidence::Inconsistent);
  EXPECT_EQ(evidence_flag(Overall::NotSimilar, false), Evidence::Consistent);
  EXPECT_EQ(evidence_flag(Overall::NotSimilar, true), Evidence::Inconclusive);
  EXPECT_EQ(evidence_flag(Overall::Undecided, true), Evidence::Inconclusive);
  EXPECT_STREQ(to_string(Evidence::Inconsistent), "INCONSISTENT");
}
