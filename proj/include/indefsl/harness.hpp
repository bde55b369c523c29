#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <lapacke.h>

#include "classify.hpp"
#include "quad.hpp"
#include "weyl.hpp"

namespace indefsl::harness {

// ---- elliptic functions and potentials ----

inline double agm(double a, double b) {
  for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i) {
    double m = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = m;
  }
  return a;
}

// complete elliptic integral of the first kind, modulus k
inline double ellint_K(double k) {
  if (!(k >= 0.0 && k < 1.0)) throw Error(ErrorKind::ModulusOutOfRange, "modulus must be in [0, 1)");
  return std::numbers::pi / (2.0 * agm(1.0, std::sqrt(1.0 - k * k)));
}

// sn(x, k) by the descending AGM sequence
inline double jacobi_sn(double x, double k) {
  if (!(k >= 0.0 && k < 1.0)) throw Error(ErrorKind::ModulusOutOfRange, "modulus must be in [0, 1)");
  if (k == 0.0) return std::sin(x);
  std::vector<double> a{1.0}, c{k};
  double b = std::sqrt(1.0 - k * k);
  while (std::abs(c.back()) > 1e-16 && a.size() < 64) {
    double an = 0.5 * (a.back() + b);
    double cn = 0.5 * (a.back() - b);
    b = std::sqrt(a.back() * b);
    a.push_back(an);
    c.push_back(cn);
  }
  std::size_t n = a.size() - 1;
  double phi = std::ldexp(a[n] * x, static_cast<int>(n));
  for (std::size_t j = n; j >= 1; --j) phi = 0.5 * (phi + std::asin(c[j] / a[j] * std::sin(phi)));
  return std::sin(phi);
}

inline double q1(double x, double xi, double k) {
  if (!(k > 0.0 && k < 1.0)) throw Error(ErrorKind::ModulusOutOfRange, "modulus must be in (0, 1)");
  double kp = std::sqrt(1.0 - k * k);
  double s = jacobi_sn(x, kp);
  return (1.0 - k * k) * (2.0 * s * s - 1.0) + xi;
}

inline double q2(double x, double xi, double k) {
  if (!(k > 0.0 && k < 1.0)) throw Error(ErrorKind::ModulusOutOfRange, "modulus must be in (0, 1)");
  double kp = std::sqrt(1.0 - k * k);
  double s = jacobi_sn(x, kp);
  return -2.0 * k * k / (1.0 - (1.0 - k * k) * s * s) + 1.0 + k * k + xi;
}

// potential behind a closed-form pair; finite-zone data carries none
inline std::function<double(double)> potential_of(const WeylPair& w) {
  switch (w.kind) {
    case PairKind::Const: {
      double a = w.a;
      return [a](double) { return a; };
    }
    case PairKind::Example1: {
      double xi = w.xi, k = std::sqrt(w.k2);
      return [xi, k](double x) { return q1(x, xi, k); };
    }
    case PairKind::Example2: {
      double xi = w.xi, k = std::sqrt(w.k2);
      return [xi, k](double x) { return q2(x, xi, k); };
    }
    default: throw Error(ErrorKind::Usage, "no potential is attached to finite-zone data");
  }
}

// ---- Hilbert transform ----

struct Density {
  std::function<double(double)> f;
  std::vector<double> breakpoints;
  std::vector<Atom> atoms;
  double scale = 1.0;
  std::optional<Interval> support;  // compact support, if known
};

inline Density density_of(const WeylPair& w, Side side) {
  MeasurePair m = measures(w.data);
  Density d;
  d.f = side == Side::Plus ? m.density_plus : m.density_minus;
  d.breakpoints = side == Side::Plus ? m.edges_plus : m.edges_minus;
  d.atoms = side == Side::Plus ? m.atoms_plus : m.atoms_minus;
  d.scale = w.data.scale();
  return d;
}

namespace detail {

inline void tail_envelope_check(const std::function<double(double)>& f, double start) {
  double prev = -1.0;
  int grow = 0;
  for (int k = 0; k < 40; ++k) {
    double lo = start * std::ldexp(1.0, k), hi = 2.0 * lo;
    double inc = quad::integrate([&](double t) { return (std::abs(f(t)) + std::abs(f(-t))) / (1.0 + t); }, lo, hi, 1e-8);
    if (!std::isfinite(inc)) throw Error(ErrorKind::TailDivergence, "density tail is not integrable against 1/(1+|t|)");
    if (prev > 0.0) {
      grow = inc >= 0.97 * prev ? grow + 1 : 0;
      if (grow >= 6) throw Error(ErrorKind::TailDivergence, "density tail is not integrable against 1/(1+|t|)");
      if (inc <= 1e-16 * prev) return;
    } else if (inc == 0.0 && prev == 0.0) {
      return;
    }
    prev = inc;
  }
}

// integral of f(t) / (x - t) over [a, b], split at cuts, excluding (x - d, x + d)
inline double cauchy_outside(const Density& mu, double x, double d, double a, double b) {
  std::vector<double> pts{a, b};
  for (double c : mu.breakpoints)
    if (c > a && c < b) pts.push_back(c);
  for (double c : {x - d, x + d})
    if (c > a && c < b) pts.push_back(c);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  auto g = [&](double t) { return mu.f(t) / (x - t); };
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double lo = pts[i], hi = pts[i + 1];
    if (lo >= x - d && hi <= x + d) continue;
    s += quad::integrate(g, lo, hi, 1e-12);
  }
  return s;
}

inline double cauchy_excluded(const Density& mu, double x, double d) {
  if (mu.support) return cauchy_outside(mu, x, d, mu.support->lo, mu.support->hi);
  std::vector<double> pts = mu.breakpoints;
  pts.push_back(x - d);
  pts.push_back(x + d);
  std::sort(pts.begin(), pts.end());
  double lo = pts.front(), hi = pts.back();
  auto g = [&](double t) { return mu.f(t) / (x - t); };
  double s = cauchy_outside(mu, x, d, lo, hi);
  s += quad::integrate(g, hi, std::numeric_limits<double>::infinity());
  s += quad::integrate([&](double u) { return g(lo - u); }, 0.0, std::numeric_limits<double>::infinity());
  return s;
}

}  // namespace detail

// (1/pi) p.v. int dmu(t) / (x - t); symmetric exclusion with Richardson
// extrapolation in delta over {1e-2, 1e-3, 1e-4} * scale
inline double hilbert_pv(const Density& mu, double x) {
  if (!mu.support) {
    std::vector<double> pts = mu.breakpoints;
    pts.push_back(x);
    double start = 1.0;
    for (double p : pts) start = std::max(start, 2.0 * std::abs(p));
    detail::tail_envelope_check(mu.f, start);
  }
  double s = 0.0;
  for (const auto& a : mu.atoms)
    if (a.at != x) s += a.mass / (x - a.at);
  bool inside = !mu.support || (x > mu.support->lo && x < mu.support->hi);
  if (!inside) return (s + detail::cauchy_excluded(mu, x, 0.0)) / std::numbers::pi;
  // I(d) = H + c1 d + c3 d^3
  std::array<double, 3> d{1e-2 * mu.scale, 1e-3 * mu.scale, 1e-4 * mu.scale};
  Eigen::Matrix3d A;
  Eigen::Vector3d rhs;
  for (int i = 0; i < 3; ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = d[i];
    A(i, 2) = d[i] * d[i] * d[i];
    rhs(i) = detail::cauchy_excluded(mu, x, d[i]);
  }
  double h = A.colPivHouseholderQr().solve(rhs)(0);
  return (s + h) / std::numbers::pi;
}

inline double hilbert_pv(const std::function<double(double)>& f, double x, std::vector<double> breakpoints = {},
                         double scale = 1.0) {
  Density d{f, std::move(breakpoints), {}, scale, std::nullopt};
  return hilbert_pv(d, x);
}

// ---- test-function families ----

struct TestFunction {
  std::string id;
  std::function<double(double)> g;
  Interval support;
};

inline std::uint64_t seed_from_env(std::uint64_t fallback = 20240601) {
  if (const char* s = std::getenv("INDEFSL_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end != s) return v;
  }
  return fallback;
}

inline double smooth_bump(double t, double lo, double hi) {
  double u = (2.0 * t - lo - hi) / (hi - lo);
  if (!(std::abs(u) < 1.0)) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

// indicators of random band subintervals, smooth bumps, oscillatory bumps
inline std::vector<TestFunction> default_family(const WeylPair& w, Side side, std::uint64_t seed, int n = 30) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double sc = w.data.scale();
  std::vector<Interval> bands = side == Side::Plus ? w.data.bands_plus : reflect(w.data.bands_plus);
  std::vector<Interval> clipped;
  for (const auto& b : bands) {
    Interval c{std::max(b.lo, -4.0 * sc), std::min(b.hi, 4.0 * sc)};
    if (c.hi - c.lo > 1e-3 * sc) clipped.push_back(c);
  }
  if (clipped.empty()) throw Error(ErrorKind::InvalidBands, "no band inside the sampling window");
  std::vector<TestFunction> out;
  for (int i = 0; i < n; ++i) {
    const auto& b = clipped[i % clipped.size()];
    double len = b.hi - b.lo;
    double a = b.lo + len * (0.05 + 0.6 * u(rng));
    double c = std::min(b.hi - 0.02 * len, a + len * (0.05 + 0.3 * u(rng)));
    Interval s{a, c};
    int kind = i % 3;
    TestFunction f;
    f.support = s;
    if (kind == 0) {
      f.id = "indicator-" + std::to_string(i);
      f.g = [s](double t) { return (t > s.lo && t < s.hi) ? 1.0 : 0.0; };
    } else if (kind == 1) {
      f.id = "bump-" + std::to_string(i);
      f.g = [s](double t) { return smooth_bump(t, s.lo, s.hi); };
    } else {
      double om = 2.0 * std::numbers::pi * (1.0 + 4.0 * u(rng)) / (s.hi - s.lo);
      f.id = "oscillatory-" + std::to_string(i);
      f.g = [s, om](double t) { return smooth_bump(t, s.lo, s.hi) * std::cos(om * (t - s.lo)); };
    }
    out.push_back(std::move(f));
  }
  return out;
}

// bumps on [x0 + d, x0 + 2d], d = 10^-1 .. 10^-decades
inline std::vector<TestFunction> concentrating_family(double x0, int decades, int dir = 1) {
  std::vector<TestFunction> out;
  for (int k = 1; k <= decades; ++k) {
    double d = std::pow(10.0, -k);
    Interval s = dir > 0 ? Interval{x0 + d, x0 + 2 * d} : Interval{x0 - 2 * d, x0 - d};
    out.push_back({"concentrated-" + std::to_string(k), [s](double t) { return smooth_bump(t, s.lo, s.hi); }, s});
  }
  return out;
}

// ---- two-weight Hilbert inequality ----

struct TwoWeightRow {
  std::string id;
  double lhs = 0.0, rhs = 0.0, ratio = 0.0;
  bool divergent = false;  // weight not integrable against |g Sigma' + H(g dSigma)|^2
};

struct TwoWeightReport {
  std::vector<TwoWeightRow> rows;
  double max_ratio = 0.0;
};

namespace detail {

inline double w1_sum(const WeylPair& w, double t) {
  auto p = w.M(Side::Plus, cplx(t, 0.0)), m = w.M(Side::Minus, cplx(t, 0.0));
  if (!p || !m) return 0.0;
  double im = std::abs(p->imag()) + std::abs(m->imag());
  if (im == 0.0) return 0.0;
  return im / std::norm(*p - *m);
}

inline std::vector<double> real_cuts(const WeylPair& w) {
  std::vector<double> c = w.all_edges();
  c.push_back(0.0);
  for (double t : w.data.tau) {
    c.push_back(t);
    c.push_back(-t);
  }
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

template <class F>
double line_integral(F f, std::vector<double> cuts, double tol) {
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double s = quad::integrate(f, cuts.back(), std::numeric_limits<double>::infinity(), tol);
  s += quad::integrate([&](double u) { return f(cuts.front() - u); }, 0.0, std::numeric_limits<double>::infinity(), tol);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) s += quad::integrate(f, cuts[i], cuts[i + 1], tol);
  return s;
}

}  // namespace detail

// LHS: int (Im M+ + Im M-)/|D|^2 |g Sigma' + H(g dSigma)|^2 dt, RHS: int |g|^2 dSigma
inline TwoWeightReport two_weight_test(const WeylPair& w, Side side, const std::vector<TestFunction>& fns) {
  TwoWeightReport rep;
  Density base = density_of(w, side);
  std::vector<double> cuts = detail::real_cuts(w);
  for (const auto& fn : fns) {
    TwoWeightRow row;
    row.id = fn.id;
    Density gd;
    gd.f = [&](double t) { return fn.g(t) * base.f(t); };
    gd.breakpoints = base.breakpoints;
    gd.scale = base.scale;
    gd.support = fn.support;
    for (const auto& a : base.atoms)
      if (fn.g(a.at) != 0.0) gd.atoms.push_back({a.at, fn.g(a.at) * a.mass});
    row.rhs = quad::integrate([&](double t) { return fn.g(t) * fn.g(t) * base.f(t); }, fn.support.lo, fn.support.hi, 1e-10);
    for (const auto& a : base.atoms) row.rhs += fn.g(a.at) * fn.g(a.at) * a.mass;
    if (row.rhs == 0.0) {
      rep.rows.push_back(row);
      continue;
    }
    std::vector<double> oc = cuts;
    oc.push_back(fn.support.lo);
    oc.push_back(fn.support.hi);
    auto integrand = [&](double t) {
      double wt = detail::w1_sum(w, t);
      if (wt == 0.0) return 0.0;
      double v = gd.f(t) + hilbert_pv(gd, t);
      return wt * v * v;
    };
    for (double c : cuts)
      for (int dir : {1, -1})
        if (!row.divergent && quad::shell_test(integrand, c, 0.5 * base.scale, dir) == quad::Convergence::Divergent)
          row.divergent = true;
    if (row.divergent) {
      row.lhs = row.ratio = std::numeric_limits<double>::infinity();
      rep.max_ratio = row.ratio;
      rep.rows.push_back(row);
      continue;
    }
    row.lhs = detail::line_integral(integrand, oc, 1e-6);
    row.ratio = row.lhs / row.rhs;
    rep.max_ratio = std::max(rep.max_ratio, row.ratio);
    rep.rows.push_back(row);
  }
  return rep;
}

// ---- model-space integral ----

struct ModelIntegralRow {
  double epsilon = 0.0;
  double lhs = 0.0;
  double g_norm2 = 0.0;
};

// int (Im M+ + Im M-)(z)/|D(z)|^2 |int g dSigma / (t - z)|^2 d eta, z = eta + i eps
inline std::vector<ModelIntegralRow> model_integral_check(const WeylPair& w, Side side, const TestFunction& g,
                                                          const std::vector<double>& eps_grid) {
  Density base = density_of(w, side);
  double norm2 = quad::integrate([&](double t) { return g.g(t) * g.g(t) * base.f(t); }, g.support.lo, g.support.hi, 1e-10);
  for (const auto& a : base.atoms) norm2 += g.g(a.at) * g.g(a.at) * a.mass;
  std::vector<ModelIntegralRow> out;
  for (double eps : eps_grid) {
    ModelIntegralRow row{eps, 0.0, norm2};
    if (norm2 == 0.0) {
      out.push_back(row);
      continue;
    }
    auto cauchy = [&](double eta) {
      cplx z(eta, eps);
      std::vector<double> pts{g.support.lo, g.support.hi};
      if (eta > g.support.lo && eta < g.support.hi) pts.insert(pts.begin() + 1, eta);
      cplx s = 0.0;
      for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        s += quad::integrate_c([&](double t) { return g.g(t) * base.f(t) / (t - z); }, pts[i], pts[i + 1], 1e-9);
      for (const auto& a : base.atoms) s += g.g(a.at) * a.mass / (a.at - z);
      return s;
    };
    std::vector<double> cuts = detail::real_cuts(w);
    cuts.push_back(g.support.lo);
    cuts.push_back(g.support.hi);
    row.lhs = detail::line_integral(
        [&](double eta) {
          cplx z(eta, eps);
          auto p = w.M(Side::Plus, z), m = w.M(Side::Minus, z);
          if (!p || !m) return 0.0;
          double wt = (p->imag() + m->imag()) / std::norm(*p - *m);
          return wt * std::norm(cauchy(eta));
        },
        cuts, 1e-6);
    out.push_back(row);
  }
  return out;
}

// ---- finite-difference operator ----

// (sgn x)(-D_h^2 + q) on the cell-centred grid x_i = -X + (i + 1/2) h,
// Dirichlet ends; the grid never hits x = 0
struct FDOperator {
  double X = 40.0, h = 0.05;
  std::vector<double> x, sgn, diag, lower, upper;  // lower[i] = A(i+1, i), upper[i] = A(i, i+1)

  int size() const { return static_cast<int>(x.size()); }

  static FDOperator build(const std::function<double(double)>& q, double X = 40.0, double h = 0.05) {
    if (!(X > 0.0 && h > 0.0 && h < X)) throw Error(ErrorKind::Usage, "FD grid needs 0 < h < X");
    FDOperator op;
    op.X = X;
    op.h = h;
    int n = static_cast<int>(std::lround(2.0 * X / h));
    double ih2 = 1.0 / (h * h);
    for (int i = 0; i < n; ++i) {
      double xi = -X + (i + 0.5) * h;
      double s = xi < 0.0 ? -1.0 : 1.0;
      op.x.push_back(xi);
      op.sgn.push_back(s);
      op.diag.push_back(s * (2.0 * ih2 + q(xi)));
    }
    for (int i = 0; i + 1 < n; ++i) {
      op.upper.push_back(-op.sgn[i] * ih2);
      op.lower.push_back(-op.sgn[i + 1] * ih2);
    }
    return op;
  }

  double norm_bound() const {
    double m = 0.0;
    for (int i = 0; i < size(); ++i) {
      double r = std::abs(diag[i]);
      if (i > 0) r += std::abs(upper[i - 1]);
      if (i + 1 < size()) r += std::abs(lower[i]);
      m = std::max(m, r);
    }
    return m;
  }

  // max |(JA)_{ij} - (JA)_{ji}| over the off-diagonals
  double j_asymmetry() const {
    double m = 0.0;
    for (int i = 0; i + 1 < size(); ++i) m = std::max(m, std::abs(sgn[i] * upper[i] - sgn[i + 1] * lower[i]));
    return m;
  }

  Eigen::MatrixXd dense() const {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(size(), size());
    for (int i = 0; i < size(); ++i) A(i, i) = diag[i];
    for (int i = 0; i + 1 < size(); ++i) {
      A(i, i + 1) = upper[i];
      A(i + 1, i) = lower[i];
    }
    return A;
  }

  // (A - z)^{-1} f, tridiagonal elimination with partial pivoting
  Eigen::VectorXcd solve(cplx z, const Eigen::VectorXcd& f) const {
    const int n = size();
    std::vector<cplx> d(n), du(n), dl(n), du2(n);
    for (int i = 0; i < n; ++i) d[i] = diag[i] - z;
    for (int i = 0; i + 1 < n; ++i) {
      du[i] = upper[i];
      dl[i] = lower[i];
    }
    Eigen::VectorXcd b = f;
    for (int i = 0; i + 1 < n; ++i) {
      if (std::abs(d[i]) >= std::abs(dl[i])) {
        if (d[i] == 0.0) throw Error(ErrorKind::SolveFailure, "singular shifted system");
        cplx m = dl[i] / d[i];
        d[i + 1] -= m * du[i];
        b[i + 1] -= m * b[i];
        du2[i] = 0.0;
      } else {
        cplx m = d[i] / dl[i];
        d[i] = dl[i];
        cplx t = d[i + 1];
        d[i + 1] = du[i] - m * t;
        du2[i] = i + 2 < n ? du[i + 1] : cplx(0.0);
        if (i + 2 < n) du[i + 1] = -m * du2[i];
        du[i] = t;
        std::swap(b[i], b[i + 1]);
        b[i + 1] -= m * b[i];
      }
    }
    if (d[n - 1] == 0.0) throw Error(ErrorKind::SolveFailure, "singular shifted system");
    Eigen::VectorXcd xv(n);
    xv[n - 1] = b[n - 1] / d[n - 1];
    if (n > 1) xv[n - 2] = (b[n - 2] - du[n - 2] * xv[n - 1]) / d[n - 2];
    for (int i = n - 3; i >= 0; --i) xv[i] = (b[i] - du[i] * xv[i + 1] - du2[i] * xv[i + 2]) / d[i];
    return xv;
  }

  // log det(A - z) and its derivative via the continuant ratios
  std::pair<cplx, cplx> log_det(cplx z) const {
    cplx r = diag[0] - z, dr = -1.0;
    cplx ld = std::log(r), dld = dr / r;
    for (int k = 1; k < size(); ++k) {
      cplx p = upper[k - 1] * lower[k - 1];
      cplx rn = diag[k] - z - p / r;
      cplx drn = -1.0 + p * dr / (r * r);
      r = rn;
      dr = drn;
      ld += std::log(r);
      dld += dr / r;
    }
    return {ld, dld};
  }

  int det_sign(double eta) const {
    double r = diag[0] - eta;
    int s = r < 0 ? -1 : 1;
    for (int k = 1; k < size(); ++k) {
      double p = upper[k - 1] * lower[k - 1];
      if (r == 0.0) r = 1e-300;
      r = diag[k] - eta - p / r;
      if (r < 0) s = -s;
    }
    return s;
  }

  // real eigenvalues in [-L, L] from sign changes of det(A - eta)
  std::vector<double> real_eigenvalues(double L) const {
    std::vector<double> out;
    double t = -L;
    int s = det_sign(t);
    while (t < L) {
      double step = 1e-3 * std::max(1.0, std::abs(t));
      double tn = std::min(L, t + step);
      int sn = det_sign(tn);
      if (sn != s) {
        double a = t, b = tn;
        for (int i = 0; i < 60; ++i) {
          double m = 0.5 * (a + b);
          (det_sign(m) == s ? a : b) = m;
        }
        out.push_back(0.5 * (a + b));
      }
      t = tn;
      s = sn;
    }
    return out;
  }

  // Newton on log det from the given start
  std::optional<cplx> eigenvalue_near(cplx z0, int iters = 100) const {
    cplx z = z0;
    for (int i = 0; i < iters; ++i) {
      auto [ld, dld] = log_det(z);
      if (dld == 0.0) return std::nullopt;
      cplx step = 1.0 / dld;
      z -= step;
      if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(z))) return z;
    }
    return std::nullopt;
  }
};

inline FDOperator fd_operator(const WeylPair& w, double X = 40.0, double h = 0.05) {
  return FDOperator::build(potential_of(w), X, h);
}

// ---- resolvent integral ----

struct ResolventResult {
  double value = 0.0;  // eps * int ||R(eta + i eps) f||^2 d eta
  double H = 0.0;      // truncation point of the peak-resolved part
  int evaluations = 0;
};

namespace detail {

// eps * int ||R(eta + i eps) f||^2 with peaks at the given breakpoints;
// depth bounds the adaptive refinement per segment
template <class NormSq>
ResolventResult resolvent_quadrature(NormSq nsq, std::vector<double> peaks, double eps, double H, double window,
                                     unsigned depth, double tol) {
  ResolventResult res;
  res.H = H;
  std::sort(peaks.begin(), peaks.end());
  peaks.erase(std::unique(peaks.begin(), peaks.end()), peaks.end());
  auto f = [&](double eta) {
    ++res.evaluations;
    return nsq(cplx(eta, eps));
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double total = 0.0;
  // peak segments, Lorentzian substitution eta = p + eps tan(theta)
  double lo = -window, hi = window;
  std::vector<double> inside;
  for (double p : peaks)
    if (p > lo && p < hi) inside.push_back(p);
  std::vector<double> bnd{lo};
  for (std::size_t i = 0; i + 1 < inside.size(); ++i) bnd.push_back(0.5 * (inside[i] + inside[i + 1]));
  bnd.push_back(hi);
  if (inside.empty()) {
    total += GK::integrate(f, lo, hi, depth, tol);
  } else {
    for (std::size_t k = 0; k < inside.size(); ++k) {
      double p = inside[k];
      double ta = std::atan((bnd[k] - p) / eps), tb = std::atan((bnd[k + 1] - p) / eps);
      total += GK::integrate(
          [&](double th) {
            double c = std::cos(th);
            return f(p + eps * std::tan(th)) * eps / (c * c);
          },
          ta, tb, depth, tol);
    }
  }
  // beyond the window: eta = +-window e^s up to H, then the tails
  if (H > hi) {
    double smax = std::log(H / hi);
    for (double sg : {1.0, -1.0})
      total += GK::integrate(
          [&](double u) {
            double e = hi * std::exp(u);
            return f(sg * e) * e;
          },
          0.0, smax, depth, tol);
  }
  double top = std::max(H, hi);
  total += quad::integrate(f, top, std::numeric_limits<double>::infinity(), 1e-12);
  total += quad::integrate([&](double u) { return f(-top - u); }, 0.0, std::numeric_limits<double>::infinity(), 1e-12);
  res.value = eps * total;
  return res;
}

}  // namespace detail

// dense operator; per-node solves go through the Schur form B = U T U*
inline ResolventResult resolvent_integral(const Eigen::MatrixXcd& B, const Eigen::VectorXcd& f, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::SolveFailure, "epsilon must be positive");
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(B);
  const Eigen::MatrixXcd& T = schur.matrixT();
  Eigen::VectorXcd g = schur.matrixU().adjoint() * f;
  std::vector<double> peaks;
  for (int i = 0; i < T.rows(); ++i) peaks.push_back(T(i, i).real());
  double nb = B.cwiseAbs().rowwise().sum().maxCoeff();
  double H = 4.0 * (nb + 1.0);
  auto nsq = [&](cplx z) {
    Eigen::MatrixXcd S = T;
    S.diagonal().array() -= z;
    Eigen::VectorXcd y = S.triangularView<Eigen::Upper>().solve(g);
    return y.squaredNorm();
  };
  return detail::resolvent_quadrature(nsq, peaks, eps, H, nb + 1.0, 15, 1e-10);
}

// eigen-expansion A = V diag(lambda) V^{-1} of a finite-difference operator;
// eps * int ||R(eta + i eps) f||^2 d eta is then a finite sum of residues
class SpectralResolvent {
 public:
  explicit SpectralResolvent(const FDOperator& op) : n_(op.size()) {
    Eigen::MatrixXd A = op.dense();
    Eigen::VectorXd wr(n_), wi(n_);
    Eigen::MatrixXd vr(n_, n_);
    lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'V', n_, A.data(), n_, wr.data(), wi.data(), nullptr, n_,
                                    vr.data(), n_);
    if (info != 0) throw Error(ErrorKind::SolveFailure, "eigen-decomposition failed");
    lambda_.resize(n_);
    V_.resize(n_, n_);
    for (int j = 0; j < n_;) {
      if (wi[j] == 0.0) {
        lambda_[j] = wr[j];
        V_.col(j) = vr.col(j).cast<cplx>();
        ++j;
      } else {
        lambda_[j] = cplx(wr[j], wi[j]);
        lambda_[j + 1] = std::conj(lambda_[j]);
        V_.col(j) = vr.col(j).cast<cplx>() + cplx(0.0, 1.0) * vr.col(j + 1).cast<cplx>();
        V_.col(j + 1) = V_.col(j).conjugate();
        j += 2;
      }
    }
    G_.setZero(n_, n_);
    G_.selfadjointView<Eigen::Lower>().rankUpdate(V_.adjoint());
    G_.triangularView<Eigen::StrictlyUpper>() = G_.adjoint();
    lu_.compute(V_);
  }

  int size() const { return n_; }
  const Eigen::VectorXcd& eigenvalues() const { return lambda_; }

  // eigenvalues with Im > tol, sorted by imaginary part
  std::vector<cplx> nonreal_eigenvalues(double tol = 1e-9) const {
    std::vector<cplx> out;
    for (int i = 0; i < n_; ++i)
      if (lambda_[i].imag() > tol) out.push_back(lambda_[i]);
    std::sort(out.begin(), out.end(), [](cplx a, cplx b) { return a.imag() < b.imag(); });
    return out;
  }

  // +inf when eps hits the imaginary part of an eigenvalue
  double integral(const Eigen::VectorXcd& f, double eps) const {
    if (!(eps > 0.0)) throw Error(ErrorKind::SolveFailure, "epsilon must be positive");
    Eigen::VectorXcd c = lu_.solve(f);
    const cplx two_pi_i(0.0, 2.0 * std::numbers::pi);
    cplx total = 0.0;
    for (int k = 0; k < n_; ++k) {
      cplx a = lambda_[k] - cplx(0.0, eps);
      if (std::abs(a.imag()) <= 1e-14 * std::max(1.0, eps)) return std::numeric_limits<double>::infinity();
      cplx row = 0.0;
      for (int j = 0; j < n_; ++j) {
        cplx b = std::conj(lambda_[j]) + cplx(0.0, eps);
        double ia = a.imag(), ib = b.imag();
        if (ia < 0.0 && ib > 0.0)
          row += std::conj(c[j]) * G_(j, k) * two_pi_i / (b - a);
        else if (ia > 0.0 && ib < 0.0)
          row += std::conj(c[j]) * G_(j, k) * two_pi_i / (a - b);
      }
      total += row * c[k];
    }
    return eps * total.real();
  }

 private:
  int n_;
  Eigen::VectorXcd lambda_;
  Eigen::MatrixXcd V_, G_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

inline ResolventResult resolvent_integral(const SpectralResolvent& sr, const Eigen::VectorXcd& f, double eps) {
  ResolventResult res;
  res.value = sr.integral(f, eps);
  res.H = std::numeric_limits<double>::infinity();
  return res;
}

struct ResolventScan {
  std::vector<double> epsilon, value;

  // max over the grid relative to the first (largest) epsilon
  double growth() const { return *std::max_element(value.begin(), value.end()) / value.front(); }
  double spread() const {
    auto [lo, hi] = std::minmax_element(value.begin(), value.end());
    return *hi / *lo;
  }
};

inline ResolventScan resolvent_scan(const SpectralResolvent& sr, const Eigen::VectorXcd& f,
                                    const std::vector<double>& eps_grid) {
  ResolventScan out;
  for (double e : eps_grid) {
    out.epsilon.push_back(e);
    out.value.push_back(sr.integral(f, e));
  }
  return out;
}

// wave packet exp(-(x - c)^2 / (2 s^2)) cos(k x) sampled on the grid, unit norm
inline Eigen::VectorXcd packet(const FDOperator& op, double c, double s, double k = 0.0) {
  Eigen::VectorXcd v(op.size());
  for (int i = 0; i < op.size(); ++i) {
    double t = (op.x[i] - c) / s;
    v[i] = std::exp(-0.5 * t * t) * std::cos(k * op.x[i]);
  }
  return v / v.norm();
}

enum class Evidence { Consistent, Inconsistent, Inconclusive };

inline const char* to_string(Evidence e) {
  switch (e) {
    case Evidence::Consistent: return "CONSISTENT";
    case Evidence::Inconsistent: return "INCONSISTENT";
    case Evidence::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

inline Evidence evidence_flag(Overall verdict, bool bounded) {
  if (verdict == Overall::SimilarSelfadjoint) return bounded ? Evidence::Consistent : Evidence::Inconsistent;
  if (verdict == Overall::NotSimilar) return bounded ? Evidence::Inconclusive : Evidence::Consistent;
  return Evidence::Inconclusive;
}

}  // namespace indefsl::harness
