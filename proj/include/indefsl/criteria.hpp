#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "quad.hpp"
#include "spectrum.hpp"
#include "weyl.hpp"

namespace indefsl {

struct Matrix2C {
  cplx a11{}, a12{}, a21{}, a22{};

  Matrix2C adjoint() const { return {std::conj(a11), std::conj(a21), std::conj(a12), std::conj(a22)}; }
  cplx det() const { return a11 * a22 - a12 * a21; }
  cplx trace() const { return a11 + a22; }

  friend Matrix2C operator*(const Matrix2C& x, const Matrix2C& y) {
    return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
            x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
  }
  friend Matrix2C operator+(const Matrix2C& x, const Matrix2C& y) {
    return {x.a11 + y.a11, x.a12 + y.a12, x.a21 + y.a21, x.a22 + y.a22};
  }
  friend Matrix2C operator-(const Matrix2C& x, const Matrix2C& y) {
    return {x.a11 - y.a11, x.a12 - y.a12, x.a21 - y.a21, x.a22 - y.a22};
  }
  friend Matrix2C operator*(cplx s, const Matrix2C& x) { return {s * x.a11, s * x.a12, s * x.a21, s * x.a22}; }

  bool finite() const {
    for (cplx v : {a11, a12, a21, a22})
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

  // eigenvalues of the Hermitian part, ascending
  std::array<double, 2> hermitian_eigs() const {
    double p = 0.5 * (a11.real() + a22.real());
    double q = 0.5 * (a11.real() - a22.real());
    cplx off = 0.5 * (a12 + std::conj(a21));
    double r = std::hypot(q, std::abs(off));
    return {p - r, p + r};
  }

  // largest singular value
  double norm() const { return std::sqrt(std::max(0.0, (adjoint() * *this).hermitian_eigs()[1])); }

  double max_abs() const { return std::max({std::abs(a11), std::abs(a12), std::abs(a21), std::abs(a22)}); }
};

inline const Matrix2C J_form{0.0, cplx(0, -1), cplx(0, 1), 0.0};

struct CharFunction {
  Matrix2C theta, omega, omega_star;
  double c255 = 0.0, c256 = 0.0, c258 = 0.0;
};

inline CharFunction char_function(const WeylPair& w, cplx z) {
  if (z.imag() == 0.0) throw Error(ErrorKind::EdgeEvaluation, "characteristic function needs a nonreal point");
  auto p = w.M(Side::Plus, z), m = w.M(Side::Minus, z);
  if (!p || !m) throw Error(ErrorKind::PoleHit, "M has a pole at the requested point");
  cplx mp = *p, mm = *m;
  cplx d = mp - mm;
  if (std::abs(d) <= 1e-12 * std::max(1.0, std::abs(mp) + std::abs(mm)))
    throw Error(ErrorKind::DegenerateD, "M+ - M- vanishes at the requested point");
  CharFunction c;
  c.theta = (1.0 / (mm - mp)) * Matrix2C{mp + mm, 2.0 * mp * mm, 2.0, mp + mm};
  c.omega = J_form - c.theta * J_form * c.theta.adjoint();
  c.omega_star = J_form - c.theta.adjoint() * J_form * c.theta;
  double d2 = std::norm(d);
  c.c255 = ((mp + mm).imag() + std::norm(mp) * mm.imag() + std::norm(mm) * mp.imag()) / d2;
  c.c256 = mp.imag() * mm.imag() / d2;
  double ad = std::abs(d);
  c.c258 = std::max({std::abs(mp + mm) / ad, 1.0 / ad, std::abs(mp * mm) / ad});
  return c;
}

// Report shared by the sup/inf scans. Status strings are part of the
// `check` output format.
struct CriterionReport {
  std::string name;
  double value = 0.0;
  std::string status;
  std::optional<cplx> witness;
  std::optional<Interval> witness_interval;
  std::vector<std::string> notes;
};

namespace detail {

inline bool cfinite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

// number of trailing steps with factor >= f in a refinement sequence
inline int trailing_run(const std::vector<double>& r, double f) {
  int run = 0;
  for (std::size_t i = 1; i < r.size(); ++i) {
    bool up = std::isinf(r[i]) || (r[i - 1] > 0.0 && r[i] >= f * r[i - 1]) ||
              (r[i - 1] == 0.0 && r[i] > 0.0);
    run = up ? run + 1 : 0;
  }
  return run;
}

// boundary value from above; points within the pole window of a root of S
// are approached from a tiny imaginary offset
inline std::optional<cplx> boundary_M(const WeylPair& w, Side side, double t) {
  auto v = w.M(side, cplx(t, 0.0));
  if (!v && w.data.S.eval(side == Side::Plus ? t : -t) != 0.0) v = w.M(side, cplx(t, 1e-300));
  return v;
}

inline double max_finite(double a, double b) { return std::isnan(b) ? a : std::max(a, b); }

// real points where boundary quantities may blow up
inline std::vector<double> critical_points(const WeylPair& w, const SpectrumResult& spec) {
  std::vector<double> pts = w.all_edges();
  pts.push_back(0.0);
  for (double z : spec.embedded_zeros) pts.push_back(z);
  for (const auto& e : spec.eigenvalues)
    if (e.z.imag() == 0.0) pts.push_back(e.z.real());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// |Im M(t)| / |D(t)| at a real point, max over both sides
inline double necessary_value(const WeylPair& w, double t) {
  auto p = boundary_M(w, Side::Plus, t), m = boundary_M(w, Side::Minus, t);
  if (!p || !m) return std::numeric_limits<double>::quiet_NaN();
  double num = std::max(std::abs(p->imag()), std::abs(m->imag()));
  if (num == 0.0) return 0.0;
  double den = std::abs(*p - *m);
  if (den <= 1e-13 * (std::abs(*p) + std::abs(*m))) return std::numeric_limits<double>::infinity();
  return num / den;
}

inline double sum_ratio(const WeylPair& w, cplx z) {
  auto p = w.M(Side::Plus, z), m = w.M(Side::Minus, z);
  if (!p || !m) return std::numeric_limits<double>::quiet_NaN();
  double den = std::abs(*p - *m);
  if (den <= 1e-13 * (std::abs(*p) + std::abs(*m))) return std::numeric_limits<double>::infinity();
  return std::abs(*p + *m) / den;
}

}  // namespace detail

// sup over real points of |Im M(t)/D(t)| for both signs
inline CriterionReport necessary_ratio(const WeylPair& w, const std::vector<double>& grid,
                                       const SpectrumResult& spec) {
  CriterionReport r;
  r.name = "necessary_ratio";
  int used = 0;
  for (double t : grid) {
    double v = detail::necessary_value(w, t);
    if (std::isnan(v)) continue;
    ++used;
    if (!r.witness || v > r.value) {
      r.value = v;
      r.witness = cplx(t, 0.0);
    }
  }
  if (used == 0) {
    r.status = "BOUNDED";
    r.notes.push_back("empty admissible grid");
    return r;
  }
  std::vector<double> centers = detail::critical_points(w, spec);
  if (r.witness) centers.push_back(r.witness->real());
  for (double c : centers) {
    std::vector<double> seq;
    for (int m = 2; m <= 8; ++m) {
      double h = std::pow(10.0, -m) * w.data.scale();
      double v = std::max(detail::max_finite(0.0, detail::necessary_value(w, c + h)),
                          detail::max_finite(0.0, detail::necessary_value(w, c - h)));
      seq.push_back(v);
      r.value = std::max(r.value, v);
    }
    if (detail::trailing_run(seq, 3.0) >= 3) {
      r.status = "UNBOUNDED";
      r.value = std::numeric_limits<double>::infinity();
      r.witness = cplx(c, 0.0);
      return r;
    }
  }
  r.status = std::isfinite(r.value) ? "BOUNDED" : "UNBOUNDED";
  return r;
}

// default real grid: uniform on [-8 scale, 8 scale]
inline std::vector<double> default_real_grid(const WeylPair& w, int n = 4001) {
  double L = 8.0 * w.data.scale();
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(-L + 2.0 * L * i / (n - 1));
  return g;
}

inline CriterionReport necessary_ratio(const WeylPair& w) {
  return necessary_ratio(w, default_real_grid(w), eigenvalues(w));
}

// log-polar grid in the upper half plane: radii 1e-4..1e4, 32 angles, plus
// the boundary offsets +-r + 1e-6 i
inline std::vector<cplx> log_polar_grid(bool upper = true, double r_lo = 1e-4, double r_hi = 1e4,
                                        int per_decade = 8, double offset = 1e-6) {
  std::vector<cplx> g;
  int decades = static_cast<int>(std::lround(std::log10(r_hi / r_lo)));
  double sgn = upper ? 1.0 : -1.0;
  for (int k = 0; k <= decades * per_decade; ++k) {
    double r = r_lo * std::pow(10.0, static_cast<double>(k) / per_decade);
    for (int j = 0; j < 32; ++j) g.push_back(std::polar(r, sgn * (j + 0.5) * std::numbers::pi / 32));
    g.emplace_back(r, sgn * offset);
    g.emplace_back(-r, sgn * offset);
  }
  return g;
}

inline CriterionReport sufficient_sum_ratio(const WeylPair& w, const std::vector<cplx>& grid,
                                            const SpectrumResult& spec) {
  CriterionReport r;
  r.name = "sufficient_sum_ratio";
  r.notes.push_back("sufficient condition only; it is not necessary");
  for (cplx z : grid) {
    double v = detail::sum_ratio(w, z);
    if (std::isnan(v)) continue;
    if (!r.witness || v > r.value) {
      r.value = v;
      r.witness = z;
    }
  }
  std::vector<cplx> centers;
  for (double c : detail::critical_points(w, spec)) centers.emplace_back(c, 0.0);
  for (const auto& e : spec.eigenvalues)
    if (e.z.imag() > 0.0) centers.push_back(e.z);
  if (r.witness) centers.emplace_back(r.witness->real(), 0.0);
  for (cplx c : centers) {
    std::vector<double> seq;
    for (int m = 2; m <= 8; ++m) {
      double h = std::pow(10.0, -m) * w.data.scale();
      double v = 0.0;
      if (c.imag() == 0.0) v = detail::max_finite(0.0, detail::sum_ratio(w, c + cplx(0, h)));
      else
        v = std::max(detail::max_finite(0.0, detail::sum_ratio(w, c + h)),
                     detail::max_finite(0.0, detail::sum_ratio(w, c - h)));
      seq.push_back(v);
    }
    if (detail::trailing_run(seq, 3.0) >= 3) {
      r.status = "UNBOUNDED";
      r.value = std::numeric_limits<double>::infinity();
      r.witness = c;
      return r;
    }
  }
  r.status = std::isfinite(r.value) ? "SUFFICIENT-HOLDS" : "UNBOUNDED";
  return r;
}

inline CriterionReport sufficient_sum_ratio(const WeylPair& w) {
  return sufficient_sum_ratio(w, log_polar_grid(), eigenvalues(w));
}

// ---- (A2) weights ----

// local power behaviour |t - t_j|^alpha_j near t_j and |t|^alpha_inf at infinity
struct PowerProfile {
  std::vector<std::pair<double, double>> points;
  double alpha_inf = 0.0;
};

struct A2Options {
  std::vector<double> centers;  // empty: -4..4 step 0.5
  int m_lo = -20, m_hi = 20;
  double bound = 1e3;
};

struct A2Result {
  bool pass = false;
  double sup = 0.0;
  std::optional<Interval> witness;
  std::string method;
  bool non_integrable = false;
};

namespace detail {

// local integrability of f at x0 from one side via dyadic shells;
// logarithmic divergence counts as divergent
template <class F>
quad::Convergence local_integrability(F f, double x0, int dir) {
  double prev = -1.0;
  int grow = 0, decay = 0;
  for (int m = 2; m < 60; ++m) {
    double hi = std::ldexp(1.0, -m), lo = hi / 2;
    double inc = std::abs(quad::integrate([&](double s) { return f(x0 + dir * s); }, lo, hi, 1e-10));
    if (!std::isfinite(inc)) return quad::Convergence::Divergent;
    if (prev > 0.0) {
      double q = inc / prev;
      if (q >= 0.97) { ++grow; decay = 0; }
      else if (q <= 0.95) { ++decay; grow = 0; }
      else { grow = 0; decay = 0; }
      if (grow >= 6) return quad::Convergence::Divergent;
      if (decay >= 6) return quad::Convergence::Convergent;
    } else if (prev == 0.0 && inc == 0.0 && ++decay >= 6) {
      return quad::Convergence::Convergent;
    }
    prev = inc;
  }
  return quad::Convergence::Undecided;
}

template <class F>
double a2_product(F w, double a, double b) {
  double L = b - a;
  double i1 = quad::integrate(w, a, b, 1e-8);
  double i2 = quad::integrate([&](double t) { return 1.0 / w(t); }, a, b, 1e-8);
  return (i1 / L) * (i2 / L);
}

}  // namespace detail

inline A2Result a2_check(const std::function<double(double)>& w, const A2Options& opt = {},
                         const std::optional<PowerProfile>& profile = std::nullopt) {
  A2Result res;
  if (profile) {
    res.method = "exponent";
    for (const auto& [t, a] : profile->points) {
      if (!(a > -1.0 && a < 1.0)) {
        res.pass = false;
        res.non_integrable = true;
        res.witness = Interval{t - 0.0625, t + 0.0625};
        res.sup = std::numeric_limits<double>::infinity();
        return res;
      }
    }
    if (!(profile->alpha_inf > -1.0 && profile->alpha_inf < 1.0)) {
      res.pass = false;
      res.witness = Interval{-std::ldexp(1.0, opt.m_hi), std::ldexp(1.0, opt.m_hi)};
      res.sup = std::numeric_limits<double>::infinity();
      return res;
    }
    res.pass = true;
    return res;
  }

  res.method = "scan";
  std::vector<double> centers = opt.centers;
  if (centers.empty())
    for (int i = -8; i <= 8; ++i) centers.push_back(0.5 * i);

  auto inv = [&](double t) { return 1.0 / w(t); };
  for (double c : centers) {
    for (int dir : {1, -1}) {
      if (detail::local_integrability(inv, c, dir) == quad::Convergence::Divergent ||
          detail::local_integrability(w, c, dir) == quad::Convergence::Divergent) {
        res.pass = false;
        res.non_integrable = true;
        res.sup = std::numeric_limits<double>::infinity();
        res.witness = dir > 0 ? Interval{c, c + 0.0625} : Interval{c - 0.0625, c};
        return res;
      }
    }
  }

  auto scan = [&](const std::vector<double>& cs, int m_lo, int m_hi, double& sup,
                  std::optional<Interval>& wit) -> bool {
    for (double c : cs) {
      std::array<std::vector<double>, 3> seq;
      for (int m = m_hi; m >= m_lo; --m) {
        double L = std::ldexp(1.0, m);
        std::array<Interval, 3> ivs{Interval{c - L / 2, c + L / 2}, Interval{c, c + L}, Interval{c - L, c}};
        for (int k = 0; k < 3; ++k) {
          double p = detail::a2_product(w, ivs[k].lo, ivs[k].hi);
          if (!std::isfinite(p)) p = std::numeric_limits<double>::infinity();
          seq[k].push_back(p);
          if (p > sup) {
            sup = p;
            wit = ivs[k];
          }
          if (detail::trailing_run(seq[k], 2.0) >= 3) {
            wit = ivs[k];
            return false;
          }
        }
      }
    }
    return true;
  };

  double sup = 0.0;
  std::optional<Interval> wit;
  if (!scan(centers, opt.m_lo, opt.m_hi, sup, wit)) {
    res.pass = false;
    res.sup = std::numeric_limits<double>::infinity();
    res.witness = wit;
    return res;
  }
  // one refinement: midpoints and one extra length at each end
  std::vector<double> mids;
  for (std::size_t i = 0; i + 1 < centers.size(); ++i) mids.push_back(0.5 * (centers[i] + centers[i + 1]));
  double sup2 = sup;
  std::optional<Interval> wit2 = wit;
  bool ok = scan(mids, opt.m_lo - 1, opt.m_hi + 1, sup2, wit2);
  res.sup = sup2;
  res.witness = wit2;
  res.pass = ok && sup2 <= opt.bound && sup2 <= 1.5 * sup + 1e-9;
  return res;
}

// ---- Muckenhoupt-type pair condition ----

namespace detail {

inline double overlap_length(const std::vector<Interval>& E, double a, double b) {
  double s = 0.0;
  for (const auto& iv : E) {
    double lo = std::max(a, iv.lo), hi = std::min(b, iv.hi);
    if (hi > lo) s += hi - lo;
  }
  return s;
}

// integral of f over [a, b] intersected with E, split at the given points
template <class F>
double integrate_on(F f, const std::vector<Interval>& E, double a, double b, const std::vector<double>& cuts) {
  double s = 0.0;
  for (const auto& iv : E) {
    double lo = std::max(a, iv.lo), hi = std::min(b, iv.hi);
    if (!(hi > lo)) continue;
    std::vector<double> pts{lo, hi};
    for (double c : cuts)
      if (c > lo && c < hi) pts.push_back(c);
    std::sort(pts.begin(), pts.end());
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) s += quad::integrate(f, pts[k], pts[k + 1], 1e-9);
  }
  return s;
}

inline double im_boundary(const WeylPair& w, Side side, double t) {
  auto v = boundary_M(w, side, t);
  return v ? std::abs(v->imag()) : 0.0;
}

inline double w1_boundary(const WeylPair& w, Side side, double t) {
  auto p = boundary_M(w, Side::Plus, t), m = boundary_M(w, Side::Minus, t);
  if (!p || !m) return 0.0;
  double im = std::abs((side == Side::Plus ? *p : *m).imag());
  if (im == 0.0) return 0.0;
  double d2 = std::norm(*p - *m);
  if (d2 == 0.0) return std::numeric_limits<double>::infinity();
  return im / d2;
}

}  // namespace detail

inline CriterionReport muckenhoupt_pair_scan(const WeylPair& w, const SpectrumResult& spec) {
  CriterionReport r;
  r.name = "muckenhoupt_pair";
  const double sc = w.data.scale();
  std::vector<double> cuts = detail::critical_points(w, spec);
  std::vector<double> centers = cuts;
  for (int i = -4; i <= 4; ++i) centers.push_back(sc * i);
  std::sort(centers.begin(), centers.end());
  centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
  for (Side side : {Side::Plus, Side::Minus}) {
    const auto E = side == Side::Plus ? w.data.bands_plus : reflect(w.data.bands_plus);
    auto f1 = [&](double t) { return detail::w1_boundary(w, side, t); };
    auto f2 = [&](double t) { return detail::im_boundary(w, side, t); };
    for (double c : cuts)
      for (int dir : {1, -1})
        if (detail::overlap_length(E, std::min(c, c + dir * 1e-3), std::max(c, c + dir * 1e-3)) > 0.0 &&
            quad::shell_test(f1, c, 0.5 * sc, dir) == quad::Convergence::Divergent) {
          r.status = "DIVERGENT";
          r.value = std::numeric_limits<double>::infinity();
          r.witness = cplx(c, 0.0);
          r.witness_interval = dir > 0 ? Interval{c, c + 0.0625 * sc} : Interval{c - 0.0625 * sc, c};
          r.notes.push_back("Im M / |D|^2 is not locally integrable at the witness");
          return r;
        }
    for (double c : centers) {
      std::array<std::vector<double>, 5> seq;
      for (int m = 4; m >= -20; --m) {
        double L = std::ldexp(sc, m);
        std::array<Interval, 5> ivs{Interval{c - L / 2, c + L / 2}, Interval{c, c + L}, Interval{c - L, c},
                                    Interval{c + L / 2, c + 1.5 * L}, Interval{c - 1.5 * L, c - L / 2}};
        for (int k = 0; k < 5; ++k) {
          double len = detail::overlap_length(E, ivs[k].lo, ivs[k].hi);
          if (!(len > 0.0)) {
            seq[k].clear();
            continue;
          }
          double p = detail::integrate_on(f1, E, ivs[k].lo, ivs[k].hi, cuts) / len *
                     (detail::integrate_on(f2, E, ivs[k].lo, ivs[k].hi, cuts) / len);
          if (!std::isfinite(p)) p = std::numeric_limits<double>::infinity();
          seq[k].push_back(p);
          if (p > r.value) {
            r.value = p;
            r.witness_interval = ivs[k];
          }
          if (detail::trailing_run(seq[k], 2.0) >= 3) {
            r.status = "DIVERGENT";
            r.value = std::numeric_limits<double>::infinity();
            r.witness_interval = ivs[k];
            r.witness = cplx(c, 0.0);
            r.notes.push_back(std::string("diverges on the ") + (side == Side::Plus ? "+" : "-") + " side");
            return r;
          }
        }
      }
    }
  }
  r.status = std::isfinite(r.value) ? "FINITE" : "DIVERGENT";
  return r;
}

inline CriterionReport muckenhoupt_pair_scan(const WeylPair& w) { return muckenhoupt_pair_scan(w, eigenvalues(w)); }

// ---- dissipative part ----

namespace detail {

inline std::optional<double> one_minus_i_phi(const WeylPair& w, cplx z) {
  auto p = w.M(Side::Plus, z), m = w.M(Side::Minus, z);
  if (!p || !m || std::abs(*m) == 0.0) return std::nullopt;
  cplx den = 1.0 / *m - *p;
  if (std::abs(den) == 0.0) return std::nullopt;
  cplx phi = 2.0 / den;
  double v = std::abs(1.0 - cplx(0, 1) * phi);
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace detail

inline CriterionReport dissipative_part_check(const WeylPair& w, const std::vector<cplx>& grid,
                                              const SpectrumResult& spec, double threshold = 1e-3) {
  CriterionReport r;
  r.name = "dissipative_part";
  r.value = std::numeric_limits<double>::infinity();
  int skipped = 0;
  auto visit = [&](cplx z) {
    auto v = detail::one_minus_i_phi(w, z);
    if (!v) {
      ++skipped;
      return;
    }
    if (*v < r.value) {
      r.value = *v;
      r.witness = z;
    }
  };
  for (cplx z : grid) visit(z);
  double coarse = r.value;
  // refinement toward the real axis at critical points
  const double sc = w.data.scale();
  for (double c : detail::critical_points(w, spec))
    for (int m = 2; m <= 8; ++m) {
      double h = std::pow(10.0, -m) * sc;
      visit(cplx(c, -h));
      visit(cplx(c + h, -h));
      visit(cplx(c - h, -h));
    }
  if (skipped > 0) r.notes.push_back(std::to_string(skipped) + " grid points skipped at poles");
  bool away = coarse > threshold && r.value > threshold;
  r.status = away ? "BOUNDED-AWAY" : "NOT-BOUNDED-AWAY";
  return r;
}

inline CriterionReport dissipative_part_check(const WeylPair& w) {
  return dissipative_part_check(w, log_polar_grid(false), eigenvalues(w));
}

// ---- Poisson condition ----

// (1/pi) int y / ((x - t)^2 + y^2) f(t) dt, split at the given points
template <class F>
double poisson_integral(F f, double x, double y, std::vector<double> cuts = {}) {
  cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto k = [&](double t) { return y / ((x - t) * (x - t) + y * y) * f(t); };
  double s = 0.0;
  s += quad::integrate([&](double u) { return k(cuts.front() - u); }, 0.0, std::numeric_limits<double>::infinity());
  s += quad::integrate(k, cuts.back(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) s += quad::integrate(k, cuts[i], cuts[i + 1], 1e-10);
  return s / std::numbers::pi;
}

inline CriterionReport poisson_condition(const WeylPair& w, const SpectrumResult& spec) {
  CriterionReport r;
  r.name = "poisson_condition";
  const double sc = w.data.scale();
  std::vector<double> cuts = detail::critical_points(w, spec);
  for (Side side : {Side::Plus, Side::Minus}) {
    auto f1 = [&](double t) { return detail::w1_boundary(w, side, t); };
    // envelope: local divergence first, then the weighted line integral
    for (double c : cuts)
      for (int dir : {1, -1})
        if (quad::shell_test(f1, c, 0.5 * sc, dir) == quad::Convergence::Divergent) {
          r.status = "DIVERGENT";
          r.value = std::numeric_limits<double>::infinity();
          r.witness = cplx(c, 0.0);
          r.notes.push_back("w1 is not locally integrable at the witness");
          return r;
        }
    double env = poisson_integral(f1, 0.0, 1.0, cuts) * std::numbers::pi;
    if (!std::isfinite(env)) throw Error(ErrorKind::QuadratureFailure, "Poisson envelope integral diverges");
  }
  std::vector<double> xs = cuts;
  for (int i = -8; i <= 8; ++i) xs.push_back(0.5 * sc * i);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  for (Side side : {Side::Plus, Side::Minus}) {
    auto f1 = [&](double t) { return detail::w1_boundary(w, side, t); };
    auto f2 = [&](double t) { return detail::im_boundary(w, side, t); };
    for (double x : xs) {
      std::vector<double> seq;
      for (int m = -1; m <= 3; ++m) {
        double y = std::pow(10.0, -m) * sc;
        double p = poisson_integral(f1, x, y, cuts) * poisson_integral(f2, x, y, cuts);
        if (!std::isfinite(p)) p = std::numeric_limits<double>::infinity();
        seq.push_back(p);
        if (p > r.value) {
          r.value = p;
          r.witness = cplx(x, y);
        }
      }
      if (detail::trailing_run(seq, 3.0) >= 3) {
        r.status = "UNBOUNDED";
        r.value = std::numeric_limits<double>::infinity();
        r.witness = cplx(x, 0.0);
        return r;
      }
    }
  }
  r.status = std::isfinite(r.value) ? "FINITE" : "UNBOUNDED";
  return r;
}

inline CriterionReport poisson_condition(const WeylPair& w) { return poisson_condition(w, eigenvalues(w)); }

struct CriteriaReport {
  CriterionReport necessary, sufficient, muckenhoupt, dissipative, poisson;
  std::vector<CriterionReport> all() const { return {necessary, sufficient, muckenhoupt, dissipative, poisson}; }
};

struct CriteriaOptions {
  int real_points = 4001;
  int per_decade = 8;
};

inline CriteriaReport check_all(const WeylPair& w, const CriteriaOptions& opt = {}) {
  SpectrumResult spec = eigenvalues(w);
  CriteriaReport c;
  c.necessary = necessary_ratio(w, default_real_grid(w, opt.real_points), spec);
  c.sufficient = sufficient_sum_ratio(w, log_polar_grid(true, 1e-4, 1e4, opt.per_decade), spec);
  c.muckenhoupt = muckenhoupt_pair_scan(w, spec);
  c.dissipative = dissipative_part_check(w, log_polar_grid(false, 1e-4, 1e4, opt.per_decade), spec);
  c.poisson = poisson_condition(w, spec);
  return c;
}

}  // namespace indefsl
