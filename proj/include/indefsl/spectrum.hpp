#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "quad.hpp"
#include "weyl.hpp"

namespace indefsl {

struct Eigenvalue {
  cplx z;
  int alg_mult = 1;
  int geo_mult = 1;
  bool capped = false;
};

struct SpectrumResult {
  std::vector<Interval> essential;
  std::vector<Eigenvalue> eigenvalues;
  std::vector<double> embedded_zeros;  // real zeros of D inside the closed essential spectrum
};

inline std::vector<Interval> essential_spectrum(const WeylPair& w) { return w.essential(); }

// Polynomial whose roots contain every zero of D = M+ - M-.
inline RealPoly rationalized_D(const FiniteZoneData& d) {
  RealPoly Rm = d.R.reflect(), Sm = d.S.reflect();
  if (d.Q.is_zero()) return d.R * Sm * Sm - Rm * d.S * d.S;
  RealPoly Qm = d.Q.reflect();
  RealPoly a = d.Q * Sm - Qm * d.S;
  RealPoly b = d.R * Sm * Sm + Rm * d.S * d.S + a * a;
  return b * b - 4.0 * (d.R * Rm * d.S * d.S * Sm * Sm);
}

// winding number of f around the square of half-width h centered at c
template <class F>
std::optional<double> winding(F f, cplx c, double h, int per_side = 512) {
  std::vector<cplx> pts;
  const cplx corners[4] = {c + cplx(h, -h), c + cplx(h, h), c + cplx(-h, h), c + cplx(-h, -h)};
  for (int s = 0; s < 4; ++s) {
    cplx a = corners[s], b = corners[(s + 1) % 4];
    for (int k = 0; k < per_side; ++k) pts.push_back(a + (b - a) * (double(k) / per_side));
  }
  double total = 0.0;
  std::optional<cplx> first = f(pts[0]);
  if (!first || *first == 0.0) return std::nullopt;
  cplx prev = *first;
  for (std::size_t k = 1; k <= pts.size(); ++k) {
    auto v = f(pts[k % pts.size()]);
    if (!v || *v == 0.0) return std::nullopt;
    total += std::arg(*v / prev);
    prev = *v;
  }
  return total / (2 * std::numbers::pi);
}

namespace detail {

inline double d_tol(const WeylPair& w, cplx z) {
  auto p = w.M(Side::Plus, z), m = w.M(Side::Minus, z);
  double s = 1.0;
  if (p && m) s = std::max(1.0, std::abs(*p) + std::abs(*m));
  return 1e-8 * s;
}

// Newton steps on D from a rationalized root
inline cplx refine_zero(const WeylPair& w, cplx z) {
  for (int it = 0; it < 20; ++it) {
    auto f = w.D(z);
    if (!f || std::abs(*f) == 0.0) break;
    double h = 1e-7 * (1.0 + std::abs(z));
    auto fp = w.D(z + h), fm = w.D(z - h);
    if (!fp || !fm) break;
    cplx df = (*fp - *fm) / (2 * h);
    if (df == 0.0) break;
    cplx nz = z - *f / df;
    if (z.imag() == 0.0) nz = {nz.real(), 0.0};
    auto nf = w.D(nz);
    if (!nf || std::abs(*nf) >= std::abs(*f) || std::abs(nz - z) > 1e-4) break;
    z = nz;
  }
  return z;
}

inline bool in_closed(const std::vector<Interval>& ivs, double t, double tol) {
  for (const auto& iv : ivs)
    if (t >= iv.lo - tol && t <= iv.hi + tol) return true;
  return false;
}

inline double dist_to(const std::vector<Interval>& ivs, double t) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& iv : ivs) {
    if (iv.contains(t)) return 0.0;
    d = std::min(d, std::min(std::abs(t - iv.lo), std::abs(t - iv.hi)));
  }
  return d;
}

// F is even or odd in lambda; solve in mu = lambda^2 and deflate the root at 0
inline std::vector<Root> symmetric_roots(const RealPoly& F) {
  std::vector<Root> out;
  if (F.degree() < 1) return out;
  const auto& c = F.coeffs();
  double even = 0.0, odd = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) (i % 2 ? odd : even) += std::abs(c[i]);
  int parity = odd > even ? 1 : 0;
  std::vector<double> g;
  for (std::size_t i = parity; i < c.size(); i += 2) g.push_back(c[i]);
  double gn = 0.0;
  for (double v : g) gn = std::max(gn, std::abs(v));
  int zero_mult = parity;
  std::size_t k = 0;
  while (k + 1 < g.size() && std::abs(g[k]) <= 1e-11 * gn) {
    ++k;
    zero_mult += 2;
  }
  g.erase(g.begin(), g.begin() + k);
  if (zero_mult > 0) out.push_back({cplx(0.0), zero_mult});
  RealPoly G(g);
  if (G.degree() < 1) return out;
  for (const auto& r : poly_roots(G)) {
    cplx l = std::sqrt(r.z);
    if (r.z.imag() == 0.0) l = r.z.real() >= 0 ? cplx(std::sqrt(r.z.real()), 0.0) : cplx(0.0, std::sqrt(-r.z.real()));
    out.push_back({l, r.mult});
    out.push_back({-l, r.mult});
  }
  return out;
}

}  // namespace detail

inline SpectrumResult eigenvalues(const WeylPair& w) {
  SpectrumResult res;
  res.essential = w.essential();
  const FiniteZoneData& d = w.data;
  const double sc = d.scale();
  RealPoly F = rationalized_D(d).chopped(1e-14);

  std::vector<Root> cand = detail::symmetric_roots(F);

  std::vector<double> poles;
  for (double t : d.tau) {
    poles.push_back(t);
    poles.push_back(-t);
  }

  auto Df = [&](cplx z) { return w.D(z); };

  for (const auto& r : cand) {
    if (r.z.imag() < 0.0) continue;
    cplx z = detail::refine_zero(w, r.z);
    bool real = z.imag() == 0.0;
    if (real && detail::in_closed(res.essential, z.real(), 1e-9 * sc)) {
      auto dv = w.D(z);
      if (dv && std::abs(*dv) <= detail::d_tol(w, z)) res.embedded_zeros.push_back(z.real());
      continue;
    }
    auto dv = w.D(z);
    bool small = dv && std::abs(*dv) <= detail::d_tol(w, z);

    double h = 1e-2 * (1.0 + std::abs(z));
    for (const auto& o : cand) {
      double dd = std::abs(o.z - r.z);
      if (dd > 1e-6 * (1 + std::abs(r.z))) h = std::min(h, 0.3 * dd);
    }
    if (!real) h = std::min(h, 0.3 * z.imag());
    else {
      h = std::min(h, 0.3 * detail::dist_to(res.essential, z.real()));
      for (double p : poles)
        if (std::abs(p - z.real()) > 1e-9) h = std::min(h, 0.3 * std::abs(p - z.real()));
    }
    if (!small) {
      // spurious root of the squared equation; confirm D has no zero nearby
      continue;
    }
    auto wn = winding(Df, z, h);
    int k = wn ? int(std::lround(*wn)) : 0;
    if (!wn || k < 1 || k > r.mult || std::abs(*wn - k) > 0.1)
      throw Error(ErrorKind::WindingMismatch,
                  "residual filter and argument principle disagree near " + std::to_string(z.real()) + "+" +
                      std::to_string(z.imag()) + "i");
    res.eigenvalues.push_back({z, k, 1, false});
    if (!real) res.eigenvalues.push_back({std::conj(z), k, 1, false});
  }

  // common atoms: zero order of 1/M+ - 1/M-
  auto ap = discrete_masses(d, Side::Plus);
  auto am = discrete_masses(d, Side::Minus);
  for (const auto& a : ap)
    for (const auto& b : am) {
      if (std::abs(a.at - b.at) > 1e-9 * (1 + std::abs(a.at))) continue;
      if (detail::in_closed(res.essential, a.at, 0.0)) continue;
      double h = 1e-2 * (1.0 + std::abs(a.at));
      h = std::min(h, 0.3 * detail::dist_to(res.essential, a.at));
      for (double p : poles)
        if (std::abs(p - a.at) > 1e-9) h = std::min(h, 0.3 * std::abs(p - a.at));
      auto g = [&](cplx z) -> std::optional<cplx> {
        auto p = w.M(Side::Plus, z), m = w.M(Side::Minus, z);
        if (!p || !m) return std::nullopt;
        return 1.0 / *p - 1.0 / *m;
      };
      auto wn = winding(g, cplx(a.at, 0.0), h);
      int k = wn ? int(std::lround(*wn)) : 0;
      if (k >= 1) res.eigenvalues.push_back({cplx(a.at, 0.0), k, 1, false});
    }

  std::sort(res.eigenvalues.begin(), res.eigenvalues.end(), [](const Eigenvalue& x, const Eigenvalue& y) {
    if (x.z.real() != y.z.real()) return x.z.real() < y.z.real();
    return x.z.imag() < y.z.imag();
  });
  std::sort(res.embedded_zeros.begin(), res.embedded_zeros.end());
  return res;
}

// sum of zero orders of D inside a rectangle of the open upper half plane
inline int winding_count(const WeylPair& w, double re_lo, double re_hi, double im_lo, double im_hi,
                         int per_side = 4096) {
  std::vector<cplx> pts;
  const cplx c[4] = {{re_lo, im_lo}, {re_hi, im_lo}, {re_hi, im_hi}, {re_lo, im_hi}};
  for (int s = 0; s < 4; ++s)
    for (int k = 0; k < per_side; ++k) pts.push_back(c[s] + (c[(s + 1) % 4] - c[s]) * (double(k) / per_side));
  double total = 0.0;
  cplx prev = *w.D(pts[0]);
  for (std::size_t k = 1; k <= pts.size(); ++k) {
    cplx v = *w.D(pts[k % pts.size()]);
    total += std::arg(v / prev);
    prev = v;
  }
  return int(std::lround(total / (2 * std::numbers::pi)));
}

// ---- point-mass eigenvalue analysis ----

enum class AtomStatus { NotEigenvalue, Eigenvalue, Undecided };

struct AtomResult {
  AtomStatus status = AtomStatus::NotEigenvalue;
  int k = 0;
  bool capped = false;
  std::string reason;
};

inline constexpr int k_max = 8;

namespace detail {

inline const std::vector<Atom>& atoms_of(const MeasurePair& s, Side side) {
  return side == Side::Plus ? s.atoms_plus : s.atoms_minus;
}
inline const std::vector<Interval>& supp_of(const MeasurePair& s, Side side) {
  return side == Side::Plus ? s.support_plus : s.support_minus;
}
inline double dens(const MeasurePair& s, Side side, double t) {
  return side == Side::Plus ? s.density_plus(t) : s.density_minus(t);
}

inline std::optional<double> mass_at(const MeasurePair& s, Side side, double x) {
  for (const auto& a : atoms_of(s, side))
    if (std::abs(a.at - x) <= 1e-9 * (1 + std::abs(x))) return a.mass;
  return std::nullopt;
}

// local power of the density at x0 from direction dir, nullopt if it vanishes there
inline std::optional<double> local_power(const MeasurePair& s, Side side, double x0, int dir) {
  std::vector<double> lx, ly;
  for (int k = 4; k <= 9; ++k) {
    double dlt = std::pow(10.0, -k);
    double v = dens(s, side, x0 + dir * dlt);
    if (!(v > 0.0) || !std::isfinite(v)) return std::nullopt;
    lx.push_back(std::log(dlt));
    ly.push_back(std::log(v));
  }
  double n = lx.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// is int_{R \ {x0}} |t - x0|^{-p} dSigma finite
inline quad::Convergence integrable(const MeasurePair& s, Side side, double x0, double p) {
  const auto& supp = supp_of(s, side);
  if (!in_closed(supp, x0, 0.0)) return quad::Convergence::Convergent;
  quad::Convergence worst = quad::Convergence::Convergent;
  for (int dir : {1, -1}) {
    double probe = x0 + dir * 1e-9;
    if (!in_closed(supp, probe, 0.0)) continue;
    auto alpha = local_power(s, side, x0, dir);
    quad::Convergence c;
    if (alpha && std::abs(*alpha * 2 - std::round(*alpha * 2)) < 0.2) {
      double a = std::round(*alpha * 2) / 2;
      c = a - p > -1.0 + 1e-9 ? quad::Convergence::Convergent : quad::Convergence::Divergent;
    } else {
      c = quad::shell_test([&](double t) { return dens(s, side, t) * std::pow(std::abs(t - x0), -p); }, x0, 1.0,
                           dir);
    }
    if (c == quad::Convergence::Divergent) return c;
    if (c == quad::Convergence::Undecided) worst = c;
  }
  return worst;
}

}  // namespace detail

// int_{R \ {x}} (t - x)^{-j} dSigma_side, for x off the support or where convergent
inline cplx moment(const MeasurePair& s, Side side, cplx x, int j) {
  cplx total = 0.0;
  for (const auto& a : detail::atoms_of(s, side)) {
    if (x.imag() == 0.0 && std::abs(a.at - x.real()) <= 1e-9 * (1 + std::abs(a.at))) continue;
    total += a.mass / std::pow(cplx(a.at) - x, j);
  }
  auto f = [&](double t) { return detail::dens(s, side, t) / std::pow(cplx(t) - x, j); };
  for (const auto& iv : detail::supp_of(s, side)) {
    std::vector<double> cuts{iv.lo};
    if (x.imag() == 0.0 && iv.interior(x.real())) cuts.push_back(x.real());
    double lo_fin = std::isfinite(iv.lo) ? iv.lo : iv.hi;
    double hi_fin = std::isfinite(iv.hi) ? iv.hi : iv.lo;
    double L = std::max(1.0, std::abs(x.real()) + std::abs(lo_fin) + std::abs(hi_fin));
    if (std::isinf(iv.hi)) cuts.push_back(std::max(cuts.back(), hi_fin) + L);
    if (std::isinf(iv.lo)) cuts[0] = lo_fin - L;
    cuts.push_back(iv.hi);
    if (std::isinf(iv.lo)) {
      // (-inf, cuts[0]] via reflection
      total += quad::integrate_c([&](double u) { return f(cuts[0] - u); }, 0.0, std::numeric_limits<double>::infinity());
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += quad::integrate_c(f, cuts[i], cuts[i + 1]);
  }
  return total;
}

inline bool moments_equal(cplx a, cplx b) {
  return std::abs(a - b) <= 1e-7 * std::max(std::abs(a), std::abs(b)) + 1e-10;
}

inline AtomResult atom_multiplicity(const MeasurePair& s, double x) {
  using quad::Convergence;
  AtomResult r;
  auto mp = detail::mass_at(s, Side::Plus, x), mm = detail::mass_at(s, Side::Minus, x);
  auto cp = detail::integrable(s, Side::Plus, x, 2.0), cm = detail::integrable(s, Side::Minus, x, 2.0);

  if ((!mp && cp == Convergence::Divergent) || (!mm && cm == Convergence::Divergent)) {
    r.reason = "A0: integral of |t-x|^-2 diverges";
    return r;
  }
  if ((!mp && cp == Convergence::Undecided) || (!mm && cm == Convergence::Undecided)) {
    r.status = AtomStatus::Undecided;
    r.reason = "QuadratureDivergenceUndecided";
    return r;
  }
  if (mp.has_value() != mm.has_value()) {
    r.reason = "atom on one side only";
    return r;
  }
  auto step_ok = [&](int j, int shift) -> std::optional<bool> {
    auto a = detail::integrable(s, Side::Plus, x, 2.0 * j), b = detail::integrable(s, Side::Minus, x, 2.0 * j);
    if (a == Convergence::Undecided || b == Convergence::Undecided) return std::nullopt;
    if (a == Convergence::Divergent || b == Convergence::Divergent) return false;
    if (j - shift == 0) return true;
    return moments_equal(moment(s, Side::Plus, x, j - shift), moment(s, Side::Minus, x, j - shift));
  };

  if (mp) {
    r.status = AtomStatus::Eigenvalue;
    if (std::abs(*mp - *mm) > 1e-9 * (*mp + *mm) || cp != Convergence::Convergent || cm != Convergence::Convergent) {
      r.k = 1;
      r.reason = "atoms on both sides; simple";
      return r;
    }
    r.k = 2;
    for (int j = 2; r.k < k_max; ++j) {
      auto ok = step_ok(j, 1);
      if (!ok) {
        r.status = AtomStatus::Undecided;
        r.reason = "QuadratureDivergenceUndecided";
        return r;
      }
      if (!*ok) break;
      ++r.k;
    }
    r.capped = r.k >= k_max;
    r.reason = "atoms on both sides, equal masses";
    return r;
  }

  // regular on both sides
  if (!moments_equal(moment(s, Side::Plus, x, 1), moment(s, Side::Minus, x, 1))) {
    r.reason = "first moments differ";
    return r;
  }
  r.status = AtomStatus::Eigenvalue;
  r.k = 1;
  for (int j = 2; r.k < k_max; ++j) {
    auto ok = step_ok(j, 0);
    if (!ok) {
      r.status = AtomStatus::Undecided;
      r.reason = "QuadratureDivergenceUndecided";
      return r;
    }
    if (!*ok) break;
    ++r.k;
  }
  r.capped = r.k >= k_max;
  r.reason = "regular point with equal first moments";
  return r;
}

// ---- definitizability ----

struct SupportSet {
  std::vector<Interval> intervals;
  std::vector<double> points;
};

struct DefinitizableResult {
  bool definitizable = false;
  std::vector<double> alphas;  // separating points
  std::optional<Interval> witness;
};

inline DefinitizableResult definitizable(const SupportSet& plus, const SupportSet& minus) {
  DefinitizableResult r;
  struct Piece {
    Interval iv;
    int sign;
  };
  std::vector<Piece> pieces;
  for (const auto& iv : plus.intervals) pieces.push_back({iv, 1});
  for (double p : plus.points) pieces.push_back({{p, p}, 1});
  for (const auto& iv : minus.intervals) pieces.push_back({iv, -1});
  for (double p : minus.points) pieces.push_back({{p, p}, -1});

  // overlaps of positive length
  for (const auto& a : plus.intervals)
    for (const auto& b : minus.intervals) {
      double lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
      if (hi - lo > 1e-12 * (1 + std::abs(lo) + std::abs(hi))) {
        if (!r.witness || lo < r.witness->lo) r.witness = Interval{lo, hi};
      }
    }
  if (r.witness) return r;

  auto member = [](const SupportSet& s, double t) {
    for (const auto& iv : s.intervals)
      if (iv.contains(t)) return true;
    for (double p : s.points)
      if (p == t) return true;
    return false;
  };
  std::vector<double> bp;
  for (const auto& p : pieces) {
    if (std::isfinite(p.iv.lo)) bp.push_back(p.iv.lo);
    if (std::isfinite(p.iv.hi)) bp.push_back(p.iv.hi);
  }
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

  r.definitizable = true;
  int cur = -1;
  auto emit = [&](int label, double at) {
    if (label != cur) {
      r.alphas.push_back(at);
      cur = label;
    }
  };
  auto cell = [&](double lo, double hi) {
    double mid = std::isinf(lo) ? hi - 1.0 : std::isinf(hi) ? lo + 1.0 : 0.5 * (lo + hi);
    bool a = member(plus, mid), b = member(minus, mid);
    double at = std::isfinite(lo) ? lo : hi;
    if (a) emit(1, at);
    if (b) emit(-1, at);
  };
  const double inf = std::numeric_limits<double>::infinity();
  if (bp.empty()) {
    cell(-inf, inf);
    return r;
  }
  cell(-inf, bp.front());
  for (std::size_t i = 0; i < bp.size(); ++i) {
    bool a = member(plus, bp[i]), b = member(minus, bp[i]);
    if (a && b) {
      emit(cur, bp[i]);
      emit(-cur, bp[i]);
    } else if (a) {
      emit(1, bp[i]);
    } else if (b) {
      emit(-1, bp[i]);
    }
    cell(bp[i], i + 1 < bp.size() ? bp[i + 1] : inf);
  }
  return r;
}

inline SupportSet support_of(const WeylPair& w, Side side) {
  SupportSet s;
  s.intervals = side == Side::Plus ? w.data.bands_plus : reflect(w.data.bands_plus);
  for (const auto& a : discrete_masses(w.data, side)) s.points.push_back(a.at);
  return s;
}

inline DefinitizableResult definitizable(const WeylPair& w) {
  return definitizable(support_of(w, Side::Plus), support_of(w, Side::Minus));
}

}  // namespace indefsl
