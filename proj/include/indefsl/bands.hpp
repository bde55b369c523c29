#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "poly.hpp"

namespace indefsl {

enum class Side { Plus, Minus };

inline double side_sign(Side s) { return s == Side::Plus ? 1.0 : -1.0; }

struct Interval {
  double lo;
  double hi;  // may be +inf / lo may be -inf
  bool contains(double t) const { return t >= lo && t <= hi; }
  bool interior(double t) const { return t > lo && t < hi; }
  double length() const { return hi - lo; }
};

struct BandStructure {
  std::vector<double> mu_r;  // r_0 .. r_N
  std::vector<double> mu_l;  // l_1 .. l_N
  std::vector<double> xi;    // xi_1 .. xi_N
  std::vector<int> signs;    // sigma_1 .. sigma_N

  std::size_t zones() const { return mu_l.size(); }

  void validate() const {
    const std::size_t n = mu_l.size();
    if (mu_r.size() != n + 1 || xi.size() != n || signs.size() != n)
      throw Error(ErrorKind::InvalidBands, "expected |mu_r| = N+1 and |mu_l| = |xi| = |signs| = N");
    for (int s : signs)
      if (s != 1 && s != -1) throw Error(ErrorKind::InvalidBands, "signs must be +1 or -1");
    for (double v : mu_r)
      if (!std::isfinite(v)) throw Error(ErrorKind::InvalidBands, "non-finite edge");
    for (std::size_t j = 0; j < n; ++j) {
      if (!(mu_r[j] < mu_l[j] && mu_l[j] < mu_r[j + 1]))
        throw Error(ErrorKind::InvalidBands, "edges are not strictly interlaced");
      if (!(xi[j] >= mu_l[j] && xi[j] <= mu_r[j + 1]))
        throw Error(ErrorKind::InvalidBands, "divisor point outside its gap");
    }
    for (std::size_t j = 1; j < n; ++j)
      if (xi[j] == xi[j - 1]) throw Error(ErrorKind::InvalidBands, "repeated divisor point");
  }

  // sorted branch points of R
  std::vector<double> edges() const {
    std::vector<double> e;
    e.push_back(mu_r[0]);
    for (std::size_t j = 0; j < mu_l.size(); ++j) {
      e.push_back(mu_l[j]);
      e.push_back(mu_r[j + 1]);
    }
    return e;
  }

  // spectrum of L
  std::vector<Interval> bands() const {
    std::vector<Interval> b;
    for (std::size_t j = 0; j < mu_l.size(); ++j) b.push_back({mu_r[j], mu_l[j]});
    b.push_back({mu_r.back(), std::numeric_limits<double>::infinity()});
    return b;
  }
};

inline std::pair<RealPoly, RealPoly> build_PR(const BandStructure& b) {
  b.validate();
  RealPoly P = RealPoly::from_roots(b.xi);
  RealPoly R = RealPoly::from_roots(b.edges());
  return {P, R};
}

// principal square root, with real negative arguments taken from above
inline cplx sqrt_up(cplx z) {
  if (z.imag() == 0.0) {
    double x = z.real();
    return x >= 0 ? cplx(std::sqrt(x), 0.0) : cplx(0.0, std::sqrt(-x));
  }
  return std::sqrt(z);
}

struct FiniteZoneData {
  RealPoly P, Q, R, S;
  std::vector<double> tau;
  std::vector<double> edges;          // branch points of R, sorted
  std::vector<Interval> bands_plus;   // spectrum of L

  double scale() const {
    double s = 1.0;
    if (!edges.empty()) {
      s = std::max(s, edges.back() - edges.front());
      for (double e : edges) s = std::max(s, std::abs(e));
    }
    return s;
  }

  // W(lambda) = prod sqrt(lambda - e_k), Im lambda >= 0
  cplx W(cplx z) const {
    cplx w = 1.0;
    for (double e : edges) w *= sqrt_up(z - e);
    return w;
  }

  bool near_tau(double t) const {
    for (double x : tau)
      if (std::abs(t - x) <= 1e-12 * (1.0 + std::abs(x))) return true;
    return false;
  }

  // h(z) = (Q + iW)/S on the closed upper half plane
  std::optional<cplx> h_upper(cplx z) const {
    if (z.imag() == 0.0 && near_tau(z.real())) return std::nullopt;
    cplx s = S.eval(z);
    if (s == 0.0) return std::nullopt;
    return (Q.eval(z) + cplx(0, 1) * W(z)) / s;
  }

  // g(z) = (Q - iW)/S on the closed upper half plane
  std::optional<cplx> g_upper(cplx z) const {
    if (z.imag() == 0.0 && near_tau(z.real())) return std::nullopt;
    cplx s = S.eval(z);
    if (s == 0.0) return std::nullopt;
    return (Q.eval(z) - cplx(0, 1) * W(z)) / s;
  }

  std::optional<cplx> M(Side side, cplx z) const {
    const bool lower = z.imag() < 0.0 || (z.imag() == 0.0 && std::signbit(z.imag()));
    cplx u = lower ? std::conj(z) : z;
    u = cplx(u.real(), std::abs(u.imag()));
    std::optional<cplx> v;
    if (side == Side::Plus) {
      v = h_upper(u);
    } else {
      cplx mu(-u.real(), u.imag());
      auto g = g_upper(mu);
      if (g) v = std::conj(*g);
    }
    if (!v) return v;
    return lower ? std::conj(*v) : *v;
  }

  bool in_band(double t) const {
    for (const auto& b : bands_plus)
      if (b.contains(t)) return true;
    return false;
  }
  bool in_band_interior(double t) const {
    for (const auto& b : bands_plus)
      if (b.interior(t)) return true;
    return false;
  }
  bool is_edge(double t, double tol = 1e-10) const {
    for (double e : edges)
      if (std::abs(t - e) <= tol * (1.0 + std::abs(e))) return true;
    return false;
  }
};

struct HerglotzReport {
  bool ok = true;
  std::string failure;  // which side / point failed
  cplx at{};
};

// grid screen: 200 log radii in [1e-3, 1e3]*scale times 8 angles in (0, pi)
inline HerglotzReport herglotz_grid(const FiniteZoneData& d) {
  HerglotzReport rep;
  const double sc = d.scale();
  for (int i = 0; i < 200; ++i) {
    double r = sc * std::pow(10.0, -3.0 + 6.0 * i / 199.0);
    for (int j = 0; j < 8; ++j) {
      double ang = (j + 0.5) * std::numbers::pi / 8.0;
      cplx z = std::polar(r, ang);
      for (Side s : {Side::Plus, Side::Minus}) {
        auto m = d.M(s, z);
        if (!m || !(m->imag() > 0.0)) {
          rep.ok = false;
          rep.failure = s == Side::Plus ? "Im M+ <= 0" : "Im M- <= 0";
          rep.at = z;
          return rep;
        }
      }
    }
  }
  return rep;
}

inline double identity_residual(const FiniteZoneData& d) {
  RealPoly res = d.P * d.S - d.Q * d.Q - d.R;
  return res.norm_inf() / std::max(d.R.norm_inf(), std::numeric_limits<double>::min());
}

// throws NotHerglotz when M+ or M- leaves the upper half-plane on the grid
inline void validate_herglotz(const FiniteZoneData& d) {
  auto h = herglotz_grid(d);
  if (!h.ok) throw Error(ErrorKind::NotHerglotz, h.failure);
}

inline FiniteZoneData assemble(const BandStructure& b, RealPoly P, RealPoly Q, RealPoly S) {
  FiniteZoneData d;
  d.P = std::move(P);
  d.Q = std::move(Q);
  d.S = std::move(S);
  d.R = RealPoly::from_roots(b.edges());
  d.edges = b.edges();
  d.bands_plus = b.bands();
  return d;
}

// Lagrange interpolation of Q, division for S, then validation.
inline FiniteZoneData solve_QS(const BandStructure& b) {
  auto [P, R] = build_PR(b);
  const std::size_t n = b.zones();
  const double sc = std::max(1.0, std::abs(b.mu_r.back() - b.mu_r.front()));

  RealPoly Q;
  for (std::size_t j = 0; j < n; ++j) {
    double v = -R.eval(b.xi[j]);
    if (v < 0.0) v = 0.0;
    bool edge = b.xi[j] == b.mu_l[j] || b.xi[j] == b.mu_r[j + 1];
    double y = edge ? 0.0 : b.signs[j] * std::sqrt(v);
    if (y == 0.0) continue;
    RealPoly basis = RealPoly::constant(y);
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j) continue;
      basis = basis * RealPoly({-b.xi[k] / (b.xi[j] - b.xi[k]), 1.0 / (b.xi[j] - b.xi[k])});
    }
    Q = Q + basis;
  }

  RealPoly num = R + Q * Q;
  RealPoly S, rem;
  RealPoly::divmod(num, P, S, rem);
  if (rem.norm_inf() > 1e-9 * num.norm_inf())
    throw Error(ErrorKind::DivisionRemainder, "(R + Q^2) mod P is not small");

  FiniteZoneData d = assemble(b, P, Q, S);

  // tau: roots of S, snapped to edges and checked against the gaps
  auto roots = poly_roots(S);
  for (const auto& r : roots) {
    if (std::abs(r.z.imag()) > 1e-7 * sc)
      throw Error(ErrorKind::TauOutOfGap, "S has a nonreal root");
    double t = r.z.real();
    for (double e : d.edges)
      if (std::abs(t - e) <= 1e-8 * sc) t = e;
    for (int m = 0; m < r.mult; ++m) d.tau.push_back(t);
  }
  std::sort(d.tau.begin(), d.tau.end());
  if (d.tau.size() != n + 1) throw Error(ErrorKind::TauOutOfGap, "S does not have N+1 roots");
  const double tol = 1e-8 * sc;
  if (d.tau[0] > b.mu_r[0] + tol) throw Error(ErrorKind::TauOutOfGap, "tau_0 above mu_r0");
  for (std::size_t j = 1; j <= n; ++j)
    if (d.tau[j] < b.mu_l[j - 1] - tol || d.tau[j] > b.mu_r[j] + tol)
      throw Error(ErrorKind::TauOutOfGap, "tau_" + std::to_string(j) + " outside its gap");

  validate_herglotz(d);
  return d;
}

inline FiniteZoneData make_finite_zone(const BandStructure& b) { return solve_QS(b); }

// pi * Sigma'_ac = Im M (Fatou normalization)
inline double spectral_density(const FiniteZoneData& d, Side side, double t) {
  double u = side_sign(side) * t;
  if (!d.in_band(u)) return 0.0;
  double s = d.S.eval(u);
  if (s == 0.0) {
    if (d.is_edge(u)) return std::numeric_limits<double>::infinity();
    throw Error(ErrorKind::EdgeEvaluation, "S vanishes inside a band");
  }
  double w = d.W(cplx(u, 0.0)).real();
  return std::max(0.0, w / (std::numbers::pi * s));
}

struct Atom {
  double at;
  double mass;
};

inline std::vector<Atom> discrete_masses(const FiniteZoneData& d, Side side) {
  std::vector<Atom> out;
  RealPoly dS = d.S.derivative();
  for (std::size_t j = 0; j < d.tau.size(); ++j) {
    double t = d.tau[j];
    if (d.is_edge(t)) continue;
    if (j > 0 && d.tau[j] == d.tau[j - 1]) continue;
    cplx w = d.W(cplx(t, 0.0));
    double q = d.Q.eval(t);
    cplx num = side == Side::Plus ? q + cplx(0, 1) * w : q + cplx(0, 1) * std::conj(w);
    if (std::abs(num) <= 1e-10 * (1.0 + std::abs(q) + std::abs(w))) continue;
    double sp = dS.eval(t);
    cplx mass = side == Side::Plus ? -num / sp : num / sp;
    if (std::abs(mass.imag()) > 1e-8 * (1.0 + std::abs(mass)) || !(mass.real() > 0.0))
      throw Error(ErrorKind::ComplexResidue, "residue is not a positive real number");
    out.push_back({side_sign(side) * t, mass.real()});
  }
  std::sort(out.begin(), out.end(), [](const Atom& a, const Atom& b) { return a.at < b.at; });
  return out;
}

struct MeasurePair {
  std::function<double(double)> density_plus;
  std::function<double(double)> density_minus;
  std::vector<Atom> atoms_plus;
  std::vector<Atom> atoms_minus;
  std::vector<Interval> support_plus;   // ac supports
  std::vector<Interval> support_minus;
  std::vector<double> edges_plus;       // points where densities may be singular
  std::vector<double> edges_minus;
};

inline std::vector<Interval> reflect(const std::vector<Interval>& v) {
  std::vector<Interval> out;
  for (auto it = v.rbegin(); it != v.rend(); ++it) out.push_back({-it->hi, -it->lo});
  return out;
}

inline MeasurePair measures(const FiniteZoneData& d) {
  MeasurePair m;
  m.density_plus = [d](double t) { return spectral_density(d, Side::Plus, t); };
  m.density_minus = [d](double t) { return spectral_density(d, Side::Minus, t); };
  m.atoms_plus = discrete_masses(d, Side::Plus);
  m.atoms_minus = discrete_masses(d, Side::Minus);
  m.support_plus = d.bands_plus;
  m.support_minus = reflect(d.bands_plus);
  m.edges_plus = d.edges;
  for (auto it = d.edges.rbegin(); it != d.edges.rend(); ++it) m.edges_minus.push_back(-*it);
  return m;
}

}  // namespace indefsl
