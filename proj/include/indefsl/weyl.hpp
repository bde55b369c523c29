#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "bands.hpp"

namespace indefsl {

// Square root with the cut along [0, inf), sqrt_cut(-1) = i.
inline cplx sqrt_cut(cplx z, bool from_above = true) {
  if (z.imag() == 0.0) {
    double x = z.real();
    if (x <= 0.0) return {0.0, std::sqrt(-x)};
    return {from_above ? std::sqrt(x) : -std::sqrt(x), 0.0};
  }
  return cplx(0, 1) * std::sqrt(-z);
}

enum class PairKind { FiniteZone, Const, Example1, Example2 };

inline const char* to_string(PairKind k) {
  switch (k) {
    case PairKind::FiniteZone: return "finite_zone";
    case PairKind::Const: return "const";
    case PairKind::Example1: return "example1";
    case PairKind::Example2: return "example2";
  }
  return "?";
}

struct WeylPair {
  PairKind kind = PairKind::FiniteZone;
  FiniteZoneData data;
  BandStructure bands;
  double xi = 0.0, k2 = 0.0, a = 0.0;
  bool as_printed = false;     // literal closed form of the examples
  bool literal_minus = false;  // M- = -M+ instead of M-(l) = -M+(-l)

  static WeylPair finite_zone(const BandStructure& b) {
    WeylPair w;
    w.kind = PairKind::FiniteZone;
    w.bands = b;
    w.data = solve_QS(b);
    return w;
  }

  static WeylPair constant(double a) {
    WeylPair w;
    w.kind = PairKind::Const;
    w.a = a;
    w.bands = BandStructure{{a}, {}, {}, {}};
    w.data = solve_QS(w.bands);
    return w;
  }

  // gaps (-inf, xi) and (xi + k2, xi + 1); divisor at the right gap edge
  static WeylPair example1(double xi, double k2) {
    if (!(k2 > 0.0 && k2 < 1.0)) throw Error(ErrorKind::ModulusOutOfRange, "k2 must be in (0, 1)");
    WeylPair w;
    w.kind = PairKind::Example1;
    w.xi = xi;
    w.k2 = k2;
    w.bands = BandStructure{{xi, xi + 1.0}, {xi + k2}, {xi + 1.0}, {1}};
    w.data = solve_QS(w.bands);
    return w;
  }

  // same gaps; divisor at the left gap edge
  static WeylPair example2(double xi, double k2) {
    if (!(k2 > 0.0 && k2 < 1.0)) throw Error(ErrorKind::ModulusOutOfRange, "k2 must be in (0, 1)");
    WeylPair w;
    w.kind = PairKind::Example2;
    w.xi = xi;
    w.k2 = k2;
    w.bands = BandStructure{{xi, xi + 1.0}, {xi + k2}, {xi + k2}, {1}};
    w.data = solve_QS(w.bands);
    return w;
  }

  std::string label() const {
    std::string s = to_string(kind);
    if (kind == PairKind::Const) s += "(a=" + std::to_string(a) + ")";
    if (kind == PairKind::Example1 || kind == PairKind::Example2)
      s += "(xi=" + std::to_string(xi) + ",k2=" + std::to_string(k2) + ")";
    return s;
  }

 private:
  // i (l - c) / sqrt((l - xi)(l - d)), the printed example formula
  std::optional<cplx> printed_plus(cplx z) const {
    double c = kind == PairKind::Example1 ? xi + 1.0 : xi + k2;
    double dd = kind == PairKind::Example1 ? xi + k2 : xi + 1.0;
    bool lower = z.imag() < 0.0;
    cplx u = lower ? std::conj(z) : z;
    cplx den = sqrt_up(u - xi) * sqrt_up(u - dd);
    if (den == 0.0) return std::nullopt;
    cplx v = cplx(0, 1) * (u - c) / den;
    return lower ? std::conj(v) : v;
  }

 public:
  std::optional<cplx> M(Side side, cplx z) const {
    bool printed = as_printed && (kind == PairKind::Example1 || kind == PairKind::Example2);
    if (literal_minus && side == Side::Minus) {
      auto p = M(Side::Plus, z);
      if (!p) return p;
      return -*p;
    }
    if (printed) {
      if (side == Side::Plus) return printed_plus(z);
      auto p = printed_plus(-z);
      if (!p) return p;
      return -*p;
    }
    return data.M(side, z);
  }

  std::optional<cplx> D(cplx z) const {
    auto p = M(Side::Plus, z);
    auto m = M(Side::Minus, z);
    if (!p || !m) return std::nullopt;
    return *p - *m;
  }

  // sigma_ess(A) = sigma(L) u (-sigma(L)), merged
  std::vector<Interval> essential() const {
    std::vector<Interval> all = data.bands_plus;
    auto r = reflect(data.bands_plus);
    all.insert(all.end(), r.begin(), r.end());
    std::sort(all.begin(), all.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    std::vector<Interval> out;
    for (const auto& iv : all) {
      if (!out.empty() && iv.lo <= out.back().hi) out.back().hi = std::max(out.back().hi, iv.hi);
      else out.push_back(iv);
    }
    return out;
  }

  bool in_essential(double t) const {
    for (const auto& iv : essential())
      if (iv.contains(t)) return true;
    return false;
  }

  // edges of sigma(L) and of -sigma(L)
  std::vector<double> all_edges() const {
    std::vector<double> e = data.edges;
    for (double x : data.edges) e.push_back(-x);
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return e;
  }
};

inline std::optional<cplx> eval_M(const WeylPair& w, Side side, cplx z) {
  auto v = w.M(side, z);
  return v;
}

inline std::optional<cplx> eval_D(const WeylPair& w, cplx z) { return w.D(z); }

struct AsymptoticsReport {
  struct Ray {
    double angle;
    Side side;
    double exponent;
    cplx constant;  // M ~ constant / sqrt_cut(+-lambda)
  };
  std::vector<Ray> rays;
  double worst_exponent_error = 0.0;
  bool mismatch = false;
};

inline AsymptoticsReport asymptotics_check(const WeylPair& w) {
  AsymptoticsReport rep;
  const std::array<double, 3> angles{std::numbers::pi / 4, std::numbers::pi / 2, 3 * std::numbers::pi / 4};
  const std::array<double, 3> radii{1e2, 1e4, 1e6};
  for (Side side : {Side::Plus, Side::Minus}) {
    for (double ang : angles) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      cplx c{};
      for (double r : radii) {
        cplx z = std::polar(r, ang);
        auto m = w.M(side, z);
        double lm = m ? std::log(std::abs(*m)) : 0.0;
        double lr = std::log(r);
        sx += lr;
        sy += lm;
        sxx += lr * lr;
        sxy += lr * lm;
        if (m) c = *m * sqrt_cut(side == Side::Plus ? z : -z);
      }
      double n = radii.size();
      double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      rep.rays.push_back({ang, side, slope, c});
      double err = std::abs(slope + 0.5);
      rep.worst_exponent_error = std::max(rep.worst_exponent_error, err);
      if (err > 0.05) rep.mismatch = true;
    }
  }
  return rep;
}

}  // namespace indefsl
