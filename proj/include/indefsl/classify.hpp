#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spectrum.hpp"

namespace indefsl {

struct OrderEstimate {
  double order = 0.0;  // nearest multiple of 1/2
  double slope = 0.0;
  double residual = 0.0;
  bool resolved = true;
  bool near_boundary = false;  // slope close to a rounding midpoint
};

// log|f| against log delta over 12 deltas in [1e-8, 1e-3]
template <class F>
OrderEstimate local_order(F f, double t0, cplx dir = cplx(0, 1), double lo = 1e-8, double hi = 1e-3) {
  OrderEstimate est;
  std::vector<double> x, y;
  for (int k = 0; k < 12; ++k) {
    double dl = lo * std::pow(hi / lo, k / 11.0);
    std::optional<cplx> v = f(cplx(t0) + dl * dir);
    if (!v || !(std::abs(*v) > 0.0) || !std::isfinite(std::abs(*v))) continue;
    x.push_back(std::log10(dl));
    y.push_back(std::log10(std::abs(*v)));
  }
  if (x.size() < 6) {
    est.resolved = false;
    return est;
  }
  double n = x.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  est.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double icpt = (sy - est.slope * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) ss += std::pow(y[i] - icpt - est.slope * x[i], 2);
  est.residual = std::sqrt(ss / n);
  est.order = std::round(est.slope * 2.0) / 2.0;
  double dist = std::abs(est.slope - est.order);
  est.resolved = est.residual <= 0.1 && dist <= 0.15;
  est.near_boundary = dist > 0.1;
  return est;
}

// exact generalized order of M_side at a real point from the polynomial data
inline double exact_order_M(const FiniteZoneData& d, Side side, double t0) {
  double u = side_sign(side) * t0;
  auto zero_order = [&](const RealPoly& p) {
    int k = 0;
    RealPoly q = p;
    while (!q.is_zero() && std::abs(q.eval(u)) <= 1e-10 * std::max(1.0, q.abs_eval(std::abs(u))) && k < 8) {
      q = q.derivative();
      ++k;
    }
    return k;
  };
  double w_ord = d.is_edge(u) ? 0.5 : 0.0;
  // numerator Q +- iW: if Q(u) != 0 and W(u) = 0 or imaginary the numerator may still vanish
  cplx w = d.W(cplx(u, 0.0));
  double q = d.Q.eval(u);
  cplx num = side == Side::Plus ? q + cplx(0, 1) * w : q + cplx(0, 1) * std::conj(w);
  double n_ord = std::abs(num) > 1e-10 * (1 + std::abs(q) + std::abs(w)) ? 0.0 : std::max(w_ord, 0.5);
  if (d.Q.is_zero()) n_ord = w_ord;
  return n_ord - zero_order(d.S);
}

enum class SingKind { StrongSingularity, CleanEdge, GeneralizedPole, Undecided };

inline const char* to_string(SingKind k) {
  switch (k) {
    case SingKind::StrongSingularity: return "StrongSingularity";
    case SingKind::CleanEdge: return "CleanEdge";
    case SingKind::GeneralizedPole: return "GeneralizedPole";
    case SingKind::Undecided: return "Undecided";
  }
  return "?";
}

struct SingularityReport {
  double point = 0.0;
  bool at_infinity = false;
  SingKind kind = SingKind::CleanEdge;
  double estimated_order = 0.0;
  double fitted_exponent = 0.0;
  double residual = 0.0;
  double growth = 0.0;  // ratio growth per decade over the tail
};

namespace detail {

inline double sing_ratio(const WeylPair& w, double t) {
  double a = spectral_density(w.data, Side::Plus, t);
  double b = spectral_density(w.data, Side::Minus, t);
  double num = std::max(a, b);
  if (num == 0.0) return 0.0;
  auto p = w.M(Side::Plus, cplx(t, 0.0)), m = w.M(Side::Minus, cplx(t, 0.0));
  if (!p || !m) return 0.0;
  double den = std::abs(*p - *m);
  // below the cancellation floor D is numerically zero
  if (den <= 1e-13 * (std::abs(*p) + std::abs(*m))) return std::numeric_limits<double>::infinity();
  return num / den;
}

// count of trailing decades with growth >= 3, and the last factor
inline std::pair<int, double> tail_growth(const std::vector<double>& r) {
  int run = 0;
  double last = 0.0;
  for (std::size_t i = 1; i < r.size(); ++i) {
    double f = std::isinf(r[i]) ? std::numeric_limits<double>::infinity()
               : r[i - 1] > 0.0 ? r[i] / r[i - 1]
               : (r[i] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    last = f;
    if (f >= 3.0) ++run;
    else run = 0;
  }
  return {run, last};
}

}  // namespace detail

struct SingularityOptions {
  int m_lo = 2, m_hi = 7;
};

inline std::vector<SingularityReport> strong_singularities(const WeylPair& w, const SpectrumResult& spec,
                                                           const SingularityOptions& opt = {}) {
  std::vector<SingularityReport> out;
  std::vector<double> cand = spec.embedded_zeros;
  for (double e : w.all_edges()) cand.push_back(e);
  std::sort(cand.begin(), cand.end());
  std::vector<double> uniq;
  for (double c : cand)
    if (uniq.empty() || std::abs(c - uniq.back()) > 1e-9 * (1 + std::abs(c))) uniq.push_back(c);

  auto Dz = [&](cplx z) { return w.D(z); };
  for (double t0 : uniq) {
    int best_run = 0;
    double growth = 0.0;
    for (int dir : {-1, 1}) {
      std::vector<double> r;
      for (int m = opt.m_lo; m <= opt.m_hi; ++m) r.push_back(detail::sing_ratio(w, t0 + dir * std::pow(10.0, -m)));
      auto [run, last] = detail::tail_growth(r);
      if (run > best_run || (run == best_run && last > growth)) {
        best_run = run;
        growth = last;
      }
    }
    SingularityReport rep;
    rep.point = t0;
    rep.growth = growth;
    auto ord = local_order(Dz, t0);
    rep.estimated_order = ord.order;
    rep.fitted_exponent = ord.slope;
    rep.residual = ord.residual;
    if (best_run >= 3) rep.kind = SingKind::StrongSingularity;
    else if (ord.resolved && ord.order < 0) rep.kind = SingKind::GeneralizedPole;
    else rep.kind = SingKind::CleanEdge;
    out.push_back(rep);
  }

  // infinity
  {
    int best_run = 0;
    double growth = 0.0;
    for (int dir : {-1, 1}) {
      std::vector<double> r;
      for (int m = opt.m_lo; m <= opt.m_hi; ++m) r.push_back(detail::sing_ratio(w, dir * std::pow(10.0, m)));
      auto [run, last] = detail::tail_growth(r);
      if (run > best_run) {
        best_run = run;
        growth = last;
      }
    }
    SingularityReport rep;
    rep.at_infinity = true;
    rep.point = std::numeric_limits<double>::infinity();
    rep.growth = growth;
    rep.kind = best_run >= 3 ? SingKind::StrongSingularity : SingKind::CleanEdge;
    out.push_back(rep);
  }
  return out;
}

inline std::vector<SingularityReport> strong_singularities(const WeylPair& w) {
  return strong_singularities(w, eigenvalues(w));
}

inline std::vector<double> singular_points(const std::vector<SingularityReport>& v) {
  std::vector<double> out;
  for (const auto& r : v)
    if (r.kind == SingKind::StrongSingularity) out.push_back(r.point);
  return out;
}

struct ConditionIII {
  bool holds = true;
  bool undecided = false;
  std::vector<std::string> failures;
};

inline ConditionIII check_condition_iii(const WeylPair& w, const SpectrumResult& spec) {
  ConditionIII c;
  auto Dz = [&](cplx z) { return w.D(z); };
  const auto edges = w.all_edges();
  auto is_edge = [&](double t) {
    for (double e : edges)
      if (std::abs(t - e) <= 1e-9 * (1 + std::abs(e))) return true;
    return false;
  };
  for (double t : spec.embedded_zeros) {
    if (is_edge(t)) continue;
    c.holds = false;
    c.failures.push_back("generalized zero at " + std::to_string(t) + " inside a band");
  }
  std::vector<double> taus;
  for (double t : w.data.tau) {
    taus.push_back(t);
    taus.push_back(-t);
  }
  for (double e : edges) {
    bool in_tau = false;
    for (double t : taus) in_tau = in_tau || std::abs(t - e) <= 1e-9 * (1 + std::abs(e));
    auto ord = local_order(Dz, e);
    if (!ord.resolved) {
      c.undecided = true;
      c.failures.push_back("order unresolved at edge " + std::to_string(e));
      continue;
    }
    if (in_tau && ord.order > -0.5) {
      c.holds = false;
      c.failures.push_back("no generalized pole of order >= 1/2 at edge " + std::to_string(e));
    }
    if (!in_tau && ord.order > 0.5) {
      c.holds = false;
      c.failures.push_back("zero of order > 1/2 at edge " + std::to_string(e));
    }
  }
  return c;
}

inline ConditionIII check_condition_iii(const WeylPair& w) { return check_condition_iii(w, eigenvalues(w)); }

enum class Overall { SimilarSelfadjoint, SimilarNormal, NotSimilar, Undecided };

inline const char* to_string(Overall o) {
  switch (o) {
    case Overall::SimilarSelfadjoint: return "SimilarSelfadjoint";
    case Overall::SimilarNormal: return "SimilarNormal";
    case Overall::NotSimilar: return "NotSimilar";
    case Overall::Undecided: return "Undecided";
  }
  return "?";
}

inline const char* short_name(Overall o) {
  switch (o) {
    case Overall::SimilarSelfadjoint: return "S-A";
    case Overall::SimilarNormal: return "Norm";
    case Overall::NotSimilar: return "NonSim";
    case Overall::Undecided: return "Undecided";
  }
  return "?";
}

struct Verdict {
  bool ess_similar_selfadjoint = false;
  bool all_eigenvalues_simple = true;
  Overall overall = Overall::Undecided;
  std::vector<SingularityReport> singularities;  // strong ones only
  std::vector<SingularityReport> candidates;     // everything examined
  SpectrumResult spectrum;
  ConditionIII condition_iii;
  DefinitizableResult definitizable;
  bool boundary = false;
  std::vector<std::string> notes;
};

inline Verdict classify_similarity(const WeylPair& w, const SingularityOptions& opt = {}) {
  Verdict v;
  v.spectrum = eigenvalues(w);
  v.candidates = strong_singularities(w, v.spectrum, opt);
  for (const auto& s : v.candidates)
    if (s.kind == SingKind::StrongSingularity) v.singularities.push_back(s);
  v.condition_iii = check_condition_iii(w, v.spectrum);
  v.definitizable = definitizable(w);

  v.ess_similar_selfadjoint = v.singularities.empty();
  bool real = true;
  for (const auto& e : v.spectrum.eigenvalues) {
    if (e.alg_mult != 1) v.all_eigenvalues_simple = false;
    if (e.z.imag() != 0.0) real = false;
  }
  if (!v.ess_similar_selfadjoint) v.overall = Overall::NotSimilar;
  else if (!v.all_eigenvalues_simple) v.overall = Overall::NotSimilar;
  else v.overall = real ? Overall::SimilarSelfadjoint : Overall::SimilarNormal;

  if (v.condition_iii.undecided) v.notes.push_back("condition (iii) has unresolved orders");
  else if (v.condition_iii.holds != v.ess_similar_selfadjoint) {
    v.notes.push_back("condition (iii) disagrees with the singularity scan");
    v.overall = Overall::Undecided;
  }

  // closeness to a parameter boundary: an eigenvalue about to hit the
  // essential spectrum, or a zero of D about to hit an edge
  const double sc = w.data.scale();
  for (const auto& e : v.spectrum.eigenvalues) {
    double dist = std::numeric_limits<double>::infinity();
    for (const auto& iv : v.spectrum.essential) {
      double dx = std::max({iv.lo - e.z.real(), e.z.real() - iv.hi, 0.0});
      dist = std::min(dist, std::hypot(dx, e.z.imag()));
    }
    if (dist < 1e-2 * sc) v.boundary = true;
  }
  for (double z : v.spectrum.embedded_zeros)
    for (double e : w.all_edges())
      if (std::abs(z - e) < 1e-3 * sc && std::abs(z - e) > 0.0) v.boundary = true;
  for (const auto& s : v.candidates)
    if (!s.at_infinity && s.kind != SingKind::StrongSingularity && s.growth > 2.0 && s.growth < 4.5)
      v.boundary = true;
  if (v.boundary) v.notes.push_back("BOUNDARY: parameters sit near a change of the table row");
  return v;
}

}  // namespace indefsl
