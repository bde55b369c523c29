#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "errors.hpp"

namespace indefsl {

using cplx = std::complex<double>;

// Real polynomial, coefficients in ascending degree.
class RealPoly {
 public:
  RealPoly() = default;
  RealPoly(std::initializer_list<double> c) : c_(c) { trim(); }
  explicit RealPoly(std::vector<double> c) : c_(std::move(c)) { trim(); }

  static RealPoly constant(double v) { return RealPoly(std::vector<double>{v}); }
  static RealPoly monomial_root(double r) { return RealPoly({-r, 1.0}); }

  static RealPoly from_roots(const std::vector<double>& roots, double lead = 1.0) {
    RealPoly p = constant(lead);
    for (double r : roots) p = p * monomial_root(r);
    return p;
  }

  const std::vector<double>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  double lead() const { return c_.empty() ? 0.0 : c_.back(); }
  double operator[](std::size_t i) const { return i < c_.size() ? c_[i] : 0.0; }

  template <class T>
  T eval(T z) const {
    T acc = T(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + T(*it);
    return acc;
  }
  template <class T>
  T operator()(T z) const { return eval(z); }

  // sum |a_i| |z|^i, the scale used for backward error.
  double abs_eval(double r) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * r + std::abs(*it);
    return acc;
  }

  double norm1() const {
    double s = 0.0;
    for (double v : c_) s += std::abs(v);
    return s;
  }
  double norm_inf() const {
    double s = 0.0;
    for (double v : c_) s = std::max(s, std::abs(v));
    return s;
  }

  RealPoly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<double> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * double(i);
    return RealPoly(std::move(d));
  }

  // p(-x)
  RealPoly reflect() const {
    std::vector<double> d = c_;
    for (std::size_t i = 1; i < d.size(); i += 2) d[i] = -d[i];
    return RealPoly(std::move(d));
  }

  // drop leading coefficients below rel * norm_inf
  RealPoly chopped(double rel) const {
    std::vector<double> d = c_;
    double s = norm_inf();
    while (!d.empty() && std::abs(d.back()) <= rel * s) d.pop_back();
    return RealPoly(std::move(d));
  }

  friend RealPoly operator+(const RealPoly& a, const RealPoly& b) {
    std::vector<double> d(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = a[i] + b[i];
    return RealPoly(std::move(d));
  }
  friend RealPoly operator-(const RealPoly& a) {
    std::vector<double> d = a.c_;
    for (double& v : d) v = -v;
    return RealPoly(std::move(d));
  }
  friend RealPoly operator-(const RealPoly& a, const RealPoly& b) { return a + (-b); }
  friend RealPoly operator*(const RealPoly& a, const RealPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<double> d(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) d[i + j] += a.c_[i] * b.c_[j];
    return RealPoly(std::move(d));
  }
  friend RealPoly operator*(double s, const RealPoly& a) {
    std::vector<double> d = a.c_;
    for (double& v : d) v *= s;
    return RealPoly(std::move(d));
  }

  // synthetic/long division: a = q*b + r
  static void divmod(const RealPoly& a, const RealPoly& b, RealPoly& q, RealPoly& r) {
    if (b.is_zero()) throw Error(ErrorKind::DivisionRemainder, "division by zero polynomial");
    std::vector<double> rem = a.c_;
    int db = b.degree();
    int dq = a.degree() - db;
    if (dq < 0) {
      q = {};
      r = a;
      return;
    }
    std::vector<double> qc(dq + 1, 0.0);
    for (int k = dq; k >= 0; --k) {
      double f = rem[k + db] / b.lead();
      qc[k] = f;
      for (int j = 0; j <= db; ++j) rem[k + j] -= f * b.c_[j];
      rem[k + db] = 0.0;
    }
    rem.resize(db);
    q = RealPoly(std::move(qc));
    r = RealPoly(std::move(rem));
  }

  friend bool operator==(const RealPoly&, const RealPoly&) = default;

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  }
  std::vector<double> c_;
};

struct Root {
  cplx z;
  int mult = 1;
};

struct RootOptions {
  int max_iter = 200;
  double cluster_tol = 1e-6;
  double real_tol = 1e-9;
};

namespace detail {

inline std::vector<cplx> aberth(const RealPoly& p, int max_iter) {
  const int n = p.degree();
  std::vector<double> a(p.coeffs());
  double lc = a.back();
  for (double& v : a) v /= lc;
  RealPoly m(a);
  RealPoly dm = m.derivative();

  // Fujiwara-type bound for the starting circle
  double rad = 0.0;
  for (int i = 0; i < n; ++i) rad = std::max(rad, std::pow(std::abs(a[i]), 1.0 / (n - i)));
  rad = std::max(2.0 * rad, 1e-3);
  std::vector<cplx> z(n);
  for (int k = 0; k < n; ++k) {
    double ang = 2.0 * std::numbers::pi * k / n + 0.4;
    z[k] = std::polar(0.5 * rad, ang);
  }
  std::vector<bool> done(n, false);
  for (int it = 0; it < max_iter; ++it) {
    bool all = true;
    for (int k = 0; k < n; ++k) {
      if (done[k]) continue;
      cplx pv = m.eval(z[k]);
      double be = m.abs_eval(std::abs(z[k]));
      if (std::abs(pv) <= 4.0 * std::numeric_limits<double>::epsilon() * be) {
        done[k] = true;
        continue;
      }
      all = false;
      cplx w = pv / dm.eval(z[k]);
      cplx s = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != k) s += 1.0 / (z[k] - z[j]);
      cplx step = w / (1.0 - w * s);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) step = w;
      z[k] -= step;
      if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z[k]))) done[k] = true;
    }
    if (all) return z;
  }
  for (int k = 0; k < n; ++k) {
    double be = m.abs_eval(std::abs(z[k]));
    if (std::abs(m.eval(z[k])) > 1e-9 * be)
      throw Error(ErrorKind::NonConvergence, "Aberth iteration did not converge");
  }
  return z;
}

}  // namespace detail

// All complex roots with multiplicities; conjugate-closed for real input.
inline std::vector<Root> poly_roots(const RealPoly& p, const RootOptions& opt = {}) {
  if (p.degree() < 1) throw Error(ErrorKind::NonConvergence, "poly_roots needs degree >= 1");
  std::vector<double> c = p.coeffs();
  int zeros = 0;
  while (c.front() == 0.0) {
    c.erase(c.begin());
    ++zeros;
  }
  std::vector<cplx> raw(zeros, cplx(0.0));
  RealPoly q(c);
  if (q.degree() >= 1) {
    auto z = detail::aberth(q, opt.max_iter);
    // Newton polish on the original polynomial
    RealPoly dq = q.derivative();
    for (auto& r : z) {
      for (int i = 0; i < 3; ++i) {
        cplx d = dq.eval(r);
        if (std::abs(d) == 0.0) break;
        cplx nr = r - q.eval(r) / d;
        if (std::abs(q.eval(nr)) < std::abs(q.eval(r))) r = nr;
        else break;
      }
    }
    raw.insert(raw.end(), z.begin(), z.end());
  }

  // cluster
  std::vector<Root> out;
  std::vector<bool> used(raw.size(), false);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (used[i]) continue;
    cplx sum = raw[i];
    int cnt = 1;
    used[i] = true;
    for (std::size_t j = i + 1; j < raw.size(); ++j) {
      if (used[j]) continue;
      if (std::abs(raw[j] - raw[i]) <= opt.cluster_tol * (1.0 + std::abs(raw[i]))) {
        used[j] = true;
        sum += raw[j];
        ++cnt;
      }
    }
    out.push_back({sum / double(cnt), cnt});
  }
  for (auto& r : out)
    if (std::abs(r.z.imag()) < opt.real_tol * (1.0 + std::abs(r.z))) r.z = {r.z.real(), 0.0};

  // conjugate pairing
  std::vector<Root> paired;
  std::vector<bool> taken(out.size(), false);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (taken[i]) continue;
    taken[i] = true;
    if (out[i].z.imag() == 0.0) {
      paired.push_back(out[i]);
      continue;
    }
    std::size_t best = out.size();
    double bd = 1e300;
    for (std::size_t j = 0; j < out.size(); ++j) {
      if (taken[j] || out[j].z.imag() * out[i].z.imag() >= 0.0) continue;
      double d = std::abs(out[j].z - std::conj(out[i].z));
      if (d < bd) {
        bd = d;
        best = j;
      }
    }
    if (best == out.size()) {
      // unpaired: the partner was merged elsewhere, snap to real
      paired.push_back({cplx(out[i].z.real(), 0.0), out[i].mult});
      continue;
    }
    taken[best] = true;
    cplx up = out[i].z.imag() > 0 ? out[i].z : out[best].z;
    cplx lo = out[i].z.imag() > 0 ? out[best].z : out[i].z;
    cplx m = 0.5 * (up + std::conj(lo));
    int mult = std::min(out[i].mult, out[best].mult);
    paired.push_back({m, mult});
    paired.push_back({std::conj(m), mult});
  }
  std::sort(paired.begin(), paired.end(), [](const Root& a, const Root& b) {
    if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
    return a.z.imag() < b.z.imag();
  });
  return paired;
}

}  // namespace indefsl
