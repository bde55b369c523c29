#pragma once

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>

#include "errors.hpp"

namespace indefsl::quad {

// integral over [a, b], b may be +inf; endpoint singularities allowed
template <class F>
double integrate(F f, double a, double b, double tol = 1e-11) {
  if (!(b > a)) return 0.0;
  if (std::isinf(b)) {
    static thread_local boost::math::quadrature::exp_sinh<double> es;
    double err = 0.0;
    return es.integrate(
        [&](double t) {
          double v = f(a + t);
          return std::isfinite(v) ? v : 0.0;
        },
        0.0, std::numeric_limits<double>::infinity(), tol, &err);
  }
  static thread_local boost::math::quadrature::tanh_sinh<double> ts;
  double err = 0.0;
  return ts.integrate(
      [&](double t) {
        double v = f(t);
        return std::isfinite(v) ? v : 0.0;
      },
      a, b, tol, &err);
}

template <class F>
std::complex<double> integrate_c(F f, double a, double b, double tol = 1e-11) {
  double re = integrate([&](double t) { return f(t).real(); }, a, b, tol);
  double im = integrate([&](double t) { return f(t).imag(); }, a, b, tol);
  return {re, im};
}

// smooth integrands on finite intervals
template <class F>
double gk(F f, double a, double b, double tol = 1e-10) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, tol);
}

enum class Convergence { Convergent, Divergent, Undecided };

inline const char* to_string(Convergence c) {
  switch (c) {
    case Convergence::Convergent: return "convergent";
    case Convergence::Divergent: return "divergent";
    case Convergence::Undecided: return "undecided";
  }
  return "?";
}

// Tri-state test for integral of g over (x0 + delta, x0 + r): dyadic shells
// [r 2^{-m-1}, r 2^{-m}] give increments; growth >= 1.8 three times running
// means divergent, decay <= 0.6 three times running means convergent.
template <class G>
Convergence shell_test(G g, double x0, double r, int dir) {
  double prev = -1.0;
  int grow = 0, decay = 0;
  for (int m = 4; m < 40; ++m) {
    double hi = r * std::ldexp(1.0, -m), lo = hi / 2;
    double inc = std::abs(integrate([&](double s) { return g(x0 + dir * s); }, lo, hi, 1e-9));
    if (prev > 0.0) {
      double ratio = inc / prev;
      if (ratio >= 1.8) { ++grow; decay = 0; }
      else if (ratio <= 0.6) { ++decay; grow = 0; }
      else { grow = 0; decay = 0; }
      if (grow >= 3) return Convergence::Divergent;
      if (decay >= 3) return Convergence::Convergent;
    } else if (prev == 0.0 && inc == 0.0) {
      ++decay;
      if (decay >= 3) return Convergence::Convergent;
    }
    prev = inc;
  }
  return Convergence::Undecided;
}

}  // namespace indefsl::quad
