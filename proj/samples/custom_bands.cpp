// Classify an operator given by its band structure, and evaluate its Weyl functions.
#include <cstdio>

#include "indefsl/classify.hpp"
#include "indefsl/criteria.hpp"

using namespace indefsl;

int main() {
  // spectrum of L: [-1, 0] u [0.5, 1] u [2, inf); one Dirichlet point per gap
  BandStructure b{{-1.0, 0.5, 2.0}, {0.0, 1.0}, {0.2, 1.5}, {1, -1}};
  WeylPair w = WeylPair::finite_zone(b);

  for (cplx z : {cplx(0.0, 1.0), cplx(0.75, 0.01), cplx(-3.0, 0.5)}) {
    auto p = w.M(Side::Plus, z), m = w.M(Side::Minus, z);
    if (p && m)
      std::printf("lambda = %g%+gi  M+ = %.6f%+.6fi  M- = %.6f%+.6fi\n", z.real(), z.imag(), p->real(), p->imag(),
                  m->real(), m->imag());
  }

  Verdict v = classify_similarity(w);
  std::printf("verdict: %s\n", to_string(v.overall));
  for (const auto& e : v.spectrum.eigenvalues)
    std::printf("  eigenvalue %.8f%+.8fi (multiplicity %d)\n", e.z.real(), e.z.imag(), e.alg_mult);
  for (double s : singular_points(v.singularities)) std::printf("  strong singularity at %.8f\n", s);
  std::printf("definitizable: %s\n", v.definitizable.definitizable ? "yes" : "no");

  for (const auto& r : check_all(w).all())
    std::printf("  %-22s %-18s %.6g\n", r.name.c_str(), r.status.c_str(), r.value);
}
