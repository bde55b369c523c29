// Verdicts for the periodic one-zone examples over a xi grid.
#include <cstdio>

#include "indefsl/classify.hpp"

using namespace indefsl;

int main() {
  for (double k2 : {0.25, 0.5, 0.75}) {
    std::printf("q1, k2 = %.2f\n", k2);
    for (double xi = -2.0; xi <= 1.0 + 1e-9; xi += 0.25) {
      Verdict v = classify_similarity(WeylPair::example1(xi, k2));
      std::printf("  xi = %5.2f  %-9s", xi, v.boundary ? "BOUNDARY" : short_name(v.overall));
      for (double s : singular_points(v.singularities)) std::printf(" sing %.6f", s);
      for (const auto& e : v.spectrum.eigenvalues) std::printf(" eig %.6f%+.6fi", e.z.real(), e.z.imag());
      std::printf("\n");
    }
  }
  Verdict v = classify_similarity(WeylPair::example2(-0.75, 0.25));
  std::printf("q2, k2 = 0.25, xi = -0.75: %s, singularities", to_string(v.overall));
  for (double s : singular_points(v.singularities)) std::printf(" %.5f", s);
  std::printf("\n");
}
