#pragma once

#include <random>

#include "indefsl/bands.hpp"

namespace testsupport {

// random admissible band structure with n gaps, edges in [lo, lo + span]
inline indefsl::BandStructure random_bands(std::mt19937& rng, int n, double lo = -2.0, double span = 4.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> pts;
  while ((int)pts.size() < 2 * n + 1) {
    double x = lo + span * u(rng);
    bool ok = true;
    for (double y : pts) ok = ok && std::abs(x - y) > 0.02 * span;
    if (ok) pts.push_back(x);
  }
  std::sort(pts.begin(), pts.end());
  indefsl::BandStructure b;
  b.mu_r.push_back(pts[0]);
  for (int j = 0; j < n; ++j) {
    b.mu_l.push_back(pts[2 * j + 1]);
    b.mu_r.push_back(pts[2 * j + 2]);
    double t = 0.05 + 0.9 * u(rng);
    b.xi.push_back(pts[2 * j + 1] + t * (pts[2 * j + 2] - pts[2 * j + 1]));
    b.signs.push_back(u(rng) < 0.5 ? -1 : 1);
  }
  return b;
}

}  // namespace testsupport
