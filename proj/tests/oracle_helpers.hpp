#pragma once

// Independent oracles used by the tests. These deliberately avoid the
// library's solver paths: grid scans and direct formula evaluation only.

#include <algorithm>
#include <cmath>
#include <vector>

#include "orthostab/spaces.hpp"

namespace oracle {

using orthostab::NormedSpace;
using orthostab::Vec;

/// Brute-force check that min over real t of ||x + t y|| stays >= ||x||,
/// scanning a wide logarithmic grid and refining around the best point.
/// Independent of the golden-section path in the library.
inline bool bj_orthogonal_grid(const NormedSpace& space, const Vec& x,
                               const Vec& y, double tol) {
  const auto g = [&](double t) {
    return orthostab::norm_of(space, Vec(x + t * y));
  };
  double best_t = 0.0;
  double best = g(0.0);
  std::vector<double> grid;
  grid.push_back(0.0);
  for (double mag = 1e-6; mag <= 1e6; mag *= 2.0) {
    grid.push_back(mag);
    grid.push_back(-mag);
  }
  for (double t : grid) {
    const double v = g(t);
    if (v < best) {
      best = v;
      best_t = t;
    }
  }
  double step = std::max(std::abs(best_t), 1.0);
  for (int round = 0; round < 200; ++round) {
    bool moved = false;
    for (double t2 : {best_t - step, best_t + step}) {
      const double v = g(t2);
      if (v < best) {
        best = v;
        best_t = t2;
        moved = true;
      }
    }
    if (!moved) step *= 0.5;
    if (step < 1e-14 * (1.0 + std::abs(best_t))) break;
  }
  return orthostab::norm_of(space, x) - best <= tol;
}

/// Plain Gram-Schmidt projector onto span{u, v}, written directly from the
/// textbook formulas.
inline orthostab::Mat projector_oracle(const Vec& u, const Vec& v) {
  Vec b1 = u / u.norm();
  Vec w = v - orthostab::cdot(v, b1) * b1;
  Vec b2 = w / w.norm();
  return orthostab::Mat(b1 * b1.adjoint() + b2 * b2.adjoint());
}

/// Geometric tail sum: noise_bound * sum_{k=1..n} ratio^-k.
inline double geometric_noise_bound(double noise_bound, double ratio, int n) {
  double s = 0.0;
  double term = 1.0;
  for (int k = 1; k <= n; ++k) {
    term /= ratio;
    s += term;
  }
  return noise_bound * s;
}

}  // namespace oracle
