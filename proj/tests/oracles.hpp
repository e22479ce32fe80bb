#pragma once

#include <cmath>
#include <random>
#include <utility>

#include "fringe/field.hpp"

// Test-only oracles, independent of the library's solution paths.

namespace oracles {

// Exhaustive zoom-grid minimizer of a 2-D function over [c1 +- h] x [c2 +- h].
// Convex objectives land within ~h / (n-1)^levels of the true minimizer.
template <typename F>
std::pair<double, double> minimize_2d(F f, double c1, double c2, double h,
                                      int levels = 9, int n = 33) {
  for (int level = 0; level < levels; ++level) {
    double best = f(c1, c2), b1 = c1, b2 = c2;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double x = c1 - h + 2.0 * h * i / (n - 1);
        const double y = c2 - h + 2.0 * h * j / (n - 1);
        const double v = f(x, y);
        if (v < best) {
          best = v;
          b1 = x;
          b2 = y;
        }
      }
    }
    c1 = b1;
    c2 = b2;
    h *= 2.0 / (n - 1);
  }
  return {c1, c2};
}

// Pointwise shrinkage objective |q| + mu.q + (r/2)|q - gu|^2.
inline double shrink_objective(double q1, double q2, double mu1, double mu2, double gu1,
                               double gu2, double r) {
  const double e1 = q1 - gu1, e2 = q2 - gu2;
  return std::sqrt(q1 * q1 + q2 * q2) + mu1 * q1 + mu2 * q2 + 0.5 * r * (e1 * e1 + e2 * e2);
}

inline fringe::ScalarField random_field(int w, int h, unsigned seed, double lo = -1.0,
                                        double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  fringe::ScalarField f(w, h);
  for (double& v : f.values) v = dist(rng);
  return f;
}

inline fringe::VectorField random_vector_field(int w, int h, unsigned seed, double lo = -1.0,
                                               double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  fringe::VectorField f(w, h);
  for (double& v : f.v1) v = dist(rng);
  for (double& v : f.v2) v = dist(rng);
  return f;
}

}  // namespace oracles
