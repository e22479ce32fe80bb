#pragma once

#include <cstdint>

#include "fringe/field.hpp"
#include "fringe/linsolve.hpp"

namespace fringe {

// Primal state of a demodulation run: phase, modulation and background.
struct FringeEstimate {
  ScalarField phi;
  ScalarField b;
  ScalarField a;
};

struct SolverConfig {
  double lambda = 10.0;      // data-term weight
  double r = 11.5;           // penalty constant (ALM) / diffusion weight
  double beta = 1e-3;        // TV smoothing constant (fixed-point method only)
  double eps = 1e-5;         // outer stopping tolerance on relative change
  int max_outer_iters = 20000;
  LinSolveConfig linsolve;
  std::uint64_t seed = 1;    // echoed into run metadata; solvers are deterministic
};

}  // namespace fringe
