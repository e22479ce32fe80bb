#pragma once

#include <utility>

#include "fringe/field.hpp"
#include "fringe/linsolve.hpp"
#include "fringe/report.hpp"

namespace fringe {

struct TvDenoiseState {
  ScalarField u;
  VectorField q;
  VectorField mu;
  int iteration = 0;
};

// Solves (lambda - r Laplacian) u = lambda f - div(mu) - r div(q),
// warm-started from *warm when given.
ScalarField solve_u_subproblem(const ScalarField& f, const VectorField& q,
                               const VectorField& mu, double lambda, double r,
                               const LinSolveConfig& cfg = {},
                               const ScalarField* warm = nullptr);

// ROF total-variation denoising by augmented Lagrangian splitting: alternate
// the u solve, shrinkage of w = r grad u - mu, and the multiplier ascent
// mu += r (q - grad u), until the relative change of u drops below eps.
// An optional clean reference fills the q_err trace column.
std::pair<ScalarField, RunReport> tv_denoise(const ScalarField& f, double lambda, double r,
                                             double eps = 1e-5, int max_iters = 20000,
                                             const LinSolveConfig& lin_cfg = {},
                                             const ScalarField* clean = nullptr);

}  // namespace fringe
