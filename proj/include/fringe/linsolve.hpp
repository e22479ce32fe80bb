#pragma once

#include <optional>
#include <vector>

#include "fringe/field.hpp"

namespace fringe {

struct LinSolveConfig {
  double rel_residual_tol = 1e-6;
  int max_inner_iters = 200;
  double nullspace_shift = 1e-12;  // pins the constant mode when coeff is all-zero
};

// The screened Poisson operator  d -> coeff .* d - r  div(diffusivity .* grad d).
// diffusivity defaults to all-ones (uniform diffusion); the fixed-point solver
// installs its lagged 1/|grad d|_beta weight there with diffusion_weight = 1.
struct ScreenedPoissonOperator {
  ScalarField coeff;                       // pointwise c(x) >= 0
  double diffusion_weight = 1.0;           // r > 0
  std::optional<ScalarField> diffusivity;  // pointwise > 0 when present
};

ScalarField apply(const ScreenedPoissonOperator& op, const ScalarField& d);

struct CgResult {
  ScalarField x;
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = true;
  std::vector<double> residual_history;  // ||r|| after each CG iteration
};

// Conjugate gradient on the SPD system  op(x) = rhs, warm-started from x0.
// Stops at ||op(x) - rhs|| <= rel_residual_tol * ||rhs|| or at the iteration
// cap (reported via converged=false, not fatal). A non-finite intermediate
// value throws with the offending iteration index.
CgResult cg_solve(const ScreenedPoissonOperator& op, const ScalarField& rhs,
                  const ScalarField& x0, const LinSolveConfig& cfg = {});

}  // namespace fringe
