#pragma once

#include <utility>

#include "fringe/demod.hpp"
#include "fringe/report.hpp"

namespace fringe {

// Full splitting state: primal estimate, auxiliary gradients q_d and
// Lagrange multipliers mu_d for d in {phi, b, a}. All zero at k = 0.
struct AlmState {
  FringeEstimate estimate;
  VectorField q_phi, q_b, q_a;
  VectorField mu_phi, mu_b, mu_a;
  int iteration = 0;
};

AlmState alm_init(const ScalarField& g);

// The three screened-Poisson solves
//   (lambda b^2 sin^2 psi - r Lap) phi = lambda(a b sin psi + b^2 cos psi sin psi
//        + phi b^2 sin^2 psi - g b sin psi) - div mu_phi - r div q_phi
//   (lambda cos^2 psi - r Lap) b = -lambda(a - g) cos psi - div mu_b - r div q_b
//   (lambda - r Lap) a = -lambda(b cos psi - g) - div mu_a - r div q_a
// with every right-hand side taken at iteration k (Jacobi across variables).
FringeEstimate alm_primal_step(const AlmState& state, const ScalarField& g,
                               const ScalarField& omega, const SolverConfig& cfg);

struct ShrinkStep {
  VectorField q_phi, q_b, q_a;
};

// q_d = soft_threshold(r grad d - mu_d, r); expects state.estimate already
// advanced by the primal step while the multipliers are still at k.
ShrinkStep alm_shrink_step(const AlmState& state, const SolverConfig& cfg);

struct MultiplierStep {
  VectorField mu_phi, mu_b, mu_a;
};

// mu_d += r (q_d - grad d); expects estimate and q already advanced.
MultiplierStep alm_multiplier_update(const AlmState& state, const SolverConfig& cfg);

// Full augmented Lagrangian demodulation: primal, shrinkage and multiplier
// sweeps until the relative change of each of phi, b, a drops below cfg.eps.
// truth_phi, when given, fills the q_err trace column.
std::pair<FringeEstimate, RunReport> alm_demodulate(const ScalarField& g,
                                                    const ScalarField& omega,
                                                    const SolverConfig& cfg,
                                                    const ScalarField* truth_phi = nullptr);

}  // namespace fringe
