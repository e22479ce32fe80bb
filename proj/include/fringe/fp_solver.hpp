#pragma once

#include <array>
#include <utility>

#include "fringe/demod.hpp"
#include "fringe/report.hpp"

namespace fringe {

struct FpState {
  FringeEstimate estimate;
  ScalarField psi;  // omega + phi, recomputed at iteration boundaries
  int iteration = 0;
};

FpState fp_init(const ScalarField& g, const ScalarField& omega);

// One lagged-diffusivity pass: the three linear solves with coefficients
//   c_phi = lambda b^2 sin^2 psi,  c_b = lambda cos^2 psi,  c_a = lambda,
// diffusivity 1/sqrt(|grad d|^2 + beta), all right-hand sides taken at
// iteration k (Jacobi across variables, order phi, b, a).
FpState fp_step(const FpState& state, const ScalarField& g, const ScalarField& omega,
                const SolverConfig& cfg);

// Runs fp_step from the all-zero estimate until the relative change of each
// of phi, b, a drops below cfg.eps or the iteration cap is hit. truth_phi,
// when given, fills the q_err trace column.
std::pair<FringeEstimate, RunReport> fp_demodulate(const ScalarField& g,
                                                   const ScalarField& omega,
                                                   const SolverConfig& cfg,
                                                   const ScalarField* truth_phi = nullptr);

// (lambda/2) sum (I-g)^2 + sum |grad phi|_beta + |grad a|_beta + |grad b|_beta
// with |v|_beta = sqrt(|v|^2 + beta) and I = eval_fringe(a, b, phi, omega).
double energy(const FringeEstimate& estimate, const ScalarField& g, const ScalarField& omega,
              double lambda, double beta);

// Relative norms of the beta-smoothed Euler-Lagrange residuals in phi, b, a.
std::array<double, 3> euler_lagrange_residuals(const FringeEstimate& estimate,
                                               const ScalarField& g, const ScalarField& omega,
                                               double lambda, double beta);

}  // namespace fringe
