#include "fringe/fp_solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "fringe/synth.hpp"

namespace fringe {

namespace {

void check_inputs(const ScalarField& g, const ScalarField& omega, const SolverConfig& cfg) {
  if (!g.same_shape(omega))
    throw std::invalid_argument("fp solver: pattern/carrier dimension mismatch");
  if (cfg.lambda <= 0.0 || cfg.beta <= 0.0 || cfg.eps <= 0.0)
    throw std::invalid_argument("fp solver: lambda, beta, eps must be positive");
}

// 1 / sqrt(|grad d|^2 + beta), the lagged TV diffusivity.
ScalarField lagged_weight(const ScalarField& d, double beta) {
  ScalarField m = magnitude_smoothed(grad(d), beta);
  for (double& v : m.values) v = 1.0 / v;
  return m;
}

double data_fit_residual(const FringeEstimate& est, const ScalarField& g,
                         const ScalarField& omega) {
  const ScalarField fit = eval_fringe(est.a, est.b, est.phi, omega);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double d = fit.values[k] - g.values[k];
    num += d * d;
    den += g.values[k] * g.values[k];
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-12);
}

}  // namespace

FpState fp_init(const ScalarField& g, const ScalarField& omega) {
  FpState st;
  st.estimate.phi = ScalarField(g.width, g.height, 0.0);
  st.estimate.b = ScalarField(g.width, g.height, 0.0);
  st.estimate.a = ScalarField(g.width, g.height, 0.0);
  st.psi = omega;
  return st;
}

FpState fp_step(const FpState& state, const ScalarField& g, const ScalarField& omega,
                const SolverConfig& cfg) {
  check_inputs(g, omega, cfg);
  const int w = g.width, h = g.height;
  const double lambda = cfg.lambda;
  const ScalarField& phi = state.estimate.phi;
  const ScalarField& b = state.estimate.b;
  const ScalarField& a = state.estimate.a;

  ScalarField coeff_phi(w, h), rhs_phi(w, h);
  for (std::size_t k = 0; k < rhs_phi.size(); ++k) {
    const double s = std::sin(state.psi.values[k]), c = std::cos(state.psi.values[k]);
    const double bk = b.values[k], ak = a.values[k], pk = phi.values[k];
    const double gk = g.values[k];
    coeff_phi.values[k] = lambda * bk * bk * s * s;
    rhs_phi.values[k] =
        lambda * (ak * bk * s + bk * bk * c * s + pk * bk * bk * s * s - gk * bk * s);
  }

  FpState next;
  next.estimate.phi =
      cg_solve({std::move(coeff_phi), 1.0, lagged_weight(phi, cfg.beta)}, rhs_phi, phi,
               cfg.linsolve).x;
  next.psi = ScalarField(w, h);
  for (std::size_t k = 0; k < next.psi.size(); ++k)
    next.psi.values[k] = omega.values[k] + next.estimate.phi.values[k];

  // The b and a solves see the refreshed psi; their right-hand sides keep the
  // iteration-k values of a and b, and the TV weights stay lagged at k. Stale
  // psi here locks the three solves into a joint limit cycle.
  ScalarField coeff_b(w, h), rhs_b(w, h);
  ScalarField coeff_a(w, h, lambda), rhs_a(w, h);
  for (std::size_t k = 0; k < rhs_b.size(); ++k) {
    const double c = std::cos(next.psi.values[k]);
    const double bk = b.values[k], ak = a.values[k], gk = g.values[k];
    coeff_b.values[k] = lambda * c * c;
    rhs_b.values[k] = -lambda * (ak - gk) * c;
    rhs_a.values[k] = -lambda * (bk * c - gk);
  }
  next.estimate.b =
      cg_solve({std::move(coeff_b), 1.0, lagged_weight(b, cfg.beta)}, rhs_b, b,
               cfg.linsolve).x;
  next.estimate.a =
      cg_solve({std::move(coeff_a), 1.0, lagged_weight(a, cfg.beta)}, rhs_a, a,
               cfg.linsolve).x;
  next.iteration = state.iteration + 1;
  return next;
}

std::pair<FringeEstimate, RunReport> fp_demodulate(const ScalarField& g,
                                                   const ScalarField& omega,
                                                   const SolverConfig& cfg,
                                                   const ScalarField* truth_phi) {
  check_inputs(g, omega, cfg);
  FpState st = fp_init(g, omega);
  RunReport report;
  const auto t0 = std::chrono::steady_clock::now();

  for (int k = 1; k <= cfg.max_outer_iters; ++k) {
    FpState next = fp_step(st, g, omega, cfg);

    IterationRecord rec;
    rec.iter = k;
    rec.rel_phi = relative_change(next.estimate.phi, st.estimate.phi);
    rec.rel_b = relative_change(next.estimate.b, st.estimate.b);
    rec.rel_a = relative_change(next.estimate.a, st.estimate.a);
    rec.energy = energy(next.estimate, g, omega, cfg.lambda, cfg.beta);
    if (truth_phi) rec.q_err = q_error(next.estimate.phi, *truth_phi);
    rec.data_fit = data_fit_residual(next.estimate, g, omega);
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0).count();
    report.trace.push_back(rec);
    report.iterations = k;

    st = std::move(next);
    if (rec.rel_phi <= cfg.eps && rec.rel_b <= cfg.eps && rec.rel_a <= cfg.eps) {
      report.converged = true;
      break;
    }
  }

  report.total_wall_ms = report.trace.empty() ? 0.0 : report.trace.back().wall_ms;
  if (truth_phi && !report.trace.empty()) report.final_q = report.trace.back().q_err;
  return {std::move(st.estimate), std::move(report)};
}

double energy(const FringeEstimate& estimate, const ScalarField& g, const ScalarField& omega,
              double lambda, double beta) {
  if (beta < 0.0) throw std::invalid_argument("energy: beta must be >= 0");
  const ScalarField fit = eval_fringe(estimate.a, estimate.b, estimate.phi, omega);
  const ScalarField tv_phi = magnitude_smoothed(grad(estimate.phi), beta);
  const ScalarField tv_a = magnitude_smoothed(grad(estimate.a), beta);
  const ScalarField tv_b = magnitude_smoothed(grad(estimate.b), beta);
  double e = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double d = fit.values[k] - g.values[k];
    e += 0.5 * lambda * d * d + tv_phi.values[k] + tv_a.values[k] + tv_b.values[k];
  }
  return e;
}

std::array<double, 3> euler_lagrange_residuals(const FringeEstimate& estimate,
                                               const ScalarField& g, const ScalarField& omega,
                                               double lambda, double beta) {
  const ScalarField fit = eval_fringe(estimate.a, estimate.b, estimate.phi, omega);

  auto tv_term = [&](const ScalarField& d) {
    const VectorField gd = grad(d);
    const ScalarField m = magnitude_smoothed(gd, beta);
    VectorField scaled(d.width, d.height);
    for (std::size_t k = 0; k < gd.size(); ++k) {
      scaled.v1[k] = gd.v1[k] / m.values[k];
      scaled.v2[k] = gd.v2[k] / m.values[k];
    }
    return div(scaled);
  };

  const ScalarField tv_phi = tv_term(estimate.phi);
  const ScalarField tv_b = tv_term(estimate.b);
  const ScalarField tv_a = tv_term(estimate.a);

  double num[3] = {0, 0, 0}, den_data[3] = {0, 0, 0}, den_tv[3] = {0, 0, 0};
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double resid = fit.values[k] - g.values[k];
    const double psi = omega.values[k] + estimate.phi.values[k];
    const double data_phi = lambda * resid * (-estimate.b.values[k] * std::sin(psi));
    const double data_b = lambda * resid * std::cos(psi);
    const double data_a = lambda * resid;
    const double r_phi = data_phi - tv_phi.values[k];
    const double r_b = data_b - tv_b.values[k];
    const double r_a = data_a - tv_a.values[k];
    num[0] += r_phi * r_phi;
    num[1] += r_b * r_b;
    num[2] += r_a * r_a;
    den_data[0] += data_phi * data_phi;
    den_data[1] += data_b * data_b;
    den_data[2] += data_a * data_a;
    den_tv[0] += tv_phi.values[k] * tv_phi.values[k];
    den_tv[1] += tv_b.values[k] * tv_b.values[k];
    den_tv[2] += tv_a.values[k] * tv_a.values[k];
  }
  std::array<double, 3> rel;
  for (int d = 0; d < 3; ++d) {
    const double scale = std::max({std::sqrt(den_data[d]), std::sqrt(den_tv[d]), 1e-12});
    rel[d] = std::sqrt(num[d]) / scale;
  }
  return rel;
}

}  // namespace fringe
