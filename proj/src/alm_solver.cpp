#include "fringe/alm_solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "fringe/fp_solver.hpp"
#include "fringe/synth.hpp"

namespace fringe {

namespace {

constexpr double kEnergyEvalBeta = 1e-6;  // smoothing for the diagnostic energy only

void check_inputs(const ScalarField& g, const ScalarField& omega, const SolverConfig& cfg) {
  if (!g.same_shape(omega))
    throw std::invalid_argument("alm solver: pattern/carrier dimension mismatch");
  if (cfg.lambda <= 0.0 || cfg.r <= 0.0 || cfg.eps <= 0.0)
    throw std::invalid_argument("alm solver: lambda, r, eps must be positive");
}

VectorField shrink_one(const ScalarField& d, const VectorField& mu, double r) {
  const VectorField gd = grad(d);
  VectorField w(d.width, d.height);
  for (std::size_t k = 0; k < w.size(); ++k) {
    w.v1[k] = r * gd.v1[k] - mu.v1[k];
    w.v2[k] = r * gd.v2[k] - mu.v2[k];
  }
  return soft_threshold(w, r);
}

VectorField ascend_one(const VectorField& mu, const VectorField& q, const ScalarField& d,
                       double r) {
  const VectorField gd = grad(d);
  VectorField out = mu;
  for (std::size_t k = 0; k < out.size(); ++k) {
    out.v1[k] += r * (q.v1[k] - gd.v1[k]);
    out.v2[k] += r * (q.v2[k] - gd.v2[k]);
  }
  return out;
}

double constraint_residual(const VectorField& q, const ScalarField& d) {
  const VectorField gd = grad(d);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    const double e1 = q.v1[k] - gd.v1[k];
    const double e2 = q.v2[k] - gd.v2[k];
    num += e1 * e1 + e2 * e2;
    den += gd.v1[k] * gd.v1[k] + gd.v2[k] * gd.v2[k];
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-12);
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

AlmState alm_init(const ScalarField& g) {
  AlmState st;
  st.estimate.phi = ScalarField(g.width, g.height, 0.0);
  st.estimate.b = ScalarField(g.width, g.height, 0.0);
  st.estimate.a = ScalarField(g.width, g.height, 0.0);
  st.q_phi = VectorField(g.width, g.height);
  st.q_b = VectorField(g.width, g.height);
  st.q_a = VectorField(g.width, g.height);
  st.mu_phi = VectorField(g.width, g.height);
  st.mu_b = VectorField(g.width, g.height);
  st.mu_a = VectorField(g.width, g.height);
  return st;
}

FringeEstimate alm_primal_step(const AlmState& state, const ScalarField& g,
                               const ScalarField& omega, const SolverConfig& cfg) {
  check_inputs(g, omega, cfg);
  const int w = g.width, h = g.height;
  const double lambda = cfg.lambda, r = cfg.r;
  const ScalarField& phi = state.estimate.phi;
  const ScalarField& b = state.estimate.b;
  const ScalarField& a = state.estimate.a;

  const ScalarField div_mu_phi = div(state.mu_phi);
  const ScalarField div_q_phi = div(state.q_phi);
  const ScalarField div_mu_b = div(state.mu_b);
  const ScalarField div_q_b = div(state.q_b);
  const ScalarField div_mu_a = div(state.mu_a);
  const ScalarField div_q_a = div(state.q_a);

  ScalarField coeff_phi(w, h), rhs_phi(w, h);
  for (std::size_t k = 0; k < rhs_phi.size(); ++k) {
    const double psi = omega.values[k] + phi.values[k];
    const double s = std::sin(psi), c = std::cos(psi);
    const double bk = b.values[k], ak = a.values[k], pk = phi.values[k];
    const double gk = g.values[k];
    coeff_phi.values[k] = lambda * bk * bk * s * s;
    rhs_phi.values[k] = lambda * ak * bk * s + lambda * bk * bk * c * s +
                        lambda * pk * bk * bk * s * s - lambda * gk * bk * s -
                        div_mu_phi.values[k] - r * div_q_phi.values[k];
  }

  FringeEstimate next;
  next.phi = cg_solve({std::move(coeff_phi), r, std::nullopt}, rhs_phi, phi, cfg.linsolve).x;

  // psi is refreshed from the new phase before the b and a solves; their
  // right-hand sides keep the iteration-k values of a and b. Stale psi here
  // locks the three solves into a joint limit cycle.
  ScalarField coeff_b(w, h), rhs_b(w, h);
  ScalarField coeff_a(w, h, lambda), rhs_a(w, h);
  for (std::size_t k = 0; k < rhs_b.size(); ++k) {
    const double psi = omega.values[k] + next.phi.values[k];
    const double c = std::cos(psi);
    const double bk = b.values[k], ak = a.values[k], gk = g.values[k];
    coeff_b.values[k] = lambda * c * c;
    rhs_b.values[k] = -lambda * (ak - gk) * c - div_mu_b.values[k] - r * div_q_b.values[k];
    rhs_a.values[k] = -lambda * (bk * c - gk) - div_mu_a.values[k] - r * div_q_a.values[k];
  }
  next.b = cg_solve({std::move(coeff_b), r, std::nullopt}, rhs_b, b, cfg.linsolve).x;
  next.a = cg_solve({std::move(coeff_a), r, std::nullopt}, rhs_a, a, cfg.linsolve).x;
  return next;
}

ShrinkStep alm_shrink_step(const AlmState& state, const SolverConfig& cfg) {
  return {shrink_one(state.estimate.phi, state.mu_phi, cfg.r),
          shrink_one(state.estimate.b, state.mu_b, cfg.r),
          shrink_one(state.estimate.a, state.mu_a, cfg.r)};
}

MultiplierStep alm_multiplier_update(const AlmState& state, const SolverConfig& cfg) {
  return {ascend_one(state.mu_phi, state.q_phi, state.estimate.phi, cfg.r),
          ascend_one(state.mu_b, state.q_b, state.estimate.b, cfg.r),
          ascend_one(state.mu_a, state.q_a, state.estimate.a, cfg.r)};
}

std::pair<FringeEstimate, RunReport> alm_demodulate(const ScalarField& g,
                                                    const ScalarField& omega,
                                                    const SolverConfig& cfg,
                                                    const ScalarField* truth_phi) {
  check_inputs(g, omega, cfg);
  AlmState st = alm_init(g);
  RunReport report;
  const auto t0 = std::chrono::steady_clock::now();

  for (int k = 1; k <= cfg.max_outer_iters; ++k) {
    FringeEstimate prev = st.estimate;

    st.estimate = alm_primal_step(st, g, omega, cfg);
    ShrinkStep qs = alm_shrink_step(st, cfg);
    st.q_phi = std::move(qs.q_phi);
    st.q_b = std::move(qs.q_b);
    st.q_a = std::move(qs.q_a);
    MultiplierStep mus = alm_multiplier_update(st, cfg);
    st.mu_phi = std::move(mus.mu_phi);
    st.mu_b = std::move(mus.mu_b);
    st.mu_a = std::move(mus.mu_a);
    st.iteration = k;

    IterationRecord rec;
    rec.iter = k;
    rec.rel_phi = relative_change(st.estimate.phi, prev.phi);
    rec.rel_b = relative_change(st.estimate.b, prev.b);
    rec.rel_a = relative_change(st.estimate.a, prev.a);
    rec.energy = energy(st.estimate, g, omega, cfg.lambda, kEnergyEvalBeta);
    rec.res_q_phi = constraint_residual(st.q_phi, st.estimate.phi);
    rec.res_q_b = constraint_residual(st.q_b, st.estimate.b);
    rec.res_q_a = constraint_residual(st.q_a, st.estimate.a);
    if (truth_phi) rec.q_err = q_error(st.estimate.phi, *truth_phi);
    rec.data_fit = data_fit_residual(st.estimate, g, omega);
    rec.mu_norm_phi = l2_norm(st.mu_phi);
    rec.mu_norm_b = l2_norm(st.mu_b);
    rec.mu_norm_a = l2_norm(st.mu_a);
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0).count();
    report.trace.push_back(rec);
    report.iterations = k;

    if (rec.rel_phi <= cfg.eps && rec.rel_b <= cfg.eps && rec.rel_a <= cfg.eps) {
      report.converged = true;
      break;
    }
  }

  report.total_wall_ms = report.trace.empty() ? 0.0 : report.trace.back().wall_ms;
  if (truth_phi && !report.trace.empty()) report.final_q = report.trace.back().q_err;
  return {std::move(st.estimate), std::move(report)};
}

}  // namespace fringe
