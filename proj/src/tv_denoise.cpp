#include "fringe/tv_denoise.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "fringe/synth.hpp"

namespace fringe {

namespace {

// Augmented Lagrangian value (lambda/2)||u-f||^2 + sum|q| + sum mu.(q-grad u)
// + (r/2)||q - grad u||^2, summed over pixels.
double lagrangian_value(const ScalarField& u, const ScalarField& f, const VectorField& q,
                        const VectorField& mu, double lambda, double r) {
  const VectorField gu = grad(u);
  double val = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double d = u.values[k] - f.values[k];
    val += 0.5 * lambda * d * d;
    const double e1 = q.v1[k] - gu.v1[k];
    const double e2 = q.v2[k] - gu.v2[k];
    val += std::sqrt(q.v1[k] * q.v1[k] + q.v2[k] * q.v2[k]);
    val += mu.v1[k] * e1 + mu.v2[k] * e2;
    val += 0.5 * r * (e1 * e1 + e2 * e2);
  }
  return val;
}

double constraint_residual(const VectorField& q, const VectorField& gu) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    const double e1 = q.v1[k] - gu.v1[k];
    const double e2 = q.v2[k] - gu.v2[k];
    num += e1 * e1 + e2 * e2;
    den += gu.v1[k] * gu.v1[k] + gu.v2[k] * gu.v2[k];
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-12);
}

}  // namespace

ScalarField solve_u_subproblem(const ScalarField& f, const VectorField& q,
                               const VectorField& mu, double lambda, double r,
                               const LinSolveConfig& cfg, const ScalarField* warm) {
  if (!q.same_shape(f) || !mu.same_shape(f))
    throw std::invalid_argument("solve_u_subproblem: dimension mismatch");
  if (lambda <= 0.0 || r <= 0.0)
    throw std::invalid_argument("solve_u_subproblem: lambda and r must be positive");

  const ScalarField div_mu = div(mu);
  const ScalarField div_q = div(q);
  ScalarField rhs(f.width, f.height);
  for (std::size_t k = 0; k < f.size(); ++k)
    rhs.values[k] = lambda * f.values[k] - div_mu.values[k] - r * div_q.values[k];

  ScreenedPoissonOperator op{ScalarField(f.width, f.height, lambda), r, std::nullopt};
  const ScalarField x0 = warm ? *warm : ScalarField(f.width, f.height, 0.0);
  return cg_solve(op, rhs, x0, cfg).x;
}

std::pair<ScalarField, RunReport> tv_denoise(const ScalarField& f, double lambda, double r,
                                             double eps, int max_iters,
                                             const LinSolveConfig& lin_cfg,
                                             const ScalarField* clean) {
  if (lambda <= 0.0 || r <= 0.0)
    throw std::invalid_argument("tv_denoise: lambda and r must be positive");
  if (max_iters < 1) throw std::invalid_argument("tv_denoise: max_iters must be >= 1");

  TvDenoiseState st;
  st.u = ScalarField(f.width, f.height, 0.0);
  st.q = VectorField(f.width, f.height);
  st.mu = VectorField(f.width, f.height);

  RunReport report;
  const auto t0 = std::chrono::steady_clock::now();

  for (int k = 1; k <= max_iters; ++k) {
    const ScalarField u_prev = st.u;
    st.u = solve_u_subproblem(f, st.q, st.mu, lambda, r, lin_cfg, &st.u);

    const VectorField gu = grad(st.u);
    VectorField w(f.width, f.height);
    for (std::size_t idx = 0; idx < w.size(); ++idx) {
      w.v1[idx] = r * gu.v1[idx] - st.mu.v1[idx];
      w.v2[idx] = r * gu.v2[idx] - st.mu.v2[idx];
    }
    st.q = soft_threshold(w, r);
    // Lagrangian evaluated at (u^{k+1}, q^{k+1}; mu^k): the value the primal
    // sweep just minimized. The ascent step below raises it by r||q - grad u||^2.
    const double lagrangian = lagrangian_value(st.u, f, st.q, st.mu, lambda, r);
    for (std::size_t idx = 0; idx < st.mu.size(); ++idx) {
      st.mu.v1[idx] += r * (st.q.v1[idx] - gu.v1[idx]);
      st.mu.v2[idx] += r * (st.q.v2[idx] - gu.v2[idx]);
    }
    st.iteration = k;

    IterationRecord rec;
    rec.iter = k;
    rec.rel_phi = relative_change(st.u, u_prev);
    rec.energy = lagrangian;
    rec.res_q_phi = constraint_residual(st.q, gu);
    if (clean) rec.q_err = q_error(st.u, *clean);
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0).count();
    report.trace.push_back(rec);
    report.iterations = k;

    if (rec.rel_phi <= eps) {
      report.converged = true;
      break;
    }
  }

  report.total_wall_ms = report.trace.empty() ? 0.0 : report.trace.back().wall_ms;
  if (clean && !report.trace.empty()) report.final_q = report.trace.back().q_err;
  return {std::move(st.u), std::move(report)};
}

}  // namespace fringe
