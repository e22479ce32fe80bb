#include "fringe/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fringe {

namespace {

// Fused  c.*d - r div(w .* grad d) + shift*d  in one pass; bit-identical to
// composing the field-core stencils (same expressions in the same order).
void apply_kernel(const ScreenedPoissonOperator& op, const ScalarField& d, double shift,
                  ScalarField& out) {
  const int w = d.width, h = d.height;
  const double r = op.diffusion_weight;
  const double* dv = d.values.data();
  const double* cv = op.coeff.values.data();
  const double* wv = op.diffusivity ? op.diffusivity->values.data() : nullptr;
  double* ov = out.values.data();
  for (int j = 0; j < h; ++j) {
    const std::size_t row = static_cast<std::size_t>(j) * w;
    for (int i = 0; i < w; ++i) {
      const std::size_t idx = row + i;
      double dx = 0.0;
      if (i + 1 < w) dx += (wv ? wv[idx] : 1.0) * (dv[idx + 1] - dv[idx]);
      if (i > 0) dx -= (wv ? wv[idx - 1] : 1.0) * (dv[idx] - dv[idx - 1]);
      double dy = 0.0;
      if (j + 1 < h) dy += (wv ? wv[idx] : 1.0) * (dv[idx + w] - dv[idx]);
      if (j > 0) dy -= (wv ? wv[idx - w] : 1.0) * (dv[idx] - dv[idx - w]);
      ov[idx] = cv[idx] * dv[idx] - r * (dx + dy) + shift * dv[idx];
    }
  }
}

void check_op(const ScreenedPoissonOperator& op, const ScalarField& d) {
  if (!op.coeff.same_shape(d))
    throw std::invalid_argument("linsolve: operator/field dimension mismatch");
  if (op.diffusivity && !op.diffusivity->same_shape(d))
    throw std::invalid_argument("linsolve: diffusivity dimension mismatch");
  if (op.diffusion_weight <= 0.0)
    throw std::invalid_argument("linsolve: diffusion_weight must be positive");
}

}  // namespace

ScalarField apply(const ScreenedPoissonOperator& op, const ScalarField& d) {
  check_op(op, d);
  ScalarField out(d.width, d.height);
  apply_kernel(op, d, 0.0, out);
  return out;
}

CgResult cg_solve(const ScreenedPoissonOperator& op, const ScalarField& rhs,
                  const ScalarField& x0, const LinSolveConfig& cfg) {
  check_op(op, rhs);
  if (!rhs.same_shape(x0)) throw std::invalid_argument("cg_solve: rhs/x0 dimension mismatch");
  if (cfg.rel_residual_tol <= 0.0 || cfg.max_inner_iters < 1)
    throw std::invalid_argument("cg_solve: invalid config");

  CgResult res;
  const std::size_t n = rhs.size();

  double coeff_min = op.coeff.values[0], coeff_max = op.coeff.values[0];
  for (double c : op.coeff.values) {
    coeff_min = std::min(coeff_min, c);
    coeff_max = std::max(coeff_max, c);
  }
  if (coeff_min < 0.0) throw std::invalid_argument("cg_solve: coeff must be pointwise >= 0");

  const double shift = (coeff_max == 0.0) ? cfg.nullspace_shift : 0.0;

  // Uniform coefficient with uniform diffusion: constants are eigenvectors
  // (A 1 = c0 1), so split off the mean and run CG on the mean-free part.
  // The residual scale below is the mean-free rhs norm, which keeps solutions
  // equivariant under constant shifts of the rhs (the constant mode is exact).
  const bool deflate = shift == 0.0 && coeff_min == coeff_max && !op.diffusivity;
  double mean_shift = 0.0;

  ScalarField b = rhs;
  ScalarField x = x0;
  if (deflate) {
    double bsum = 0.0, xsum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      bsum += b.values[k];
      xsum += x.values[k];
    }
    const double bmean = bsum / static_cast<double>(n);
    const double xmean = xsum / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
      b.values[k] -= bmean;
      x.values[k] -= xmean;
    }
    mean_shift = bmean / coeff_min;  // coeff_min == c0 > 0 here
  }

  const double rhs_norm = l2_norm(b);
  if (!std::isfinite(rhs_norm))
    throw std::runtime_error("cg_solve: non-finite right-hand side");
  if (rhs_norm == 0.0) {
    // The mean-free system is A x' = 0 with unique solution 0.
    res.x = ScalarField(rhs.width, rhs.height, mean_shift);
    return res;
  }

  ScalarField r(rhs.width, rhs.height), Ap(rhs.width, rhs.height);
  apply_kernel(op, x, shift, r);
  for (std::size_t k = 0; k < n; ++k) r.values[k] = b.values[k] - r.values[k];

  double rho = dot(r, r);
  double rnorm = std::sqrt(rho);
  res.rel_residual = rnorm / rhs_norm;
  if (res.rel_residual <= cfg.rel_residual_tol) {
    if (deflate)
      for (std::size_t k = 0; k < n; ++k) x.values[k] += mean_shift;
    res.x = std::move(x);
    return res;
  }

  ScalarField p = r;
  for (int it = 1; it <= cfg.max_inner_iters; ++it) {
    apply_kernel(op, p, shift, Ap);
    const double pAp = dot(p, Ap);
    if (!(pAp > 0.0))
      throw std::runtime_error("cg_solve: operator not positive definite at iteration " +
                               std::to_string(it));
    const double alpha = rho / pAp;
    for (std::size_t k = 0; k < n; ++k) {
      x.values[k] += alpha * p.values[k];
      r.values[k] -= alpha * Ap.values[k];
    }
    const double rho_new = dot(r, r);
    rnorm = std::sqrt(rho_new);
    if (!std::isfinite(rnorm))
      throw std::runtime_error("cg_solve: non-finite residual at iteration " +
                               std::to_string(it));
    res.residual_history.push_back(rnorm);
    res.iterations = it;
    res.rel_residual = rnorm / rhs_norm;
    if (res.rel_residual <= cfg.rel_residual_tol) break;
    const double beta = rho_new / rho;
    rho = rho_new;
    for (std::size_t k = 0; k < n; ++k) p.values[k] = r.values[k] + beta * p.values[k];
  }
  res.converged = res.rel_residual <= cfg.rel_residual_tol;

  if (deflate)
    for (std::size_t k = 0; k < n; ++k) x.values[k] += mean_shift;
  res.x = std::move(x);
  return res;
}

}  // namespace fringe
