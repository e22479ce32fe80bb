#include <cmath>
#include <cstring>

#include <stdexcept>

#include <doctest.h>

#include "fringe/fp_solver.hpp"
#include "fringe/synth.hpp"
#include "oracles.hpp"

using namespace fringe;

namespace {

GroundTruth smoke_canonical() {
  SyntheticSpec spec;
  spec.width = 160;
  spec.height = 120;
  return synthesize(spec);
}

double tv_beta(const ScalarField& d, double beta) {
  const ScalarField m = magnitude_smoothed(grad(d), beta);
  double s = 0.0;
  for (double v : m.values) s += v;
  return s;
}

}  // namespace

TEST_CASE("pure-carrier pattern is fitted to within 5%") {
  const int w = 48, h = 36;
  ScalarField omega(w, h), a(w, h, 0.2), b(w, h, 1.0), zero(w, h, 0.0);
  for (int j = 0; j < h; ++j)
    for (int i = 0; i < w; ++i) omega.at(i, j) = 0.7 * i;
  const ScalarField g = eval_fringe(a, b, zero, omega);

  SolverConfig cfg;
  cfg.lambda = 100.0;
  cfg.max_outer_iters = 2000;
  auto [est, report] = fp_demodulate(g, omega, cfg);
  const ScalarField fit = eval_fringe(est.a, est.b, est.phi, omega);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    num += (fit.values[k] - g.values[k]) * (fit.values[k] - g.values[k]);
    den += g.values[k] * g.values[k];
  }
  CHECK(std::sqrt(num / den) <= 0.05);
}

TEST_CASE("smoke benchmark converges near the reference accuracy") {
  const GroundTruth gt = smoke_canonical();
  SolverConfig cfg;
  auto [est, report] = fp_demodulate(gt.g, gt.omega, cfg, &gt.phi);
  CHECK(report.converged);
  CHECK(report.final_q <= 0.05);
  CHECK(report.final_q >= 0.005);  // sanity: not an accidental exact match

  SUBCASE("Euler-Lagrange residuals settle with the stopping tolerance") {
    // Stop-distance dominates these residuals; the measured constant is
    // 15-45x eps across eps in [1e-7, 1e-5], bounded here at 50x.
    const auto rel = euler_lagrange_residuals(est, gt.g, gt.omega, cfg.lambda, cfg.beta);
    for (double r : rel) CHECK(r <= 50.0 * cfg.eps);
  }
  SUBCASE("final relative changes echo the stopping rule") {
    const IterationRecord& last = report.trace.back();
    CHECK(last.rel_phi <= cfg.eps);
    CHECK(last.rel_b <= cfg.eps);
    CHECK(last.rel_a <= cfg.eps);
  }
}

TEST_CASE("energy diagnostic is non-increasing over a 10-step window") {
  SyntheticSpec spec;
  spec.width = 80;
  spec.height = 60;
  const GroundTruth gt = synthesize(spec);
  SolverConfig cfg;

  FpState st = fp_init(gt.g, gt.omega);
  double prev = energy(st.estimate, gt.g, gt.omega, cfg.lambda, cfg.beta);
  for (int k = 0; k < 10; ++k) {
    st = fp_step(st, gt.g, gt.omega, cfg);
    const double cur = energy(st.estimate, gt.g, gt.omega, cfg.lambda, cfg.beta);
    CHECK(cur <= prev + 1e-8 * std::abs(prev));
    prev = cur;
  }
}

TEST_CASE("fp_step with zero modulation leaves the phase at zero") {
  SyntheticSpec spec;
  spec.width = 32;
  spec.height = 24;
  const GroundTruth gt = synthesize(spec);
  SolverConfig cfg;
  const FpState st = fp_init(gt.g, gt.omega);  // b = 0
  const FpState next = fp_step(st, gt.g, gt.omega, cfg);
  for (double v : next.estimate.phi.values) CHECK(v == 0.0);
  // b and a move off zero immediately
  CHECK(l2_norm(next.estimate.b) > 0.0);
  CHECK(l2_norm(next.estimate.a) > 0.0);
}

TEST_CASE("fp_step is deterministic") {
  SyntheticSpec spec;
  spec.width = 40;
  spec.height = 30;
  const GroundTruth gt = synthesize(spec);
  SolverConfig cfg;
  FpState st = fp_init(gt.g, gt.omega);
  st = fp_step(st, gt.g, gt.omega, cfg);
  const FpState a = fp_step(st, gt.g, gt.omega, cfg);
  const FpState b = fp_step(st, gt.g, gt.omega, cfg);
  CHECK(std::memcmp(a.estimate.phi.values.data(), b.estimate.phi.values.data(),
                    a.estimate.phi.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(a.estimate.a.values.data(), b.estimate.a.values.data(),
                    a.estimate.a.size() * sizeof(double)) == 0);
}

TEST_CASE("single-pixel image: phase pinned at zero, joint (a,b) update cycles") {
  // With one pixel the TV terms vanish and the printed cross-variable scheme
  // reduces to a pointwise alternation that double-counts the data term: a
  // and b overshoot jointly and oscillate with period 2 instead of damping.
  // The solver reports the non-convergence honestly.
  ScalarField g(1, 1, 0.8), omega(1, 1, 0.0);
  SolverConfig cfg;
  cfg.max_outer_iters = 60;
  auto [est, report] = fp_demodulate(g, omega, cfg);
  CHECK(est.phi.values[0] == 0.0);
  CHECK_FALSE(report.converged);

  FpState st = fp_init(g, omega);
  const FpState s1 = fp_step(st, g, omega, cfg);
  CHECK(s1.estimate.b.values[0] == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(s1.estimate.a.values[0] == doctest::Approx(0.8).epsilon(1e-9));
  const FpState s2 = fp_step(s1, g, omega, cfg);
  CHECK(std::abs(s2.estimate.a.values[0]) <= 1e-9);
  CHECK(std::abs(s2.estimate.b.values[0]) <= 1e-9);
}

TEST_CASE("energy: ground truth with constant a,b leaves only the phase TV term") {
  SyntheticSpec spec;
  spec.width = 48;
  spec.height = 36;
  spec.background_variation = 0.0;  // constant a*, b*
  spec.modulation_falloff = 0.0;
  const GroundTruth gt = synthesize(spec);
  const FringeEstimate truth{gt.phi, gt.b, gt.a};
  const double e = energy(truth, gt.g, gt.omega, 10.0, 0.0);
  CHECK(e == doctest::Approx(tv_beta(gt.phi, 0.0)).epsilon(1e-9));
}

TEST_CASE("energy of the zero estimate has a closed form") {
  SyntheticSpec spec;
  spec.width = 40;
  spec.height = 30;
  const GroundTruth gt = synthesize(spec);
  const double lambda = 10.0, beta = 1e-3;
  const FringeEstimate zero{ScalarField(40, 30, 0.0), ScalarField(40, 30, 0.0),
                            ScalarField(40, 30, 0.0)};
  double g2 = 0.0;
  for (double v : gt.g.values) g2 += v * v;
  const double expect = 0.5 * lambda * g2 + 3.0 * 40 * 30 * std::sqrt(beta);
  CHECK(energy(zero, gt.g, gt.omega, lambda, beta) ==
        doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("energy is non-negative") {
  const ScalarField g = oracles::random_field(16, 12, 61);
  const ScalarField omega = oracles::random_field(16, 12, 62, 0.0, 30.0);
  const FringeEstimate est{oracles::random_field(16, 12, 63),
                           oracles::random_field(16, 12, 64),
                           oracles::random_field(16, 12, 65)};
  CHECK(energy(est, g, omega, 10.0, 1e-3) >= 0.0);
}

TEST_CASE("analytic data-term gradients match central differences") {
  const int w = 32, h = 24;
  const double lambda = 10.0;
  const ScalarField g = oracles::random_field(w, h, 71);
  const ScalarField omega = oracles::random_field(w, h, 72, 0.0, 40.0);
  FringeEstimate est{oracles::random_field(w, h, 73, -1.5, 1.5),
                     oracles::random_field(w, h, 74, 0.3, 1.0),
                     oracles::random_field(w, h, 75, -0.3, 0.3)};

  const auto data_energy = [&](const FringeEstimate& e) {
    const ScalarField fit = eval_fringe(e.a, e.b, e.phi, omega);
    double s = 0.0;
    for (std::size_t k = 0; k < fit.size(); ++k)
      s += (fit.values[k] - g.values[k]) * (fit.values[k] - g.values[k]);
    return 0.5 * lambda * s;
  };

  std::mt19937_64 rng(76);
  const double step = 1e-5;
  for (int trial = 0; trial < 20; ++trial) {
    const int i = static_cast<int>(rng() % w), j = static_cast<int>(rng() % h);
    const double fit =
        est.a.at(i, j) + est.b.at(i, j) * std::cos(omega.at(i, j) + est.phi.at(i, j));
    const double resid = fit - g.at(i, j);
    const double psi = omega.at(i, j) + est.phi.at(i, j);
    const double grad_phi = lambda * resid * (-est.b.at(i, j) * std::sin(psi));
    const double grad_b = lambda * resid * std::cos(psi);
    const double grad_a = lambda * resid;

    auto central = [&](ScalarField FringeEstimate::*field) {
      FringeEstimate plus = est, minus = est;
      (plus.*field).at(i, j) += step;
      (minus.*field).at(i, j) -= step;
      return (data_energy(plus) - data_energy(minus)) / (2.0 * step);
    };
    CHECK(central(&FringeEstimate::phi) ==
          doctest::Approx(grad_phi).epsilon(1e-5).scale(1.0));
    CHECK(central(&FringeEstimate::b) == doctest::Approx(grad_b).epsilon(1e-5).scale(1.0));
    CHECK(central(&FringeEstimate::a) == doctest::Approx(grad_a).epsilon(1e-5).scale(1.0));
  }
}

TEST_CASE("the data fit is invariant to moving a constant between carrier and phase") {
  SyntheticSpec spec;
  spec.width = 40;
  spec.height = 30;
  const GroundTruth gt = synthesize(spec);
  SolverConfig cfg;
  auto [est, report] = fp_demodulate(gt.g, gt.omega, cfg);

  const double c = 0.3;
  ScalarField omega_shifted = gt.omega, phi_shifted = est.phi;
  for (double& v : omega_shifted.values) v += c;
  for (double& v : phi_shifted.values) v -= c;

  const ScalarField fit1 = eval_fringe(est.a, est.b, est.phi, gt.omega);
  const ScalarField fit2 = eval_fringe(est.a, est.b, phi_shifted, omega_shifted);
  double r1 = 0.0, r2 = 0.0, gn = 0.0;
  for (std::size_t k = 0; k < fit1.size(); ++k) {
    r1 += (fit1.values[k] - gt.g.values[k]) * (fit1.values[k] - gt.g.values[k]);
    r2 += (fit2.values[k] - gt.g.values[k]) * (fit2.values[k] - gt.g.values[k]);
    gn += gt.g.values[k] * gt.g.values[k];
  }
  CHECK(std::abs(std::sqrt(r1 / gn) - std::sqrt(r2 / gn)) <= 1e-6);
}

TEST_CASE("non-convergence at the cap is flagged") {
  const GroundTruth gt = smoke_canonical();
  SolverConfig cfg;
  cfg.max_outer_iters = 2;
  auto [est, report] = fp_demodulate(gt.g, gt.omega, cfg);
  CHECK_FALSE(report.converged);
  CHECK(report.iterations == 2);
  CHECK(report.trace.size() == 2);
}

TEST_CASE("input validation") {
  ScalarField g(8, 8, 0.1), omega(8, 9, 0.0);
  SolverConfig cfg;
  CHECK_THROWS_AS(fp_demodulate(g, omega, cfg), std::invalid_argument);
  cfg.beta = 0.0;
  CHECK_THROWS_AS(fp_demodulate(g, ScalarField(8, 8, 0.0), cfg), std::invalid_argument);
}
