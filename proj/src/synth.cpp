#include "fringe/synth.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace fringe {

namespace {

// Two-Gaussian "peaks" surface over unit-normalized coordinates.
double smooth_bump(double x, double y) {
  const double g1 = std::exp(-((x - 0.4) * (x - 0.4) + (y - 0.5) * (y - 0.5)) / 0.08);
  const double g2 = std::exp(-((x - 0.7) * (x - 0.7) + (y - 0.3) * (y - 0.3)) / 0.05);
  return g1 - 0.7 * g2;
}

// Illumination dome, 1 at the center decaying toward the corners.
double illumination(double x, double y) {
  return std::exp(-((x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5)) / 0.5);
}

}  // namespace

PixelRect default_step_region(int width, int height) {
  return {static_cast<int>(0.55 * width), static_cast<int>(0.55 * height),
          static_cast<int>(0.95 * width), static_cast<int>(0.90 * height)};
}

ScalarField eval_fringe(const ScalarField& a, const ScalarField& b, const ScalarField& phi,
                        const ScalarField& omega) {
  if (!a.same_shape(b) || !a.same_shape(phi) || !a.same_shape(omega))
    throw std::invalid_argument("eval_fringe: dimension mismatch");
  ScalarField g(a.width, a.height);
  for (std::size_t idx = 0; idx < g.size(); ++idx)
    g.values[idx] = a.values[idx] + b.values[idx] * std::cos(omega.values[idx] + phi.values[idx]);
  return g;
}

GroundTruth synthesize(const SyntheticSpec& spec) {
  if (spec.width < 8 || spec.height < 8)
    throw std::invalid_argument("synthesize: width and height must be >= 8");
  if (spec.modulation_b <= 0.0)
    throw std::invalid_argument("synthesize: modulation_b must be positive");
  if (spec.modulation_falloff < 0.0 || spec.modulation_falloff >= 1.0)
    throw std::invalid_argument("synthesize: modulation_falloff must be in [0, 1)");
  if (spec.background_variation < 0.0)
    throw std::invalid_argument("synthesize: background_variation must be >= 0");
  if (spec.noise_sigma < 0.0)
    throw std::invalid_argument("synthesize: noise_sigma must be >= 0");

  const int w = spec.width, h = spec.height;
  const PixelRect rect = spec.step_region ? *spec.step_region : default_step_region(w, h);
  if (rect.x0 < 0 || rect.y0 < 0 || rect.x1 > w || rect.y1 > h || rect.x0 > rect.x1 ||
      rect.y0 > rect.y1)
    throw std::invalid_argument("synthesize: step_region out of bounds");

  GroundTruth gt;
  gt.phi = ScalarField(w, h);
  gt.a = ScalarField(w, h);
  gt.b = ScalarField(w, h);
  gt.omega = ScalarField(w, h);

  for (int j = 0; j < h; ++j) {
    const double y = static_cast<double>(j) / (h - 1);
    for (int i = 0; i < w; ++i) {
      const double x = static_cast<double>(i) / (w - 1);
      double phi = spec.phase_amplitude * smooth_bump(x, y);
      if (i >= rect.x0 && i < rect.x1 && j >= rect.y0 && j < rect.y1)
        phi += spec.step_height;
      gt.phi.at(i, j) = phi;
      gt.omega.at(i, j) = spec.carrier_fx * i;
      const double il = illumination(x, y);
      gt.a.at(i, j) = spec.background_a + spec.background_variation * il;
      gt.b.at(i, j) = spec.modulation_b * (1.0 - spec.modulation_falloff * (1.0 - il));
    }
  }

  gt.g = eval_fringe(gt.a, gt.b, gt.phi, gt.omega);
  gt.g_noisy = add_noise(gt.g, spec.noise_sigma, spec.seed);
  return gt;
}

ScalarField add_noise(const ScalarField& g, double sigma, std::uint64_t seed) {
  if (sigma < 0.0) throw std::invalid_argument("add_noise: sigma must be >= 0");
  if (sigma == 0.0) return g;
  ScalarField out = g;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  for (std::size_t idx = 0; idx < out.size(); ++idx) out.values[idx] += sigma * unit(rng);
  return out;
}

double q_error(const ScalarField& mu, const ScalarField& nu) {
  if (!mu.same_shape(nu)) throw std::invalid_argument("q_error: dimension mismatch");
  double d2 = 0.0, m2 = 0.0, n2 = 0.0;
  for (std::size_t idx = 0; idx < mu.size(); ++idx) {
    const double d = mu.values[idx] - nu.values[idx];
    d2 += d * d;
    m2 += mu.values[idx] * mu.values[idx];
    n2 += nu.values[idx] * nu.values[idx];
  }
  const double denom = std::sqrt(m2) + std::sqrt(n2);
  if (denom == 0.0) throw std::invalid_argument("q_error: both inputs identically zero");
  return std::sqrt(d2) / denom;
}

}  // namespace fringe
