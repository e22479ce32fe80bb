#pragma once

#include <cstdint>
#include <optional>

#include "fringe/field.hpp"

namespace fringe {

// Half-open pixel rectangle [x0, x1) x [y0, y1).
struct PixelRect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};

// Synthetic fringe pattern with a smooth two-Gaussian phase surface plus a
// rectangular phase step of known height, under a linear carrier. Background
// and modulation carry a gentle illumination dome, as real patterns do.
//
// Demodulation from the all-zero start recovers the phase only while
// cos(phi) keeps one sign: wherever |phi| exceeds pi/2 the iteration locks
// into the (b, phi) -> (-b, phi + pi) gauge, and any step height is aliased
// modulo 2 pi by the data term. The defaults keep |phi| < 1.5 rad for that
// reason; amplitudes beyond the band produce patchwork estimates.
struct SyntheticSpec {
  int width = 640;
  int height = 480;
  double carrier_fx = 0.7;       // radians per pixel along axis 1
  double phase_amplitude = 1.2;   // radians, scales the smooth surface
  double step_height = -1.45;    // radians, added inside step_region
  std::optional<PixelRect> step_region;  // default: [0.55,0.95) x [0.55,0.90) of the grid
  double background_a = 0.0;         // base background level
  double background_variation = 0.25;  // illumination dome height added to a
  double modulation_b = 1.0;         // peak modulation
  double modulation_falloff = 0.45;  // fractional b falloff away from center
  double noise_sigma = 0.0;
  std::uint64_t seed = 1;
};

struct GroundTruth {
  ScalarField phi;      // radians
  ScalarField a;
  ScalarField b;
  ScalarField omega;    // radians
  ScalarField g;        // clean pattern a + b cos(omega + phi)
  ScalarField g_noisy;  // g + Gaussian(0, sigma); equals g bitwise when sigma == 0
};

PixelRect default_step_region(int width, int height);

// Pointwise a + b cos(omega + phi).
ScalarField eval_fringe(const ScalarField& a, const ScalarField& b, const ScalarField& phi,
                        const ScalarField& omega);

GroundTruth synthesize(const SyntheticSpec& spec);

// Adds i.i.d. Gaussian noise, deterministic per seed. sigma == 0 returns the
// input unchanged.
ScalarField add_noise(const ScalarField& g, double sigma, std::uint64_t seed);

// Normalized error Q(mu, nu) = ||mu - nu|| / (||mu|| + ||nu||), in [0, 1].
double q_error(const ScalarField& mu, const ScalarField& nu);

}  // namespace fringe
