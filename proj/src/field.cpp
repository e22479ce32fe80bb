#include "fringe/field.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fringe {

ScalarField::ScalarField(int w, int h, double fill)
    : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {
  if (w < 1 || h < 1) throw std::invalid_argument("ScalarField: dimensions must be >= 1");
}

VectorField::VectorField(int w, int h, double fill1, double fill2)
    : width(w),
      height(h),
      v1(static_cast<std::size_t>(w) * h, fill1),
      v2(static_cast<std::size_t>(w) * h, fill2) {
  if (w < 1 || h < 1) throw std::invalid_argument("VectorField: dimensions must be >= 1");
}

VectorField grad(const ScalarField& s) {
  const int w = s.width, h = s.height;
  VectorField g(w, h);
  for (int j = 0; j < h; ++j) {
    const std::size_t row = static_cast<std::size_t>(j) * w;
    for (int i = 0; i < w; ++i) {
      const std::size_t idx = row + i;
      g.v1[idx] = (i + 1 < w) ? s.values[idx + 1] - s.values[idx] : 0.0;
      g.v2[idx] = (j + 1 < h) ? s.values[idx + w] - s.values[idx] : 0.0;
    }
  }
  return g;
}

ScalarField div(const VectorField& v) {
  const int w = v.width, h = v.height;
  ScalarField d(w, h);
  for (int j = 0; j < h; ++j) {
    const std::size_t row = static_cast<std::size_t>(j) * w;
    for (int i = 0; i < w; ++i) {
      const std::size_t idx = row + i;
      double dx = 0.0;
      if (i + 1 < w) dx += v.v1[idx];      // flux written by grad at this pixel
      if (i > 0) dx -= v.v1[idx - 1];
      double dy = 0.0;
      if (j + 1 < h) dy += v.v2[idx];
      if (j > 0) dy -= v.v2[idx - w];
      d.values[idx] = dx + dy;
    }
  }
  return d;
}

VectorField soft_threshold(const VectorField& w, double r) {
  if (r <= 0.0) throw std::invalid_argument("soft_threshold: r must be positive");
  VectorField q(w.width, w.height);
  for (std::size_t idx = 0; idx < w.size(); ++idx) {
    const double m = std::sqrt(w.v1[idx] * w.v1[idx] + w.v2[idx] * w.v2[idx]);
    if (m > 1.0) {
      const double f = (1.0 - 1.0 / m) / r;
      q.v1[idx] = f * w.v1[idx];
      q.v2[idx] = f * w.v2[idx];
    }
  }
  return q;
}

double relative_change(const ScalarField& curr, const ScalarField& prev) {
  if (!curr.same_shape(prev))
    throw std::invalid_argument("relative_change: dimension mismatch");
  double diff2 = 0.0, prev2 = 0.0;
  for (std::size_t idx = 0; idx < curr.size(); ++idx) {
    const double d = curr.values[idx] - prev.values[idx];
    diff2 += d * d;
    prev2 += prev.values[idx] * prev.values[idx];
  }
  const double diff = std::sqrt(diff2);
  const double denom = std::sqrt(prev2);
  if (denom < 1e-12)
    return diff < 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / denom;
}

ScalarField magnitude_smoothed(const VectorField& v, double beta) {
  if (beta < 0.0) throw std::invalid_argument("magnitude_smoothed: beta must be >= 0");
  ScalarField m(v.width, v.height);
  for (std::size_t idx = 0; idx < v.size(); ++idx)
    m.values[idx] = std::sqrt(v.v1[idx] * v.v1[idx] + v.v2[idx] * v.v2[idx] + beta);
  return m;
}

double dot(const ScalarField& a, const ScalarField& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t idx = 0; idx < a.size(); ++idx) s += a.values[idx] * b.values[idx];
  return s;
}

double dot(const VectorField& a, const VectorField& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t idx = 0; idx < a.size(); ++idx)
    s += a.v1[idx] * b.v1[idx] + a.v2[idx] * b.v2[idx];
  return s;
}

double l2_norm(const ScalarField& a) { return std::sqrt(dot(a, a)); }

double l2_norm(const VectorField& a) { return std::sqrt(dot(a, a)); }

}  // namespace fringe
