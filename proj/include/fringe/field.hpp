#pragma once

#include <cstddef>
#include <vector>

namespace fringe {

// Regular pixel grid, unit spacing.
struct GridGeometry {
  int width = 0;
  int height = 0;
  double spacing = 1.0;
};

// Scalar-valued field (image, phase map, modulation map) on a W x H grid.
// Values are row-major: index (i, j) -> j*width + i, with i the column
// (axis 1) and j the row (axis 2).
struct ScalarField {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  ScalarField() = default;
  ScalarField(int w, int h, double fill = 0.0);

  double& at(int i, int j) { return values[static_cast<std::size_t>(j) * width + i]; }
  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * width + i]; }

  std::size_t size() const { return values.size(); }
  GridGeometry geometry() const { return {width, height, 1.0}; }
  bool same_shape(const ScalarField& other) const {
    return width == other.width && height == other.height;
  }
};

// Field of 2-vectors on the same grid, stored as two scalar planes.
struct VectorField {
  int width = 0;
  int height = 0;
  std::vector<double> v1;  // axis-1 (column) component
  std::vector<double> v2;  // axis-2 (row) component

  VectorField() = default;
  VectorField(int w, int h, double fill1 = 0.0, double fill2 = 0.0);

  std::size_t size() const { return v1.size(); }
  bool same_shape(const VectorField& other) const {
    return width == other.width && height == other.height;
  }
  bool same_shape(const ScalarField& other) const {
    return width == other.width && height == other.height;
  }
};

// Forward differences with replicated-edge (Neumann) boundary:
//   v1(i,j) = s(i+1,j) - s(i,j), zero on the last column,
//   v2(i,j) = s(i,j+1) - s(i,j), zero on the last row.
VectorField grad(const ScalarField& s);

// Negative adjoint of grad (backward differences), so that
// <grad s, v> + <s, div v> = 0 exactly in exact arithmetic.
ScalarField div(const VectorField& v);

// Pointwise shrinkage: q = (1/r)(1 - 1/|w|) w if |w| > 1, else 0.
VectorField soft_threshold(const VectorField& w, double r);

// ||curr - prev|| / ||prev||. When ||prev|| < 1e-12 the ratio is undefined;
// returns 0 if curr barely moved, +inf otherwise so the caller keeps iterating.
double relative_change(const ScalarField& curr, const ScalarField& prev);

// Pointwise sqrt(v1^2 + v2^2 + beta).
ScalarField magnitude_smoothed(const VectorField& v, double beta);

double dot(const ScalarField& a, const ScalarField& b);
double dot(const VectorField& a, const VectorField& b);
double l2_norm(const ScalarField& a);
double l2_norm(const VectorField& a);

}  // namespace fringe
