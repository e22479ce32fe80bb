#include <cmath>
#include <cstring>
#include <limits>

#include <stdexcept>

#include <doctest.h>

#include "fringe/field.hpp"
#include "oracles.hpp"

using namespace fringe;

TEST_CASE("grad of a constant field is zero") {
  ScalarField s(7, 5, 3.25);
  const VectorField g = grad(s);
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(g.v1[k] == 0.0);
    CHECK(g.v2[k] == 0.0);
  }
}

TEST_CASE("grad forward differences on a single row") {
  ScalarField s(3, 1);
  s.values = {0.0, 1.0, 3.0};
  const VectorField g = grad(s);
  CHECK(g.v1[0] == 1.0);
  CHECK(g.v1[1] == 2.0);
  CHECK(g.v1[2] == 0.0);  // replicated last column
  CHECK(g.v2[0] == 0.0);
  CHECK(g.v2[1] == 0.0);
  CHECK(g.v2[2] == 0.0);
}

TEST_CASE("div of zero vector field is zero") {
  const ScalarField d = div(VectorField(6, 4));
  for (double v : d.values) CHECK(v == 0.0);
}

TEST_CASE("div grad of the coordinate ramp: interior zero, boundary +-1") {
  ScalarField s(4, 4);
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) s.at(i, j) = i;
  const ScalarField d = div(grad(s));
  for (int j = 0; j < 4; ++j) {
    CHECK(d.at(0, j) == 1.0);
    CHECK(d.at(1, j) == 0.0);
    CHECK(d.at(2, j) == 0.0);
    CHECK(d.at(3, j) == -1.0);
  }
}

TEST_CASE("div of a constant vector field vanishes on interior pixels") {
  const ScalarField d = div(VectorField(6, 5, 0.7, -1.3));
  for (int j = 1; j < 4; ++j)
    for (int i = 1; i < 5; ++i) CHECK(d.at(i, j) == 0.0);
}

TEST_CASE("adjoint identity <grad s, v> + <s, div v> = 0") {
  const ScalarField s = oracles::random_field(16, 16, 11);
  const VectorField v = oracles::random_vector_field(16, 16, 12);
  const double lhs = dot(grad(s), v) + dot(s, div(v));
  CHECK(std::abs(lhs) <= 1e-12 * (l2_norm(s) * l2_norm(v) + 1.0));
}

TEST_CASE("adjointness holds across random shapes and sizes") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const int w = 1 + static_cast<int>(rng() % 24);
    const int h = 1 + static_cast<int>(rng() % 24);
    const ScalarField s = oracles::random_field(w, h, 1000 + trial);
    const VectorField v = oracles::random_vector_field(w, h, 2000 + trial);
    const double lhs = dot(grad(s), v) + dot(s, div(v));
    CHECK(std::abs(lhs) <= 1e-10 * (l2_norm(s) * l2_norm(v) + 1.0));
  }
}

TEST_CASE("soft_threshold zeroes sub-threshold vectors") {
  VectorField w(3, 1);
  w.v1 = {0.5, -0.7, 0.0};
  w.v2 = {0.5, 0.1, 0.0};
  const VectorField q = soft_threshold(w, 11.5);
  for (std::size_t k = 0; k < q.size(); ++k) {
    CHECK(q.v1[k] == 0.0);
    CHECK(q.v2[k] == 0.0);
  }
}

TEST_CASE("soft_threshold shrinks (2,0) at r=1 to (1,0)") {
  VectorField w(1, 1, 2.0, 0.0);
  const VectorField q = soft_threshold(w, 1.0);
  CHECK(q.v1[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(q.v2[0] == 0.0);

  // 1-D numeric cross-check: minimize |q| + (r/2)(q - 2)^2 over q.
  double best_q = 0.0, best = oracles::shrink_objective(0, 0, 0, 0, 2.0, 0.0, 1.0);
  for (int i = 0; i <= 400000; ++i) {
    const double qq = -1.0 + i * 1e-5;
    const double v = oracles::shrink_objective(qq, 0, 0, 0, 2.0, 0.0, 1.0);
    if (v < best) {
      best = v;
      best_q = qq;
    }
  }
  CHECK(best_q == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("soft_threshold output magnitude is (|w|-1)/r above threshold") {
  const VectorField w = oracles::random_vector_field(13, 9, 21, -3.0, 3.0);
  const double r = 11.5;
  const VectorField q = soft_threshold(w, r);
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double wm = std::hypot(w.v1[k], w.v2[k]);
    const double qm = std::hypot(q.v1[k], q.v2[k]);
    if (wm > 1.0)
      CHECK(qm == doctest::Approx((wm - 1.0) / r).epsilon(1e-12));
    else
      CHECK(qm == 0.0);
  }
}

TEST_CASE("soft_threshold minimizes the pointwise objective on a 21x21 grid of w") {
  for (double r : {1.0, 11.5}) {
    for (int i = 0; i < 21; ++i) {
      for (int j = 0; j < 21; ++j) {
        const double w1 = -2.5 + 0.25 * i;
        const double w2 = -2.5 + 0.25 * j;
        // mu = 0, grad u = w / r reproduces w = r grad u - mu.
        VectorField w(1, 1, w1, w2);
        const VectorField q = soft_threshold(w, r);
        const auto [n1, n2] = oracles::minimize_2d(
            [&](double q1, double q2) {
              return oracles::shrink_objective(q1, q2, 0.0, 0.0, w1 / r, w2 / r, r);
            },
            0.0, 0.0, 3.0);
        CHECK(std::abs(q.v1[0] - n1) <= 1e-6);
        CHECK(std::abs(q.v2[0] - n2) <= 1e-6);
      }
    }
  }
}

TEST_CASE("soft_threshold rejects non-positive r") {
  CHECK_THROWS_AS(soft_threshold(VectorField(2, 2), 0.0), std::invalid_argument);
}

TEST_CASE("relative_change basics") {
  ScalarField ones(5, 4, 1.0);
  CHECK(relative_change(ones, ones) == 0.0);

  ScalarField scaled(5, 4, 1.1);
  CHECK(relative_change(scaled, ones) == doctest::Approx(0.1).epsilon(1e-12));

  ScalarField zeros(5, 4, 0.0);
  CHECK(relative_change(ones, zeros) == std::numeric_limits<double>::infinity());
  CHECK(relative_change(zeros, zeros) == 0.0);

  CHECK_THROWS_AS(relative_change(ones, ScalarField(4, 5)), std::invalid_argument);
}

TEST_CASE("magnitude_smoothed") {
  const ScalarField m = magnitude_smoothed(VectorField(4, 3), 1e-3);
  for (double v : m.values) CHECK(v == doctest::Approx(std::sqrt(1e-3)).epsilon(1e-15));

  VectorField pyth(1, 1, 3.0, 4.0);
  CHECK(magnitude_smoothed(pyth, 0.0).values[0] == doctest::Approx(5.0).epsilon(1e-15));

  CHECK_THROWS_AS(magnitude_smoothed(pyth, -1.0), std::invalid_argument);
}

TEST_CASE("field operations are pure and bit-deterministic") {
  const ScalarField s = oracles::random_field(12, 10, 5);
  const VectorField g1 = grad(s), g2 = grad(s);
  CHECK(std::memcmp(g1.v1.data(), g2.v1.data(), g1.v1.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(g1.v2.data(), g2.v2.data(), g1.v2.size() * sizeof(double)) == 0);

  const VectorField w = oracles::random_vector_field(12, 10, 6, -2, 2);
  const VectorField q1 = soft_threshold(w, 11.5), q2 = soft_threshold(w, 11.5);
  CHECK(std::memcmp(q1.v1.data(), q2.v1.data(), q1.v1.size() * sizeof(double)) == 0);
}
