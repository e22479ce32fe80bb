#pragma once

#include <cmath>
#include <vector>

namespace fringe {

// One outer iteration of a solver trace. NaN marks a value the producing
// solver does not define (e.g. res_q_* for the fixed-point method); the CSV
// writer emits those as empty cells.
struct IterationRecord {
  int iter = 0;
  double rel_phi = NAN;
  double rel_b = NAN;
  double rel_a = NAN;
  double energy = NAN;
  double res_q_phi = NAN;
  double res_q_b = NAN;
  double res_q_a = NAN;
  double q_err = NAN;
  double wall_ms = NAN;  // cumulative

  // in-memory diagnostics, not serialized
  double data_fit = NAN;  // ||I - g|| / ||g||
  double mu_norm_phi = NAN;
  double mu_norm_b = NAN;
  double mu_norm_a = NAN;
};

struct RunReport {
  std::vector<IterationRecord> trace;
  bool converged = false;
  int iterations = 0;
  double total_wall_ms = 0.0;
  double final_q = NAN;  // NaN when no ground truth was supplied
};

}  // namespace fringe
