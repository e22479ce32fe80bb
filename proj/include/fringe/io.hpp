#pragma once

#include <string>

#include "fringe/field.hpp"
#include "fringe/report.hpp"

namespace fringe {

// Binary P5 PGM, maxval 255 or 65535; intensities map linearly to [0, 1].
ScalarField read_pgm(const std::string& path);

// 8-bit P5 PGM; values clamped to [0, 1] and quantized round-half-up.
void write_pgm(const ScalarField& f, const std::string& path);

// F64F container: ASCII header "F64F <width> <height>\n" followed by
// row-major little-endian IEEE-754 doubles. A VectorField is the same
// header with the v1 plane followed by the v2 plane.
ScalarField read_field(const std::string& path);
void write_field(const ScalarField& f, const std::string& path);
VectorField read_vector_field(const std::string& path);
void write_vector_field(const VectorField& v, const std::string& path);

// Convergence trace as CSV: header
//   iter,rel_phi,rel_b,rel_a,energy,res_q_phi,res_q_b,res_q_a,q_err,wall_ms
// one row per outer iteration (9 significant digits, NaN cells empty), and a
// closing summary row prefixed "#final".
void write_report(const RunReport& report, const std::string& path);

}  // namespace fringe
