#include "fringe/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fringe {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

// Next whitespace-delimited token, skipping '#' comments per the netpbm spec.
std::string next_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {}
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

int parse_dim(const std::string& tok, const std::string& path) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(tok, &pos);
  } catch (...) {
    fail(path, "malformed header");
  }
  if (pos != tok.size() || v < 1) fail(path, "malformed header");
  return v;
}

void put_le_double(std::ofstream& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  out.write(buf, 8);
}

double get_le_double(const char* buf) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i)
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
  return std::bit_cast<double>(bits);
}

void write_f64f_header(std::ofstream& out, int width, int height) {
  out << "F64F " << width << " " << height << "\n";
}

std::pair<int, int> read_f64f_header(std::ifstream& in, const std::string& path) {
  std::string magic = next_token(in);
  if (magic != "F64F") fail(path, "magic mismatch (expected F64F)");
  const int w = parse_dim(next_token(in), path);
  const int h = parse_dim(next_token(in), path);
  return {w, h};
}

std::vector<double> read_doubles(std::ifstream& in, std::size_t count, const std::string& path) {
  std::vector<double> vals(count);
  std::vector<char> buf(count * 8);
  in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (static_cast<std::size_t>(in.gcount()) != buf.size()) fail(path, "truncated payload");
  if (in.get() != EOF) fail(path, "payload size mismatch");
  for (std::size_t k = 0; k < count; ++k) vals[k] = get_le_double(buf.data() + 8 * k);
  return vals;
}

std::string format_cell(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

ScalarField read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open");
  if (next_token(in) != "P5") fail(path, "not a binary P5 PGM");
  const int w = parse_dim(next_token(in), path);
  const int h = parse_dim(next_token(in), path);
  const int maxval = parse_dim(next_token(in), path);
  if (maxval != 255 && maxval != 65535) fail(path, "unsupported maxval");
  // The single whitespace byte after maxval was consumed by next_token.

  const std::size_t n = static_cast<std::size_t>(w) * h;
  const std::size_t bytes = n * (maxval == 255 ? 1 : 2);
  std::vector<char> buf(bytes);
  in.read(buf.data(), static_cast<std::streamsize>(bytes));
  if (static_cast<std::size_t>(in.gcount()) != bytes) fail(path, "truncated payload");

  ScalarField f(w, h);
  if (maxval == 255) {
    for (std::size_t k = 0; k < n; ++k)
      f.values[k] = static_cast<unsigned char>(buf[k]) / 255.0;
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      const unsigned hi = static_cast<unsigned char>(buf[2 * k]);      // big-endian
      const unsigned lo = static_cast<unsigned char>(buf[2 * k + 1]);
      f.values[k] = ((hi << 8) | lo) / 65535.0;
    }
  }
  return f;
}

void write_pgm(const ScalarField& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  out << "P5\n" << f.width << " " << f.height << "\n255\n";
  std::vector<char> buf(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    const long px = static_cast<long>(std::floor(f.values[k] * 255.0 + 0.5));
    buf[k] = static_cast<char>(px < 0 ? 0 : (px > 255 ? 255 : px));
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) fail(path, "write failed");
}

ScalarField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open");
  const auto [w, h] = read_f64f_header(in, path);
  ScalarField f(w, h);
  f.values = read_doubles(in, static_cast<std::size_t>(w) * h, path);
  return f;
}

void write_field(const ScalarField& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  write_f64f_header(out, f.width, f.height);
  for (double v : f.values) put_le_double(out, v);
  if (!out) fail(path, "write failed");
}

VectorField read_vector_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open");
  const auto [w, h] = read_f64f_header(in, path);
  const std::size_t n = static_cast<std::size_t>(w) * h;
  const std::vector<double> vals = read_doubles(in, 2 * n, path);
  VectorField v(w, h);
  for (std::size_t k = 0; k < n; ++k) {
    v.v1[k] = vals[k];
    v.v2[k] = vals[n + k];
  }
  return v;
}

void write_vector_field(const VectorField& v, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  write_f64f_header(out, v.width, v.height);
  for (double x : v.v1) put_le_double(out, x);
  for (double x : v.v2) put_le_double(out, x);
  if (!out) fail(path, "write failed");
}

void write_report(const RunReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  out << "iter,rel_phi,rel_b,rel_a,energy,res_q_phi,res_q_b,res_q_a,q_err,wall_ms\n";
  auto put_row = [&](const IterationRecord& rec) {
    out << rec.iter << ',' << format_cell(rec.rel_phi) << ',' << format_cell(rec.rel_b) << ','
        << format_cell(rec.rel_a) << ',' << format_cell(rec.energy) << ','
        << format_cell(rec.res_q_phi) << ',' << format_cell(rec.res_q_b) << ','
        << format_cell(rec.res_q_a) << ',' << format_cell(rec.q_err) << ','
        << format_cell(rec.wall_ms) << '\n';
  };
  for (const IterationRecord& rec : report.trace) put_row(rec);
  if (!report.trace.empty()) {
    out << "#final,";
    put_row(report.trace.back());
  }
  if (!out) fail(path, "write failed");
}

}  // namespace fringe
