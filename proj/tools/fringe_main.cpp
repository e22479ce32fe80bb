#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "fringe/alm_solver.hpp"
#include "fringe/fp_solver.hpp"
#include "fringe/io.hpp"
#include "fringe/synth.hpp"
#include "fringe/tv_denoise.hpp"

namespace fs = std::filesystem;
using namespace fringe;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitNotConverged = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Ordered parameter echo; every artifact-producing run leaves one behind so
// it can be reproduced from the directory alone.
void write_config(const fs::path& dir, const std::string& command,
                  const std::vector<std::pair<std::string, std::string>>& params) {
  std::ofstream out(dir / "config.txt", std::ios::binary);
  if (!out) throw std::runtime_error((dir / "config.txt").string() + ": cannot open");
  out << "command = " << command << "\n";
  for (const auto& [k, v] : params) out << k << " = " << v << "\n";
}

// Min-max normalized 8-bit preview plus a sidecar recording the range used.
void write_preview(const ScalarField& f, const fs::path& dir, const std::string& stem) {
  double lo = f.values[0], hi = f.values[0];
  for (double v : f.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  ScalarField norm(f.width, f.height);
  const double span = hi - lo;
  if (span > 0.0)
    for (std::size_t k = 0; k < f.size(); ++k) norm.values[k] = (f.values[k] - lo) / span;
  write_pgm(norm, (dir / (stem + ".pgm")).string());
  std::ofstream range(dir / (stem + ".range.txt"), std::ios::binary);
  range << "min = " << fmt(lo) << "\nmax = " << fmt(hi) << "\n";
}

struct SynthArgs {
  std::string out;
  SyntheticSpec spec;
};

struct DemodArgs {
  std::string method;
  std::string pattern, carrier, truth, out;
  SolverConfig cfg;
};

struct DenoiseArgs {
  std::string image, truth, out;
  double lambda = 10.0, r = 11.5, tol = 1e-5;
  int max_iters = 20000;
};

struct SweepArgs {
  std::string out;
  std::vector<double> sigmas{0.0, 0.05, 0.1, 0.15, 0.2};
  std::vector<std::string> methods{"alm", "fp"};
  SyntheticSpec spec;
  SolverConfig cfg;
};

std::vector<std::pair<std::string, std::string>> spec_params(const SyntheticSpec& s) {
  return {{"width", std::to_string(s.width)},
          {"height", std::to_string(s.height)},
          {"carrier", fmt(s.carrier_fx)},
          {"amplitude", fmt(s.phase_amplitude)},
          {"step", fmt(s.step_height)},
          {"a0", fmt(s.background_a)},
          {"bg-variation", fmt(s.background_variation)},
          {"b0", fmt(s.modulation_b)},
          {"mod-falloff", fmt(s.modulation_falloff)},
          {"sigma", fmt(s.noise_sigma)},
          {"seed", std::to_string(s.seed)}};
}

std::vector<std::pair<std::string, std::string>> solver_params(const SolverConfig& c) {
  return {{"lambda", fmt(c.lambda)},
          {"r", fmt(c.r)},
          {"beta", fmt(c.beta)},
          {"tol", fmt(c.eps)},
          {"max-iter", std::to_string(c.max_outer_iters)},
          {"cg-tol", fmt(c.linsolve.rel_residual_tol)},
          {"cg-max-iter", std::to_string(c.linsolve.max_inner_iters)}};
}

void write_synth_files(const GroundTruth& gt, const fs::path& dir) {
  write_field(gt.g_noisy, (dir / "g.f64f").string());
  write_preview(gt.g_noisy, dir, "g");
  write_field(gt.phi, (dir / "phi_true.f64f").string());
  write_field(gt.omega, (dir / "omega.f64f").string());
  write_field(gt.a, (dir / "a_true.f64f").string());
  write_field(gt.b, (dir / "b_true.f64f").string());
}

int run_synth(const SynthArgs& args) {
  fs::create_directories(args.out);
  const GroundTruth gt = synthesize(args.spec);
  write_synth_files(gt, args.out);
  write_config(args.out, "synth", spec_params(args.spec));
  return 0;
}

// Core of both demod and the per-cell sweep runs.
int run_demod_on(const std::string& method, const ScalarField& g, const ScalarField& omega,
                 const ScalarField* truth, const SolverConfig& cfg, const fs::path& dir,
                 RunReport* report_out = nullptr) {
  std::pair<FringeEstimate, RunReport> result =
      method == "alm" ? alm_demodulate(g, omega, cfg, truth)
                      : fp_demodulate(g, omega, cfg, truth);
  const FringeEstimate& est = result.first;
  const RunReport& report = result.second;

  write_field(est.phi, (dir / "phi.f64f").string());
  write_field(est.a, (dir / "a.f64f").string());
  write_field(est.b, (dir / "b.f64f").string());
  write_preview(est.phi, dir, "phi");
  write_report(report, (dir / "report.csv").string());
  if (report_out) *report_out = report;
  if (!report.converged)
    std::cerr << "warning: " << method << " did not converge within "
              << cfg.max_outer_iters << " iterations\n";
  return report.converged ? 0 : kExitNotConverged;
}

int run_demod(const DemodArgs& args) {
  fs::create_directories(args.out);
  const ScalarField g = read_field(args.pattern);
  const ScalarField omega = read_field(args.carrier);
  ScalarField truth;
  if (!args.truth.empty()) truth = read_field(args.truth);

  auto params = solver_params(args.cfg);
  params.emplace_back("method", args.method);
  params.emplace_back("pattern", args.pattern);
  params.emplace_back("carrier", args.carrier);
  if (!args.truth.empty()) params.emplace_back("truth", args.truth);
  write_config(args.out, "demod", params);

  return run_demod_on(args.method, g, omega, args.truth.empty() ? nullptr : &truth,
                      args.cfg, args.out);
}

int run_denoise(const DenoiseArgs& args) {
  fs::create_directories(args.out);
  const ScalarField f = read_pgm(args.image);
  ScalarField truth;
  if (!args.truth.empty()) truth = read_pgm(args.truth);

  std::vector<std::pair<std::string, std::string>> params = {
      {"image", args.image},
      {"lambda", fmt(args.lambda)},
      {"r", fmt(args.r)},
      {"tol", fmt(args.tol)},
      {"max-iter", std::to_string(args.max_iters)}};
  if (!args.truth.empty()) params.emplace_back("truth", args.truth);
  write_config(args.out, "denoise", params);

  auto [u, report] = tv_denoise(f, args.lambda, args.r, args.tol, args.max_iters, {},
                                args.truth.empty() ? nullptr : &truth);
  write_field(u, (fs::path(args.out) / "u.f64f").string());
  write_preview(u, args.out, "u");
  write_report(report, (fs::path(args.out) / "report.csv").string());
  if (!report.converged)
    std::cerr << "warning: denoise did not converge within " << args.max_iters
              << " iterations\n";
  return report.converged ? 0 : kExitNotConverged;
}

int run_sweep(const SweepArgs& args) {
  fs::create_directories(args.out);
  auto params = spec_params(args.spec);
  auto solver = solver_params(args.cfg);
  params.insert(params.end(), solver.begin(), solver.end());
  std::string methods_str, sigmas_str;
  for (const auto& m : args.methods) methods_str += (methods_str.empty() ? "" : ",") + m;
  for (double s : args.sigmas) sigmas_str += (sigmas_str.empty() ? std::string() : ",") + fmt(s);
  params.emplace_back("methods", methods_str);
  params.emplace_back("sigmas", sigmas_str);
  write_config(args.out, "sweep", params);

  std::ofstream csv(fs::path(args.out) / "sweep.csv", std::ios::binary);
  csv << "method,sigma,iters,q_err,wall_ms\n";

  int exit_code = 0;
  for (double sigma : args.sigmas) {
    SyntheticSpec spec = args.spec;
    spec.noise_sigma = sigma;
    const GroundTruth gt = synthesize(spec);
    const fs::path inputs = fs::path(args.out) / ("inputs_sigma" + fmt(sigma));
    fs::create_directories(inputs);
    write_synth_files(gt, inputs);

    for (const std::string& method : args.methods) {
      const fs::path cell = fs::path(args.out) / (method + "_sigma" + fmt(sigma));
      fs::create_directories(cell);
      auto cell_params = solver_params(args.cfg);
      cell_params.emplace_back("method", method);
      cell_params.emplace_back("pattern", (inputs / "g.f64f").string());
      cell_params.emplace_back("carrier", (inputs / "omega.f64f").string());
      cell_params.emplace_back("truth", (inputs / "phi_true.f64f").string());
      write_config(cell, "demod", cell_params);

      RunReport report;
      const int code =
          run_demod_on(method, gt.g_noisy, gt.omega, &gt.phi, args.cfg, cell, &report);
      if (code != 0) exit_code = code;

      char qbuf[40], wbuf[40];
      std::snprintf(qbuf, sizeof(qbuf), "%.9g", report.final_q);
      std::snprintf(wbuf, sizeof(wbuf), "%.9g", report.total_wall_ms);
      csv << method << ',' << fmt(sigma) << ',' << report.iterations << ',' << qbuf << ','
          << wbuf << '\n';
    }
  }
  return exit_code;
}

int run_compare(const std::string& a_path, const std::string& b_path) {
  const ScalarField a = read_field(a_path);
  const ScalarField b = read_field(b_path);
  std::printf("%.6f\n", q_error(a, b));
  return 0;
}

void add_solver_options(CLI::App* cmd, SolverConfig& cfg) {
  cmd->add_option("--lambda", cfg.lambda, "data-term weight");
  cmd->add_option("--r", cfg.r, "penalty constant");
  cmd->add_option("--beta", cfg.beta, "TV smoothing constant (fp only)");
  cmd->add_option("--tol", cfg.eps, "outer stopping tolerance");
  cmd->add_option("--max-iter", cfg.max_outer_iters, "outer iteration cap");
  cmd->add_option("--cg-tol", cfg.linsolve.rel_residual_tol, "inner CG tolerance");
  cmd->add_option("--cg-max-iter", cfg.linsolve.max_inner_iters, "inner CG cap");
}

void add_spec_options(CLI::App* cmd, SyntheticSpec& spec) {
  cmd->add_option("--width", spec.width, "pattern width in pixels");
  cmd->add_option("--height", spec.height, "pattern height in pixels");
  cmd->add_option("--carrier", spec.carrier_fx, "carrier frequency, rad/pixel");
  cmd->add_option("--amplitude", spec.phase_amplitude, "smooth phase amplitude, rad");
  cmd->add_option("--step", spec.step_height, "phase step height, rad");
  cmd->add_option("--a0", spec.background_a, "base background level");
  cmd->add_option("--bg-variation", spec.background_variation, "background dome height");
  cmd->add_option("--b0", spec.modulation_b, "peak modulation");
  cmd->add_option("--mod-falloff", spec.modulation_falloff, "modulation falloff fraction");
  cmd->add_option("--sigma", spec.noise_sigma, "noise standard deviation");
  cmd->add_option("--seed", spec.seed, "noise seed");
}

void validate_solver(const SolverConfig& cfg) {
  if (cfg.lambda <= 0 || cfg.r <= 0 || cfg.beta <= 0 || cfg.eps <= 0)
    throw UsageError("lambda, r, beta and tol must be positive");
  if (cfg.max_outer_iters < 1) throw UsageError("max-iter must be >= 1");
}

void validate_spec(const SyntheticSpec& spec) {
  if (spec.width < 8 || spec.height < 8) throw UsageError("width and height must be >= 8");
  if (spec.modulation_b <= 0) throw UsageError("b0 must be positive");
  if (spec.modulation_falloff < 0 || spec.modulation_falloff >= 1)
    throw UsageError("mod-falloff must be in [0, 1)");
  if (spec.background_variation < 0) throw UsageError("bg-variation must be >= 0");
  if (spec.noise_sigma < 0) throw UsageError("sigma must be >= 0");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"single-pattern fringe demodulation benchmark"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic fringe pattern");
  synth_cmd->add_option("--out", synth_args.out, "output directory")->required();
  add_spec_options(synth_cmd, synth_args.spec);

  DemodArgs demod_args;
  CLI::App* demod_cmd = app.add_subcommand("demod", "demodulate a fringe pattern");
  demod_cmd->add_option("--method", demod_args.method, "alm or fp")->required();
  demod_cmd->add_option("--pattern", demod_args.pattern, "input pattern (.f64f)")->required();
  demod_cmd->add_option("--carrier", demod_args.carrier, "carrier field (.f64f)")->required();
  demod_cmd->add_option("--truth", demod_args.truth, "ground-truth phase (.f64f)");
  demod_cmd->add_option("--out", demod_args.out, "output directory")->required();
  add_solver_options(demod_cmd, demod_args.cfg);

  DenoiseArgs denoise_args;
  CLI::App* denoise_cmd = app.add_subcommand("denoise", "TV-denoise a grayscale image");
  denoise_cmd->add_option("--image", denoise_args.image, "input image (.pgm)")->required();
  denoise_cmd->add_option("--truth", denoise_args.truth, "clean reference (.pgm)");
  denoise_cmd->add_option("--out", denoise_args.out, "output directory")->required();
  denoise_cmd->add_option("--lambda", denoise_args.lambda, "data-term weight");
  denoise_cmd->add_option("--r", denoise_args.r, "penalty constant");
  denoise_cmd->add_option("--tol", denoise_args.tol, "stopping tolerance");
  denoise_cmd->add_option("--max-iter", denoise_args.max_iters, "iteration cap");

  SweepArgs sweep_args;
  sweep_args.cfg.lambda = 6.0;  // noise-sweep default
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "noise sweep over both methods");
  sweep_cmd->add_option("--out", sweep_args.out, "output directory")->required();
  sweep_cmd->add_option("--sigmas", sweep_args.sigmas, "noise levels")->delimiter(',');
  sweep_cmd->add_option("--methods", sweep_args.methods, "methods to run")->delimiter(',');
  add_spec_options(sweep_cmd, sweep_args.spec);
  add_solver_options(sweep_cmd, sweep_args.cfg);

  std::string compare_a, compare_b;
  CLI::App* compare_cmd = app.add_subcommand("compare", "normalized error between two fields");
  compare_cmd->add_option("--a", compare_a, "first field (.f64f)")->required();
  compare_cmd->add_option("--b", compare_b, "second field (.f64f)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (synth_cmd->parsed()) {
      validate_spec(synth_args.spec);
      return run_synth(synth_args);
    }
    if (demod_cmd->parsed()) {
      if (demod_args.method != "alm" && demod_args.method != "fp")
        throw UsageError("--method must be alm or fp");
      validate_solver(demod_args.cfg);
      return run_demod(demod_args);
    }
    if (denoise_cmd->parsed()) {
      if (denoise_args.lambda <= 0 || denoise_args.r <= 0 || denoise_args.tol <= 0)
        throw UsageError("lambda, r and tol must be positive");
      return run_denoise(denoise_args);
    }
    if (sweep_cmd->parsed()) {
      for (const std::string& m : sweep_args.methods)
        if (m != "alm" && m != "fp") throw UsageError("--methods entries must be alm or fp");
      for (double s : sweep_args.sigmas)
        if (s < 0) throw UsageError("sigmas must be >= 0");
      validate_spec(sweep_args.spec);
      validate_solver(sweep_args.cfg);
      return run_sweep(sweep_args);
    }
    if (compare_cmd->parsed()) return run_compare(compare_a, compare_b);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return 0;
}
