#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lrnn/config.hpp"
#include "lrnn/linsolve.hpp"
#include "lrnn/problems.hpp"
#include "lrnn/quadrature.hpp"

namespace lrnn::runner {

struct NetworkInfo {
  std::string role;  // "u0", "u1", "p0x", ...
  std::uint64_t seed = 0;
  int d_in = 0;
  std::vector<int> hidden_widths;
  double r_weight = 0.0;
  double r_bias = 0.0;
};

struct TrialResult {
  double error = 0.0;
  std::optional<double> flux_error;
  linsolve::SolveDiagnostics diagnostics;
  std::map<assembly::RowTag, double> residuals;  // only under report.residuals
  double t_sample = 0.0, t_assemble = 0.0, t_solve = 0.0, t_evaluate = 0.0;
};

struct RunManifest {
  int example_id = 0;
  std::string example_name;
  problems::Formulation form = problems::Formulation::EllipticStrong;
  int m = 0;
  int trials = 0;
  std::uint64_t base_seed = 0;
  std::vector<double> beta;
  sampling::RegionCounts counts;
  long system_rows = 0;
  long system_cols = 0;
  quadrature::QuadratureRule error_rule;  // seed varies per trial
  linsolve::SolverConfig solver;
  calculus::FdConfig fd;
  assembly::BlockWeights gamma;
  std::vector<NetworkInfo> networks;  // first trial's streams
  std::vector<TrialResult> trial_results;
  double mean_error = 0.0;
  std::optional<double> mean_flux_error;
  // populated when RunOptions::keep_solutions is set (and always for problems
  // the caller wants to slice or dump)
  std::vector<assembly::SolutionCoefficients> solutions;
};

struct RunOptions {
  bool keep_solutions = false;
};

// Executes cfg.trials independent trials (trial k re-seeds sampling and
// network init with base_seed + k) and averages the errors. Throws on the
// first failing trial; partial results are never averaged.
RunManifest run(const config::RunConfig& cfg, const RunOptions& opts = {});

// Resolved problem bundle for a config (exact solutions, geometry, plan).
problems::ExampleBundle resolve_bundle(const config::RunConfig& cfg);
problems::Formulation resolve_form(const config::RunConfig& cfg,
                                   const problems::ExampleBundle& bundle);

// manifest.txt + errors.csv under `dir` (created if needed).
void write_run_outputs(const RunManifest& manifest, const std::string& dir);

struct SweepResult {
  std::vector<int> m_values;
  std::vector<int> n_values;
  Mat mean_errors;  // n_values.size() x m_values.size()
};

SweepResult sweep(const config::RunConfig& cfg, const std::vector<int>& m_values,
                  const std::vector<int>& n_values);
void write_sweep_csv(const SweepResult& result, const std::string& path);

// Uniform-grid dump of a scalar field against the exact solution: columns
// x, y(, z), value, exact, abs_err, subdomain. Space-time problems emit one
// file per slice t in {0, 0.25, 0.5, 0.75, 1} * T, otherwise grid.csv.
void dump_grid(const quadrature::FieldFn& field,
               const assembly::ProblemDefinition& prob, int resolution,
               const std::string& dir);

// Per-slice relative L2 errors at the standard slice times (space-time only).
std::vector<double> slice_errors(const assembly::SolutionCoefficients& sol,
                                 const assembly::ProblemDefinition& prob,
                                 int nodes_per_axis = 20);

}  // namespace lrnn::runner
