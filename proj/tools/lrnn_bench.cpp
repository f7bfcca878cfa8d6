// Benchmark driver: runs one configuration (or an m/N sweep) of the local
// randomized-network collocation solver and writes manifest/CSV outputs.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lrnn/runner.hpp"

namespace {

struct CliFlags {
  std::string config_file;
  std::vector<std::pair<std::string, std::string>> keys;  // applied in order
};

void add_shared_options(CLI::App* cmd, CliFlags& flags) {
  auto bind = [&flags, cmd](const std::string& flag, const std::string& key,
                            const std::string& help) {
    cmd->add_option_function<std::string>(
        flag,
        [&flags, key](const std::string& v) { flags.keys.emplace_back(key, v); },
        help);
  };
  cmd->add_option("--config", flags.config_file, "key=value config file");
  bind("--example", "example", "benchmark id 1..6");
  bind("--dim", "dim", "space dimension (high-dimensional benchmark)");
  bind("--m", "m", "hidden-layer width per network");
  bind("--n-points", "sampling.N", "total collocation points N");
  bind("--ratios", "sampling.ratios", "region ratios, e.g. 3:1:1");
  bind("--beta", "beta", "diffusion coefficients, e.g. 1,10");
  bind("--r1", "r1", "weight init range for u networks");
  bind("--r2", "r2", "bias init range for u networks");
  bind("--r3", "r3", "weight init range for flux networks");
  bind("--r4", "r4", "bias init range for flux networks");
  bind("--gamma", "gamma", "row weight for all constraint blocks");
  bind("--seed", "seed", "base seed; trial k uses seed+k");
  bind("--trials", "trials", "number of averaged trials");
  bind("--solver", "solver.method", "svd | qr | normal");
  bind("--rcond", "solver.rcond", "singular-value cutoff");
  bind("--form", "form", "auto | strong | mixed | spacetime");
  bind("--error-rule", "error.rule", "gl | mc");
  bind("--error-nodes", "error.nodes", "Gauss-Legendre nodes per axis");
  bind("--mc-samples", "error.mc_samples", "Monte Carlo sample count");
  bind("--out", "out", "output directory");
  bind("--grid", "grid.resolution", "dump a solution grid at this resolution");
  bind("--dump-system", "dump.system", "write the assembled system to a file");
  cmd->add_flag_callback(
      "--arclength-interface",
      [&flags] { flags.keys.emplace_back("sampling.interface", "arclength"); },
      "sample curves uniformly in arclength instead of parameter");
  cmd->add_flag_callback(
      "--no-flux-beta",
      [&flags] { flags.keys.emplace_back("assembly.flux_beta", "off"); },
      "collocate [grad u . n] without the beta factors");
  cmd->add_flag_callback(
      "--residuals",
      [&flags] { flags.keys.emplace_back("report.residuals", "on"); },
      "report per-block training residuals (copies the system)");
  cmd->add_flag_callback(
      "--parallel-trials",
      [&flags] { flags.keys.emplace_back("parallel.trials", "on"); },
      "run trials concurrently");
}

lrnn::config::RunConfig build_config(const CliFlags& flags) {
  lrnn::config::RunConfig cfg;
  if (!flags.config_file.empty()) {
    cfg = lrnn::config::load_config_file(flags.config_file);
  }
  for (const auto& [key, value] : flags.keys) {
    lrnn::config::set_key(cfg, key, value);
  }
  return cfg;
}

int do_run(const CliFlags& flags) {
  const lrnn::config::RunConfig cfg = build_config(flags);
  lrnn::runner::RunOptions opts;
  opts.keep_solutions = cfg.grid_resolution.has_value();
  const lrnn::runner::RunManifest manifest = lrnn::runner::run(cfg, opts);
  lrnn::runner::write_run_outputs(manifest, cfg.out_dir);

  if (cfg.grid_resolution) {
    const auto& sol = manifest.solutions.front();
    const auto bundle = lrnn::runner::resolve_bundle(cfg);
    lrnn::runner::dump_grid(
        [&sol](const lrnn::Vec& x, double t, int s) { return sol.eval_u(s, x, t); },
        bundle.problem, *cfg.grid_resolution, cfg.out_dir);
  }

  std::printf("example %d (%s): mean relative L2 error %.6e over %d trials\n",
              manifest.example_id, manifest.example_name.c_str(),
              manifest.mean_error, manifest.trials);
  if (manifest.mean_flux_error) {
    std::printf("flux error %.6e\n", *manifest.mean_flux_error);
  }
  std::printf("outputs written to %s\n", cfg.out_dir.c_str());
  return 0;
}

int do_sweep(const CliFlags& flags, const std::vector<int>& m_values,
             const std::vector<int>& n_values) {
  const lrnn::config::RunConfig cfg = build_config(flags);
  const auto result = lrnn::runner::sweep(cfg, m_values, n_values);
  std::filesystem::create_directories(cfg.out_dir);
  const std::string path = cfg.out_dir + "/sweep.csv";
  lrnn::runner::write_sweep_csv(result, path);
  for (std::size_t i = 0; i < result.n_values.size(); ++i) {
    for (std::size_t j = 0; j < result.m_values.size(); ++j) {
      std::printf("N=%-6d m=%-5d error %.6e\n", result.n_values[i],
                  result.m_values[j], result.mean_errors(i, j));
    }
  }
  std::printf("table written to %s\n", path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local randomized neural network collocation benchmarks"};
  app.require_subcommand(1);

  CliFlags run_flags;
  CLI::App* run_cmd = app.add_subcommand("run", "solve one configuration");
  add_shared_options(run_cmd, run_flags);

  CliFlags sweep_flags;
  std::vector<int> m_values, n_values;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "mean error over an m x N grid");
  add_shared_options(sweep_cmd, sweep_flags);
  sweep_cmd->add_option("--m-list", m_values, "hidden widths to sweep")
      ->required();
  sweep_cmd->add_option("--n-list", n_values, "point counts to sweep")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return do_run(run_flags);
    if (sweep_cmd->parsed()) return do_sweep(sweep_flags, m_values, n_values);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
