#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lrnn/assembly.hpp"
#include "lrnn/calculus.hpp"
#include "lrnn/linsolve.hpp"

namespace lrnn::config {

// One run's worth of knobs. Every field maps to a dotted key=value entry in
// the config file; command-line flags set the same keys and win over the file.
struct RunConfig {
  int example = 1;
  std::optional<int> dim;  // high-dimensional benchmark only
  std::optional<int> m;
  std::optional<int> n_points;
  std::optional<int> trials;
  std::optional<std::vector<double>> beta;
  std::optional<double> r1, r2;  // u-network init ranges (all subdomains)
  std::optional<double> r3, r4;  // flux-network init ranges (mixed form)
  std::optional<std::vector<double>> ratios;
  std::string form = "auto";  // auto | strong | mixed | spacetime
  std::uint64_t seed = 1;

  assembly::BlockWeights gamma;
  calculus::FdConfig fd;
  linsolve::SolverConfig solver;
  bool flux_includes_beta = true;

  std::optional<std::string> error_rule;  // gl | mc
  std::optional<int> error_nodes;
  std::optional<int> mc_samples;

  bool arclength_interface = false;
  std::optional<std::string> dump_system;
  std::string out_dir = "out";
  std::optional<int> grid_resolution;
  bool report_residuals = false;
  bool parallel_trials = false;
};

// Applies one dotted key. Throws InvalidConfig for unknown keys or bad values.
void set_key(RunConfig& cfg, const std::string& key, const std::string& value);

// Flat key=value file; '#' starts a comment.
RunConfig load_config_file(const std::string& path);

std::vector<double> parse_number_list(const std::string& text);

}  // namespace lrnn::config
