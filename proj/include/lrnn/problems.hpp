#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lrnn/assembly.hpp"
#include "lrnn/quadrature.hpp"
#include "lrnn/sampling.hpp"

namespace lrnn::problems {

enum class Formulation { EllipticStrong, EllipticMixed, SpaceTime };

struct Overrides {
  std::optional<int> m;
  std::optional<int> n_points;
  std::optional<int> trials;
  std::optional<int> dim;  // high-dimensional benchmark only
  std::optional<std::vector<double>> beta;
  std::optional<std::vector<std::pair<double, double>>> init_ranges;
};

// One benchmark problem with its exact solution, derived data, and the
// published defaults (network width, point counts, ratios, init ranges).
struct ExampleBundle {
  int id = 0;
  std::string name;
  assembly::ProblemDefinition problem;
  sampling::SamplingPlan plan;  // seed filled in per trial by the runner
  Formulation default_form = Formulation::EllipticStrong;
  int m = 0;
  int trials = 10;
  // per-subdomain (weight, bias) init ranges for the u networks
  std::vector<std::pair<double, double>> u_ranges;
  // mixed form only: u ranges and flux ranges (same pair for all flux nets)
  std::vector<std::pair<double, double>> mixed_u_ranges;
  std::vector<std::pair<double, double>> mixed_p_ranges;
  bool has_mixed_defaults = false;
  quadrature::QuadratureRule error_rule;
};

// ids 1..6; throws UnknownExample otherwise.
ExampleBundle make_example(int id, const Overrides& overrides = {});

}  // namespace lrnn::problems
