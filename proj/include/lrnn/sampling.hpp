#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lrnn/geometry.hpp"
#include "lrnn/types.hpp"

namespace lrnn::sampling {

struct RegionCounts {
  int interior = 0;
  std::vector<int> interfaces;  // one entry per interface, label order
  int boundary = 0;
  int initial = 0;

  int interface_total() const;
  int total() const;
};

// Region weights are arbitrary non-negative ratios (normalized internally).
// Counts are floor(N * fraction) with the remainder going to the interior,
// then every positive-weight region is topped up to at least one point.
// `absolute` bypasses the ratios entirely (high-dimensional benchmark style).
struct SamplingPlan {
  int total = 0;
  double interior_weight = 0.0;
  std::vector<double> interface_weights;
  double boundary_weight = 0.0;
  double initial_weight = 0.0;  // space-time only
  std::uint64_t seed = 0;
  bool arclength_interface = false;
  std::optional<RegionCounts> absolute;
};

RegionCounts stratified_counts(const SamplingPlan& plan);

// Tagged collocation points. Point rows carry the network input layout:
// spatial coordinates, plus a trailing time column in space-time mode.
struct CollocationSet {
  Mat interior;                         // N1 x din
  std::vector<int> interior_subdomain;  // N1
  Mat interface_points;                 // N2 x din
  Mat interface_normals;                // N2 x d (spatial)
  std::vector<int> interface_label;     // N2
  Mat boundary;                         // N3 x din
  std::vector<int> boundary_subdomain;  // N3
  Mat initial;                          // N0 x din, time column = 0
  std::vector<int> initial_subdomain;   // N0
  int spatial_dim = 0;
  bool space_time = false;

  int din() const { return spatial_dim + (space_time ? 1 : 0); }
};

// Interior points are uniform over the box with a 1e-8 rejection band around
// every interface; interface points are uniform in the surface parameter
// (arclength-weighted under plan.arclength_interface); boundary points are
// uniform over faces proportional to face measure; initial points are uniform
// over the box at t = 0. Deterministic given (geom, plan).
CollocationSet sample_collocation(const geometry::GeometrySpec& geom,
                                  const SamplingPlan& plan);

}  // namespace lrnn::sampling
