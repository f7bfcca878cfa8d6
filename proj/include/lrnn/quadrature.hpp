#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>

#include "lrnn/geometry.hpp"
#include "lrnn/types.hpp"

namespace lrnn::quadrature {

struct QuadratureRule {
  enum class Kind { GaussLegendreTensor, MonteCarlo };
  Kind kind = Kind::GaussLegendreTensor;
  int nodes_per_axis = 20;
  int n_samples = 10000;      // Monte Carlo
  std::uint64_t seed = 0;     // Monte Carlo
};

// Standard n-point rule on [-1,1]; nodes ascending, exact for degree 2n-1.
std::pair<Vec, Vec> gauss_legendre_1d(int n);

// Scalar field evaluated at a spatial point / time / subdomain index.
using FieldFn = std::function<double(const Vec&, double, int)>;
using VectorFieldFn = std::function<Vec(const Vec&, double, int)>;

// sqrt(int (exact-approx)^2) / sqrt(int exact^2) over the box (times (0,T)
// for space-time geometries unless fixed_time pins the slice). Nodes are
// mapped affinely and classified per subdomain, nudging off interfaces.
double relative_l2_error(const FieldFn& approx, const FieldFn& exact,
                         const geometry::GeometrySpec& geom,
                         const QuadratureRule& rule,
                         std::optional<double> fixed_time = {});

// Same ratio for a vector field (componentwise squared sums).
double relative_l2_error_flux(const VectorFieldFn& approx,
                              const VectorFieldFn& exact,
                              const geometry::GeometrySpec& geom,
                              const QuadratureRule& rule,
                              std::optional<double> fixed_time = {});

}  // namespace lrnn::quadrature
