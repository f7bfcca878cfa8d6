#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lrnn/calculus.hpp"
#include "lrnn/geometry.hpp"
#include "lrnn/randnet.hpp"
#include "lrnn/sampling.hpp"
#include "lrnn/types.hpp"

namespace lrnn::assembly {

// Interface problem data. Piecewise callables receive the subdomain index of
// the query point so every example can dispatch to its exact-solution piece
// without re-classifying. Elliptic problems ignore the time argument.
struct ProblemDefinition {
  geometry::GeometrySpec geom;
  std::vector<double> beta;  // per subdomain, positive

  // f(x, t, s)
  std::function<double(const Vec&, double, int)> source;
  // g1, g2 on interface `label`: value and normal-flux jumps, inner - outer
  std::vector<std::function<double(const Vec&, double)>> jump_value;
  std::vector<std::function<double(const Vec&, double)>> jump_flux;
  // g_D(x, t, s) on the domain boundary
  std::function<double(const Vec&, double, int)> dirichlet;
  // u0(x, s); required in space-time mode
  std::function<double(const Vec&, int)> initial_value;
  // optional exact solution / flux, for error evaluation
  std::function<double(const Vec&, double, int)> exact;
  std::function<Vec(const Vec&, double, int)> exact_flux;
};

enum class RowTag {
  Pde,
  Jump,
  FluxJump,
  Dirichlet,
  Initial,
  MixedDiv,
  MixedGradX,
  MixedGradY,
};

const char* row_tag_name(RowTag tag);

// Row weights applied to the constraint blocks (the PDE rows stay at 1).
struct BlockWeights {
  double jump = 50.0;
  double flux_jump = 50.0;
  double dirichlet = 50.0;
  double initial = 50.0;
};

struct AssemblyOptions {
  calculus::FdConfig fd;
  BlockWeights gamma;
  // The flux-jump rows carry the beta factors, matching the model condition
  // [beta grad u . n] = g2. Turn off to collocate the plain [grad u . n] form.
  bool flux_includes_beta = true;
};

// Row-weighted dense least-squares system. `matrix` and `rhs` already carry
// the gamma scaling; `row_weights` records it so residuals can be unweighted.
struct BlockSystem {
  Mat matrix;
  Vec rhs;
  std::vector<RowTag> row_tags;
  Vec row_weights;

  long rows() const { return matrix.rows(); }
  long cols() const { return matrix.cols(); }
};

// Strong form: X = (alpha^0, ..., alpha^{S-1}), rows N1 + 2 N2 + N3.
BlockSystem assemble_elliptic(const ProblemDefinition& prob,
                              const std::vector<randnet::RandomFeatureNetwork>& nets,
                              const sampling::CollocationSet& pts,
                              const AssemblyOptions& opts = {});

// First-order (flux) form in 2-D with two subdomains:
// X = (alpha^0, alpha^1, tau^{0,x}, tau^{0,y}, tau^{1,x}, tau^{1,y}),
// rows 3 N1 + 2 N2 + N3.
BlockSystem assemble_mixed(
    const ProblemDefinition& prob,
    const std::vector<randnet::RandomFeatureNetwork>& nets_u,
    const std::vector<std::array<randnet::RandomFeatureNetwork, 2>>& nets_p,
    const sampling::CollocationSet& pts, const AssemblyOptions& opts = {});

// Space-time form: networks take (x, t); rows N1 + 2 N2 + N3 + N0 with the
// initial slice collocated like an extra boundary block.
BlockSystem assemble_spacetime(
    const ProblemDefinition& prob,
    const std::vector<randnet::RandomFeatureNetwork>& nets,
    const sampling::CollocationSet& pts, const AssemblyOptions& opts = {});

// Output weights split back per subdomain (and per flux component for the
// mixed form), with evaluators over the owning networks.
struct SolutionCoefficients {
  std::vector<randnet::RandomFeatureNetwork> nets_u;
  std::vector<Vec> alpha;
  std::vector<std::array<randnet::RandomFeatureNetwork, 2>> nets_p;
  std::vector<std::array<Vec, 2>> tau;

  bool has_flux() const { return !tau.empty(); }
  // x is spatial; t is appended when the networks carry a time axis.
  double eval_u(int s, const Vec& x, double t = 0.0) const;
  Vec eval_flux(int s, const Vec& x, double t = 0.0) const;
};

SolutionCoefficients split_strong(
    const Vec& x, const std::vector<randnet::RandomFeatureNetwork>& nets);
SolutionCoefficients split_mixed(
    const Vec& x, const std::vector<randnet::RandomFeatureNetwork>& nets_u,
    const std::vector<std::array<randnet::RandomFeatureNetwork, 2>>& nets_p);

// Per-block RMS of the unweighted residual M X - R. Rows whose weight is zero
// cannot be unweighted and are skipped.
std::map<RowTag, double> residual(const BlockSystem& sys, const Vec& x);

// Raw binary dump: int64 rows, int64 cols, then row-major float64 entries,
// then the rhs.
void dump_system(const BlockSystem& sys, const std::string& path);

}  // namespace lrnn::assembly
