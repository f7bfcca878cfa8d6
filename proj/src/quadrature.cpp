#include "lrnn/quadrature.hpp"

#include <cmath>
#include <vector>

#include "lrnn/errors.hpp"
#include "lrnn/rng.hpp"

namespace lrnn::quadrature {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::pair<Vec, Vec> gauss_legendre_1d(int n) {
  if (n < 1) throw InvalidConfig("quadrature order must be >= 1");
  Vec x(n), w(n);
  // Newton iteration on P_n from the Chebyshev-like initial guess; roots come
  // in +- pairs so only the upper half is computed.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double root = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double deriv = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = root;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * root * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p1 = root;  // P_1
      deriv = n * (root * p1 - p0) / (root * root - 1.0);
      if (n == 1) deriv = 1.0;
      const double step = p1 / deriv;
      root -= step;
      if (std::abs(step) < 1e-15) break;
    }
    const double weight = 2.0 / ((1.0 - root * root) * deriv * deriv);
    x[n - 1 - i] = root;
    x[i] = -root;
    w[n - 1 - i] = weight;
    w[i] = weight;
  }
  if (n % 2 == 1) {
    x[n / 2] = 0.0;  // the central root is exact
  }
  return {x, w};
}

namespace {

struct ErrorAccumulator {
  double num = 0.0;
  double den = 0.0;

  void add(double weight, double err_sq, double exact_sq) {
    num += weight * err_sq;
    den += weight * exact_sq;
  }
  double ratio() const {
    if (den < 1e-300) throw ZeroDenominator("exact solution has zero norm");
    return std::sqrt(num / den);
  }
};

// Walks the tensor grid (or Monte Carlo draw), handing each node's spatial
// point, time, subdomain and weight to `visit`.
template <typename Visit>
void for_each_node(const geometry::GeometrySpec& geom, const QuadratureRule& rule,
                   std::optional<double> fixed_time, Visit&& visit) {
  const int d = geom.dim();
  const bool with_time = geom.space_time() && !fixed_time;
  const int total_dims = d + (with_time ? 1 : 0);
  const double t_fixed =
      fixed_time ? *fixed_time : 0.0;

  if (rule.kind == QuadratureRule::Kind::MonteCarlo) {
    rng::UniformRng rand(rule.seed);
    if (rule.n_samples < 1) throw InvalidConfig("Monte Carlo needs samples");
    Vec x(d);
    for (int i = 0; i < rule.n_samples; ++i) {
      for (int k = 0; k < d; ++k) {
        x[k] = rand.next_in(geom.box.lo[k], geom.box.hi[k]);
      }
      const double t =
          with_time ? rand.next_in(0.0, *geom.time_horizon) : t_fixed;
      const int s = geometry::classify_point_robust(geom, x, t);
      visit(x, t, s, 1.0);
    }
    return;
  }

  const int n = rule.nodes_per_axis;
  double total_nodes = std::pow(static_cast<double>(n), total_dims);
  if (total_nodes > 4e7) {
    throw InvalidConfig(
        "tensor Gauss-Legendre rule too large; use the Monte Carlo rule");
  }
  auto [nodes, weights] = gauss_legendre_1d(n);

  std::vector<int> idx(total_dims, 0);
  Vec x(d);
  while (true) {
    double w = 1.0;
    for (int k = 0; k < d; ++k) {
      const double half = 0.5 * geom.box.extent(k);
      x[k] = geom.box.lo[k] + half * (nodes[idx[k]] + 1.0);
      w *= half * weights[idx[k]];
    }
    double t = t_fixed;
    if (with_time) {
      const double half = 0.5 * *geom.time_horizon;
      t = half * (nodes[idx[d]] + 1.0);
      w *= half * weights[idx[d]];
    }
    const int s = geometry::classify_point_robust(geom, x, t);
    visit(x, t, s, w);

    int k = 0;
    for (; k < total_dims; ++k) {
      if (++idx[k] < n) break;
      idx[k] = 0;
    }
    if (k == total_dims) break;
  }
}

}  // namespace

double relative_l2_error(const FieldFn& approx, const FieldFn& exact,
                         const geometry::GeometrySpec& geom,
                         const QuadratureRule& rule,
                         std::optional<double> fixed_time) {
  ErrorAccumulator acc;
  for_each_node(geom, rule, fixed_time,
                [&](const Vec& x, double t, int s, double w) {
                  const double ue = exact(x, t, s);
                  const double ua = approx(x, t, s);
                  acc.add(w, (ue - ua) * (ue - ua), ue * ue);
                });
  return acc.ratio();
}

double relative_l2_error_flux(const VectorFieldFn& approx,
                              const VectorFieldFn& exact,
                              const geometry::GeometrySpec& geom,
                              const QuadratureRule& rule,
                              std::optional<double> fixed_time) {
  ErrorAccumulator acc;
  for_each_node(geom, rule, fixed_time,
                [&](const Vec& x, double t, int s, double w) {
                  const Vec pe = exact(x, t, s);
                  const Vec pa = approx(x, t, s);
                  acc.add(w, (pe - pa).squaredNorm(), pe.squaredNorm());
                });
  return acc.ratio();
}

}  // namespace lrnn::quadrature
