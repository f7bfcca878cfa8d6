// Test-only oracles: high-order finite differences applied to the exact
// solution pieces, independent of the library's derivative path.
#pragma once

#include <cmath>
#include <functional>

#include "lrnn/assembly.hpp"
#include "lrnn/rng.hpp"
#include "lrnn/types.hpp"

namespace lrnn::test_oracles {

using ScalarFn = std::function<double(const Vec&, double)>;

// fourth-order central first derivative
inline double fd4_partial(const ScalarFn& f, Vec x, double t, int axis,
                          double h = 1e-3) {
  const double x0 = x[axis];
  x[axis] = x0 + 2 * h;
  double acc = -f(x, t);
  x[axis] = x0 + h;
  acc += 8.0 * f(x, t);
  x[axis] = x0 - h;
  acc -= 8.0 * f(x, t);
  x[axis] = x0 - 2 * h;
  acc += f(x, t);
  return acc / (12.0 * h);
}

// fourth-order central second derivative
inline double fd4_second(const ScalarFn& f, Vec x, double t, int axis,
                         double h = 1e-2) {
  const double x0 = x[axis];
  x[axis] = x0 + 2 * h;
  double acc = -f(x, t);
  x[axis] = x0 + h;
  acc += 16.0 * f(x, t);
  x[axis] = x0;
  acc -= 30.0 * f(x, t);
  x[axis] = x0 - h;
  acc += 16.0 * f(x, t);
  x[axis] = x0 - 2 * h;
  acc -= f(x, t);
  return acc / (12.0 * h * h);
}

inline double fd4_time(const ScalarFn& f, const Vec& x, double t,
                       double h = 1e-3) {
  return (-f(x, t + 2 * h) + 8.0 * f(x, t + h) - 8.0 * f(x, t - h) +
          f(x, t - 2 * h)) /
         (12.0 * h);
}

struct ConsistencyReport {
  double max_pde = 0.0;
  double max_jump = 0.0;
  double max_flux = 0.0;
  double max_dirichlet = 0.0;
  double max_initial = 0.0;

  double worst() const {
    return std::max({max_pde, max_jump, max_flux, max_dirichlet, max_initial});
  }
};

// Applies the model operators to the exact solution with the FD oracle and
// compares against the problem's derived data (f, g1, g2, gD, u0). Errors are
// relative to 1 + |value|.
inline ConsistencyReport manufactured_consistency(
    const assembly::ProblemDefinition& prob, int n_points, std::uint64_t seed) {
  ConsistencyReport report;
  const auto& geom = prob.geom;
  const int d = geom.dim();
  const bool with_time = geom.space_time();
  rng::UniformRng rand(seed);

  auto piece = [&prob](int s) {
    return ScalarFn([&prob, s](const Vec& x, double t) {
      return prob.exact(x, t, s);
    });
  };
  auto rel = [](double got, double want) {
    return std::abs(got - want) / (1.0 + std::abs(want));
  };

  // PDE residual at interior points: (du/dt) - beta lap(u) = f
  for (int i = 0; i < n_points; ++i) {
    Vec x(d);
    for (int k = 0; k < d; ++k) x[k] = rand.next_in(geom.box.lo[k], geom.box.hi[k]);
    const double t = with_time ? rand.next_in(0.05, *geom.time_horizon - 0.05)
                               : 0.0;
    int s;
    try {
      s = geometry::classify_point(geom, x, t);
    } catch (const Error&) {
      --i;
      continue;
    }
    const auto u = piece(s);
    double lap = 0.0;
    for (int a = 0; a < d; ++a) lap += fd4_second(u, x, t, a);
    double lhs = -prob.beta[s] * lap;
    if (with_time) lhs += fd4_time(u, x, t);
    report.max_pde = std::max(report.max_pde, rel(lhs, prob.source(x, t, s)));
  }

  // Interface conditions at parameter-sampled points.
  for (std::size_t k = 0; k < geom.interfaces.size(); ++k) {
    const auto& f = geom.interfaces[k];
    const int in = static_cast<int>(k);
    for (int i = 0; i < n_points / 4; ++i) {
      Vec params(f.parameter_dim());
      for (int p = 0; p < params.size(); ++p) {
        params[p] = rand.next_in(0.0, 2.0 * 3.14159265358979323846);
      }
      const double t = with_time ? rand.next_in(0.0, *geom.time_horizon) : 0.0;
      geometry::InterfacePoint ip;
      try {
        ip = f.point_at(params, t);
      } catch (const Error&) {
        continue;
      }
      if (!geom.box.contains(ip.x)) continue;
      const auto u_in = piece(in);
      const auto u_out = piece(in + 1);
      const double jump = u_in(ip.x, t) - u_out(ip.x, t);
      report.max_jump =
          std::max(report.max_jump, rel(jump, prob.jump_value[k](ip.x, t)));

      double flux = 0.0;
      for (int a = 0; a < d; ++a) {
        flux += ip.normal[a] * (prob.beta[in] * fd4_partial(u_in, ip.x, t, a) -
                                prob.beta[in + 1] * fd4_partial(u_out, ip.x, t, a));
      }
      report.max_flux =
          std::max(report.max_flux, rel(flux, prob.jump_flux[k](ip.x, t)));
    }
  }

  // Dirichlet data on the boundary, and the initial slice if present.
  for (int i = 0; i < n_points / 4; ++i) {
    Vec x(d);
    for (int k = 0; k < d; ++k) x[k] = rand.next_in(geom.box.lo[k], geom.box.hi[k]);
    const int face = static_cast<int>(rand.next_in(0.0, 2.0 * d));
    const int axis = face / 2;
    x[axis] = (face % 2 == 0) ? geom.box.lo[axis] : geom.box.hi[axis];
    const double t = with_time ? rand.next_in(0.0, *geom.time_horizon) : 0.0;
    int s;
    try {
      s = geometry::classify_point(geom, x, t);
    } catch (const Error&) {
      continue;
    }
    report.max_dirichlet = std::max(
        report.max_dirichlet, rel(prob.exact(x, t, s), prob.dirichlet(x, t, s)));
  }
  if (with_time && prob.initial_value) {
    for (int i = 0; i < n_points / 4; ++i) {
      Vec x(d);
      for (int k = 0; k < d; ++k) {
        x[k] = rand.next_in(geom.box.lo[k], geom.box.hi[k]);
      }
      int s;
      try {
        s = geometry::classify_point(geom, x, 0.0);
      } catch (const Error&) {
        continue;
      }
      report.max_initial = std::max(
          report.max_initial, rel(prob.exact(x, 0.0, s), prob.initial_value(x, s)));
    }
  }
  return report;
}

}  // namespace lrnn::test_oracles
