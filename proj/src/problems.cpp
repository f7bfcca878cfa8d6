#include "lrnn/problems.hpp"

#include <cmath>

#include "lrnn/errors.hpp"

namespace lrnn::problems {

namespace {

constexpr double kPi = 3.14159265358979323846;

using assembly::ProblemDefinition;
using geometry::Interface;

// Exact solution pieces with their diffusive fluxes beta_s * grad(u_s) and
// sources; everything else (jumps, boundary, initial data) follows from them.
struct PieceSet {
  std::function<double(const Vec&, double, int)> u;
  std::function<Vec(const Vec&, double, int)> beta_grad;
  std::function<double(const Vec&, double, int)> f;
};

void attach_data(ProblemDefinition& prob, const PieceSet& pieces,
                 bool with_initial) {
  prob.exact = pieces.u;
  prob.exact_flux = pieces.beta_grad;
  prob.source = pieces.f;
  prob.dirichlet = [u = pieces.u](const Vec& x, double t, int s) {
    return u(x, t, s);
  };
  prob.jump_value.clear();
  prob.jump_flux.clear();
  for (std::size_t k = 0; k < prob.geom.interfaces.size(); ++k) {
    const int in = static_cast<int>(k);
    prob.jump_value.push_back([u = pieces.u, in](const Vec& x, double t) {
      return u(x, t, in) - u(x, t, in + 1);
    });
    prob.jump_flux.push_back(
        [bg = pieces.beta_grad, iface = prob.geom.interfaces[k], in](
            const Vec& x, double t) {
          const Vec n = iface.unit_normal(x, t);
          return bg(x, t, in).dot(n) - bg(x, t, in + 1).dot(n);
        });
  }
  if (with_initial) {
    prob.initial_value = [u = pieces.u](const Vec& x, int s) {
      return u(x, 0.0, s);
    };
  }
}

sampling::SamplingPlan ratio_plan(int n, double interior,
                                  std::vector<double> interfaces,
                                  double boundary, double initial = 0.0) {
  sampling::SamplingPlan plan;
  plan.total = n;
  plan.interior_weight = interior;
  plan.interface_weights = std::move(interfaces);
  plan.boundary_weight = boundary;
  plan.initial_weight = initial;
  return plan;
}

std::vector<double> resolve_beta(const Overrides& ov, std::vector<double> defaults) {
  if (!ov.beta) return defaults;
  if (ov.beta->size() != defaults.size()) {
    throw InvalidConfig("beta override must carry one value per subdomain");
  }
  return *ov.beta;
}

// Flower-shaped interface, u = e^{xy}/b1 inside and sin(x)sin(y)/b2 outside.
ExampleBundle flower_example(const Overrides& ov) {
  ExampleBundle ex;
  ex.id = 1;
  ex.name = "flower2d";
  ex.m = 320;
  ex.u_ranges = {{1.6, 0.7}, {1.6, 0.7}};
  ex.mixed_u_ranges = {{1.0, 1.1}, {1.0, 1.1}};
  ex.mixed_p_ranges = {{0.7, 2.1}, {0.7, 2.1}};
  ex.has_mixed_defaults = true;
  ex.plan = ratio_plan(5000, 3.0, {1.0}, 1.0);

  const double xc = 0.02 * std::sqrt(5.0);
  Vec center(2);
  center << xc, xc;
  ex.problem.geom = geometry::make_geometry(
      geometry::cube(-1.0, 1.0, 2),
      {Interface::polar_curve(center, 0.4, 0.2, 20.0, /*cosine=*/false)});

  const std::vector<double> beta = resolve_beta(ov, {1.0, 10.0});
  ex.problem.beta = beta;

  PieceSet pieces;
  pieces.u = [beta](const Vec& x, double, int s) {
    return s == 0 ? std::exp(x[0] * x[1]) / beta[0]
                  : std::sin(x[0]) * std::sin(x[1]) / beta[1];
  };
  pieces.beta_grad = [](const Vec& x, double, int s) {
    Vec g(2);
    if (s == 0) {  // beta cancels: beta0 * grad(e^{xy}/beta0)
      const double e = std::exp(x[0] * x[1]);
      g << x[1] * e, x[0] * e;
    } else {
      g << std::cos(x[0]) * std::sin(x[1]), std::sin(x[0]) * std::cos(x[1]);
    }
    return g;
  };
  pieces.f = [](const Vec& x, double, int s) {
    return s == 0 ? -(x[0] * x[0] + x[1] * x[1]) * std::exp(x[0] * x[1])
                  : 2.0 * std::sin(x[0]) * std::sin(x[1]);
  };
  attach_data(ex.problem, pieces, /*with_initial=*/false);
  return ex;
}

// Spherical interface in 3-D, u = 5 e^{|x|^2} + 20 inside, 10(x+y+z) outside.
ExampleBundle sphere_example(const Overrides& ov) {
  ExampleBundle ex;
  ex.id = 2;
  ex.name = "sphere3d";
  ex.m = 640;
  // weight range 0.33, bias range 2.54: the assignment that actually attains
  // the published accuracy (the reverse loses four orders of magnitude)
  ex.u_ranges = {{0.33, 2.54}, {0.33, 2.54}};
  ex.plan = ratio_plan(10000, 6.0, {1.0}, 3.0);

  ex.problem.geom = geometry::make_geometry(
      geometry::cube(-1.0, 1.0, 3), {Interface::sphere(Vec::Zero(3), 0.75)});

  const std::vector<double> beta = resolve_beta(ov, {1.0, 100.0});
  ex.problem.beta = beta;

  PieceSet pieces;
  pieces.u = [](const Vec& x, double, int s) {
    return s == 0 ? 5.0 * std::exp(x.squaredNorm()) + 20.0 : 10.0 * x.sum();
  };
  pieces.beta_grad = [beta](const Vec& x, double, int s) {
    if (s == 0) return Vec(beta[0] * 10.0 * std::exp(x.squaredNorm()) * x);
    return Vec(beta[1] * 10.0 * Vec::Ones(3));
  };
  pieces.f = [beta](const Vec& x, double, int s) {
    if (s != 0) return 0.0;
    const double r2 = x.squaredNorm();
    return -beta[0] * (30.0 + 20.0 * r2) * std::exp(r2);
  };
  attach_data(ex.problem, pieces, /*with_initial=*/false);
  return ex;
}

// Three nested interfaces, four solution pieces.
ExampleBundle nested_example(const Overrides& ov) {
  ExampleBundle ex;
  ex.id = 3;
  ex.name = "nested2d";
  ex.m = 320;
  ex.u_ranges = {{1.1, 1.1}, {0.7, 0.7}, {0.3, 0.3}, {1.0, 1.0}};
  ex.plan = ratio_plan(5000, 6.0, {1.0, 1.0, 1.0}, 1.0);

  const Vec origin = Vec::Zero(2);
  ex.problem.geom = geometry::make_geometry(
      geometry::cube(-1.0, 1.0, 2),
      {Interface::sphere(origin, 0.2, 0),
       Interface::polar_curve(origin, 0.5, -0.1, 5.0, /*cosine=*/true, 1),
       Interface::sphere(origin, 0.8, 2)});

  const std::vector<double> beta = resolve_beta(ov, {1.0, 2.0, 3.0, 4.0});
  ex.problem.beta = beta;

  PieceSet pieces;
  pieces.u = [](const Vec& x, double, int s) {
    switch (s) {
      case 0: return std::cos(x[1]) + 1.8;
      case 1: return std::exp(x[0]) + 1.3;
      case 2: return std::sin(x[0]) + 0.5;
      default: return -x[0] + std::log(x[1] + 2.0);
    }
  };
  pieces.beta_grad = [beta](const Vec& x, double, int s) {
    Vec g(2);
    switch (s) {
      case 0: g << 0.0, -std::sin(x[1]); break;
      case 1: g << std::exp(x[0]), 0.0; break;
      case 2: g << std::cos(x[0]), 0.0; break;
      default: g << -1.0, 1.0 / (x[1] + 2.0); break;
    }
    return Vec(beta[s] * g);
  };
  pieces.f = [beta](const Vec& x, double, int s) {
    switch (s) {
      case 0: return beta[0] * std::cos(x[1]);
      case 1: return -beta[1] * std::exp(x[0]);
      case 2: return beta[2] * std::sin(x[0]);
      default: return beta[3] / ((x[1] + 2.0) * (x[1] + 2.0));
    }
  };
  attach_data(ex.problem, pieces, /*with_initial=*/false);
  return ex;
}

// Hyperplane interface in (0,1)^d, u = |x|^2/d inside, sum(x)/d outside.
ExampleBundle highdim_example(const Overrides& ov) {
  ExampleBundle ex;
  ex.id = 4;
  ex.name = "highdim";
  ex.m = 1800;
  ex.u_ranges = {{0.01, 0.01}, {0.01, 0.01}};

  const int d = ov.dim.value_or(5);
  if (d < 2) throw InvalidConfig("the high-dimensional benchmark needs d >= 2");

  sampling::RegionCounts counts;
  counts.interior = 1000;
  counts.interfaces = {10000};
  counts.boundary = 2 * d * 100;
  counts.initial = 0;
  ex.plan.absolute = counts;
  ex.plan.total = counts.total();

  ex.problem.geom = geometry::make_geometry(
      geometry::cube(0.0, 1.0, d), {Interface::hyperplane(0, 0.5, d)});

  const std::vector<double> beta = resolve_beta(ov, {1.0, 1.0});
  ex.problem.beta = beta;

  PieceSet pieces;
  pieces.u = [d](const Vec& x, double, int s) {
    return s == 0 ? x.squaredNorm() / d : x.sum() / d;
  };
  pieces.beta_grad = [beta, d](const Vec& x, double, int s) {
    if (s == 0) return Vec(beta[0] * 2.0 / d * x);
    return Vec(beta[1] / d * Vec::Ones(d));
  };
  pieces.f = [beta](const Vec&, double, int s) {
    return s == 0 ? -2.0 * beta[0] : 0.0;
  };
  attach_data(ex.problem, pieces, /*with_initial=*/false);

  ex.error_rule.kind = quadrature::QuadratureRule::Kind::MonteCarlo;
  ex.error_rule.n_samples = 10000;
  return ex;
}

// Parabolic pieces shared by the fixed- and moving-interface benchmarks.
PieceSet parabolic_pieces(const std::vector<double>& beta) {
  PieceSet pieces;
  pieces.u = [](const Vec& x, double t, int s) {
    if (s == 0) {
      return -std::exp(-t) * (8.0 * x[0] * x[0] + 8.0 * x[1] * x[1] - 3.5);
    }
    return std::exp(x[0] - t) * std::cos(0.5 * kPi * x[1]);
  };
  pieces.beta_grad = [beta](const Vec& x, double t, int s) {
    Vec g(2);
    if (s == 0) {
      const double e = std::exp(-t);
      g << -16.0 * x[0] * e, -16.0 * x[1] * e;
      return Vec(beta[0] * g);
    }
    const double e = std::exp(x[0] - t);
    g << e * std::cos(0.5 * kPi * x[1]), -0.5 * kPi * e * std::sin(0.5 * kPi * x[1]);
    return Vec(beta[1] * g);
  };
  // f = du/dt - beta * lap(u)
  pieces.f = [beta](const Vec& x, double t, int s) {
    if (s == 0) {
      const double e = std::exp(-t);
      return e * (8.0 * x[0] * x[0] + 8.0 * x[1] * x[1] - 3.5) + 32.0 * beta[0] * e;
    }
    const double w = std::exp(x[0] - t) * std::cos(0.5 * kPi * x[1]);
    return -w - beta[1] * w * (1.0 - 0.25 * kPi * kPi);
  };
  return pieces;
}

ExampleBundle parabolic_example(int id, const Overrides& ov) {
  ExampleBundle ex;
  ex.id = id;
  ex.name = id == 5 ? "heat_fixed" : "heat_moving";
  ex.default_form = Formulation::SpaceTime;
  ex.m = 320;
  ex.u_ranges = id == 5
                    ? std::vector<std::pair<double, double>>{{0.6, 0.6}, {0.6, 0.6}}
                    : std::vector<std::pair<double, double>>{{1.0, 1.0}, {1.0, 1.0}};
  // 14:3:3 over interior : interface : (boundary u initial), the last region
  // split 4:1 between the lateral boundary and the t=0 slice.
  ex.plan = ratio_plan(5000, 14.0, {3.0}, 3.0 * 0.8, 3.0 * 0.2);

  const Vec origin = Vec::Zero(2);
  Interface iface = id == 5 ? Interface::sphere(origin, 0.5)
                            : Interface::moving_circle(origin, 0.5, 0.3);
  ex.problem.geom =
      geometry::make_geometry(geometry::cube(-1.0, 1.0, 2), {iface}, 1.0);

  const std::vector<double> beta = resolve_beta(ov, {1.0, 1.0});
  ex.problem.beta = beta;
  attach_data(ex.problem, parabolic_pieces(beta), /*with_initial=*/true);
  return ex;
}

}  // namespace

ExampleBundle make_example(int id, const Overrides& ov) {
  ExampleBundle ex;
  switch (id) {
    case 1: ex = flower_example(ov); break;
    case 2: ex = sphere_example(ov); break;
    case 3: ex = nested_example(ov); break;
    case 4: ex = highdim_example(ov); break;
    case 5:
    case 6: ex = parabolic_example(id, ov); break;
    default: throw UnknownExample("example id must be 1..6");
  }
  if (ov.dim && id != 4) {
    throw InvalidConfig("only the high-dimensional benchmark takes a dim override");
  }
  if (ov.m) {
    if (*ov.m < 1) throw InvalidConfig("m must be positive");
    ex.m = *ov.m;
  }
  if (ov.n_points) {
    if (*ov.n_points < 1) throw InvalidConfig("N must be positive");
    if (ex.plan.absolute) {
      throw InvalidConfig("this benchmark uses absolute point counts");
    }
    ex.plan.total = *ov.n_points;
  }
  if (ov.trials) {
    if (*ov.trials < 1) throw InvalidConfig("trials must be positive");
    ex.trials = *ov.trials;
  }
  if (ov.init_ranges) {
    if (ov.init_ranges->size() != ex.u_ranges.size()) {
      throw InvalidConfig("init range override must cover every subdomain");
    }
    ex.u_ranges = *ov.init_ranges;
  }
  return ex;
}

}  // namespace lrnn::problems
