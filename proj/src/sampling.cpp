#include "lrnn/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lrnn/errors.hpp"
#include "lrnn/rng.hpp"

namespace lrnn::sampling {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInteriorBand = 1e-8;  // rejection band around interfaces

using geometry::GeometrySpec;
using geometry::Interface;

}  // namespace

int RegionCounts::interface_total() const {
  return std::accumulate(interfaces.begin(), interfaces.end(), 0);
}

int RegionCounts::total() const {
  return interior + interface_total() + boundary + initial;
}

RegionCounts stratified_counts(const SamplingPlan& plan) {
  if (plan.absolute) {
    const RegionCounts& c = *plan.absolute;
    if (c.total() <= 0 || c.interior < 0 || c.boundary < 0 || c.initial < 0) {
      throw InfeasiblePlan("absolute counts must be non-negative with a positive sum");
    }
    return c;
  }
  if (plan.total <= 0) throw InfeasiblePlan("plan requires a positive point count");
  std::vector<double> weights;
  weights.push_back(plan.interior_weight);
  for (double w : plan.interface_weights) weights.push_back(w);
  weights.push_back(plan.boundary_weight);
  weights.push_back(plan.initial_weight);
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw InfeasiblePlan("region weights must be non-negative");
    sum += w;
  }
  if (sum <= 0.0) throw InfeasiblePlan("region weights must not all vanish");
  if (plan.interior_weight <= 0.0) {
    throw InfeasiblePlan("plan needs a positive interior fraction");
  }

  std::vector<int> counts(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    counts[i] = static_cast<int>(std::floor(plan.total * weights[i] / sum));
  }
  int assigned = std::accumulate(counts.begin(), counts.end(), 0);
  counts[0] += plan.total - assigned;  // remainder goes to the interior
  for (std::size_t i = 1; i < weights.size(); ++i) {
    if (weights[i] > 0.0 && counts[i] == 0) {  // minimum-count rule
      counts[i] = 1;
      counts[0] -= 1;
    }
  }
  if (counts[0] < 1) throw InfeasiblePlan("plan too small for its regions");

  RegionCounts out;
  out.interior = counts[0];
  out.interfaces.assign(counts.begin() + 1, counts.end() - 2);
  out.boundary = counts[counts.size() - 2];
  out.initial = counts.back();
  return out;
}

namespace {

// Fills `dst` (size d, or d+1 with a trailing time coordinate) with a uniform
// point of the box, rejecting points within the interface band. Returns the
// subdomain tag.
int draw_interior_point(const GeometrySpec& geom, rng::UniformRng& rand,
                        bool space_time, double t_fixed, bool fix_time,
                        Vec& dst) {
  const int d = geom.dim();
  Vec x(d);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    for (int k = 0; k < d; ++k) {
      x[k] = rand.next_in(geom.box.lo[k], geom.box.hi[k]);
    }
    double t = 0.0;
    if (space_time) t = fix_time ? t_fixed : rand.next_in(0.0, *geom.time_horizon);
    bool clear = true;
    int index = 0;
    for (const Interface& f : geom.interfaces) {
      const double phi = f.level(x, t);
      if (std::abs(phi) < kInteriorBand) {
        clear = false;
        break;
      }
      if (phi > 0.0) ++index;
    }
    if (!clear) continue;
    dst.head(d) = x;
    if (space_time) dst[d] = t;
    return index;
  }
  throw InfeasiblePlan("interior sampling failed to clear the interface band");
}

double polar_speed(const Interface& f, double theta) {
  const double r = f.polar_radius(theta);
  const double dr = f.polar_radius_rate(theta);
  return std::sqrt(r * r + dr * dr);
}

// One point on interface `f`, uniform in the surface parameter (or
// arclength-weighted for curves when requested).
geometry::InterfacePoint draw_interface_point(const GeometrySpec& geom,
                                              const Interface& f,
                                              rng::UniformRng& rand,
                                              bool arclength, double max_speed) {
  const bool space_time = geom.space_time();
  for (int attempt = 0; attempt < 100000; ++attempt) {
    double t = 0.0;
    if (space_time) t = rand.next_in(0.0, *geom.time_horizon);
    switch (f.kind()) {
      case Interface::Kind::PolarCurve:
      case Interface::Kind::MovingCircle: {
        Vec params(1);
        params[0] = rand.next_in(0.0, 2.0 * kPi);
        if (arclength && f.kind() == Interface::Kind::PolarCurve) {
          const double accept = polar_speed(f, params[0]) / max_speed;
          if (rand.next_unit() > accept) continue;
        }
        return f.point_at(params, t);
      }
      case Interface::Kind::Sphere: {
        if (f.dim() == 2) {
          Vec params(1);
          params[0] = rand.next_in(0.0, 2.0 * kPi);
          return f.point_at(params, t);
        }
        if (f.dim() == 3) {
          Vec params(2);
          params[0] = rand.next_in(0.0, 2.0 * kPi);
          params[1] = rand.next_in(0.0, kPi);
          if (arclength) {  // area-uniform: weight by sin(polar)
            if (rand.next_unit() > std::sin(params[1])) continue;
          }
          return f.point_at(params, t);
        }
        throw UnsupportedDimension("sphere sampling shipped for d <= 3");
      }
      case Interface::Kind::Hyperplane: {
        // free coordinates in box order, skipping the pinned axis
        Vec params(f.dim() - 1);
        int k = 0;
        for (int i = 0; i < geom.dim(); ++i) {
          if (i == f.hyperplane_axis()) continue;
          params[k++] = rand.next_in(geom.box.lo[i], geom.box.hi[i]);
        }
        return f.point_at(params, t);
      }
    }
  }
  throw InfeasiblePlan("interface sampling failed");
}

}  // namespace

CollocationSet sample_collocation(const GeometrySpec& geom,
                                  const SamplingPlan& plan) {
  if (static_cast<int>(plan.interface_weights.size()) !=
          static_cast<int>(geom.interfaces.size()) &&
      !plan.absolute) {
    throw InfeasiblePlan("plan must carry one interface weight per interface");
  }
  if (plan.initial_weight > 0.0 && !geom.space_time()) {
    throw InfeasiblePlan("initial points requested for a stationary problem");
  }
  RegionCounts counts = stratified_counts(plan);
  if (plan.absolute &&
      counts.interfaces.size() != geom.interfaces.size()) {
    throw InfeasiblePlan("absolute counts must cover every interface");
  }
  if (counts.initial > 0 && !geom.space_time()) {
    throw InfeasiblePlan("initial points requested for a stationary problem");
  }

  const int d = geom.dim();
  const bool space_time = geom.space_time();
  const int din = d + (space_time ? 1 : 0);

  CollocationSet out;
  out.spatial_dim = d;
  out.space_time = space_time;

  // Interior.
  {
    rng::UniformRng rand(rng::derive_stream(plan.seed, {rng::kSampling, 0}));
    out.interior.resize(counts.interior, din);
    out.interior_subdomain.resize(counts.interior);
    Vec point(din);
    for (int i = 0; i < counts.interior; ++i) {
      out.interior_subdomain[i] =
          draw_interior_point(geom, rand, space_time, 0.0, false, point);
      out.interior.row(i) = point.transpose();
    }
  }

  // Interfaces, label order.
  {
    const int n2 = counts.interface_total();
    out.interface_points.resize(n2, din);
    out.interface_normals.resize(n2, d);
    out.interface_label.resize(n2);
    int row = 0;
    for (std::size_t k = 0; k < geom.interfaces.size(); ++k) {
      const Interface& f = geom.interfaces[k];
      rng::UniformRng rand(
          rng::derive_stream(plan.seed, {rng::kSampling, 1, k}));
      double max_speed = 0.0;
      if (plan.arclength_interface && f.kind() == Interface::Kind::PolarCurve) {
        for (int i = 0; i < 4096; ++i) {
          max_speed = std::max(max_speed, polar_speed(f, 2.0 * kPi * i / 4096.0));
        }
        max_speed *= 1.0 + 1e-9;
      }
      for (int i = 0; i < counts.interfaces[k]; ++i, ++row) {
        geometry::InterfacePoint p = draw_interface_point(
            geom, f, rand, plan.arclength_interface, max_speed);
        out.interface_points.row(row).head(d) = p.x.transpose();
        if (space_time) out.interface_points(row, d) = p.t;
        out.interface_normals.row(row) = p.normal.transpose();
        out.interface_label[row] = static_cast<int>(k);
      }
    }
  }

  // Boundary: pick a face with probability proportional to its measure, pin
  // that coordinate, draw the rest uniformly. Points near an interface trace
  // on the boundary are rejected so their subdomain tag stays well defined.
  {
    rng::UniformRng rand(rng::derive_stream(plan.seed, {rng::kSampling, 2}));
    out.boundary.resize(counts.boundary, din);
    out.boundary_subdomain.resize(counts.boundary);
    std::vector<double> face_cdf(2 * d);
    double acc = 0.0;
    for (int face = 0; face < 2 * d; ++face) {
      const int axis = face / 2;
      double measure = 1.0;
      for (int k = 0; k < d; ++k) {
        if (k != axis) measure *= geom.box.extent(k);
      }
      acc += measure;
      face_cdf[face] = acc;
    }
    for (int i = 0; i < counts.boundary; ++i) {
      for (int attempt = 0; attempt < 100000; ++attempt) {
        const double u = rand.next_unit() * acc;
        int face = 0;
        while (face + 1 < 2 * d && u > face_cdf[face]) ++face;
        const int axis = face / 2;
        Vec x(d);
        for (int k = 0; k < d; ++k) {
          x[k] = rand.next_in(geom.box.lo[k], geom.box.hi[k]);
        }
        x[axis] = (face % 2 == 0) ? geom.box.lo[axis] : geom.box.hi[axis];
        double t = 0.0;
        if (space_time) t = rand.next_in(0.0, *geom.time_horizon);
        bool clear = true;
        int index = 0;
        for (const Interface& f : geom.interfaces) {
          const double phi = f.level(x, t);
          if (std::abs(phi) < kInteriorBand) {
            clear = false;
            break;
          }
          if (phi > 0.0) ++index;
        }
        if (!clear) continue;
        out.boundary.row(i).head(d) = x.transpose();
        if (space_time) out.boundary(i, d) = t;
        out.boundary_subdomain[i] = index;
        break;
      }
    }
  }

  // Initial slice (t = 0).
  {
    rng::UniformRng rand(rng::derive_stream(plan.seed, {rng::kSampling, 3}));
    out.initial.resize(counts.initial, din);
    out.initial_subdomain.resize(counts.initial);
    Vec point(din);
    for (int i = 0; i < counts.initial; ++i) {
      out.initial_subdomain[i] =
          draw_interior_point(geom, rand, space_time, 0.0, true, point);
      out.initial.row(i) = point.transpose();
    }
  }

  return out;
}

}  // namespace lrnn::sampling
