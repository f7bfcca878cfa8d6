#include "lrnn/geometry.hpp"

#include <cmath>
#include <sstream>

namespace lrnn::geometry {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

bool DomainBox::contains(const Vec& x, double tol) const {
  if (x.size() != lo.size()) return false;
  for (int i = 0; i < dim(); ++i) {
    if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
  }
  return true;
}

DomainBox make_box(const Vec& lo, const Vec& hi) {
  if (lo.size() != hi.size() || lo.size() < 2) {
    throw InvalidGeometry("box bounds must share a dimension >= 2");
  }
  for (int i = 0; i < lo.size(); ++i) {
    if (!(lo[i] < hi[i])) throw InvalidGeometry("box requires lo < hi per axis");
  }
  return DomainBox{lo, hi};
}

DomainBox cube(double lo, double hi, int dim) {
  return make_box(Vec::Constant(dim, lo), Vec::Constant(dim, hi));
}

Interface Interface::polar_curve(const Vec& center, double base, double amplitude,
                                 double frequency, bool cosine, int label) {
  if (center.size() != 2) throw InvalidGeometry("polar curve lives in 2-D");
  Interface f;
  f.kind_ = Kind::PolarCurve;
  f.label_ = label;
  f.dim_ = 2;
  f.center_ = center;
  f.base_ = base;
  f.amplitude_ = amplitude;
  f.frequency_ = frequency;
  f.cosine_ = cosine;
  return f;
}

Interface Interface::sphere(const Vec& center, double radius, int label) {
  if (radius <= 0.0) throw InvalidGeometry("sphere radius must be positive");
  Interface f;
  f.kind_ = Kind::Sphere;
  f.label_ = label;
  f.dim_ = static_cast<int>(center.size());
  f.center_ = center;
  f.radius_ = radius;
  return f;
}

Interface Interface::hyperplane(int axis, double offset, int dim, int label) {
  if (axis < 0 || axis >= dim) throw InvalidGeometry("hyperplane axis out of range");
  Interface f;
  f.kind_ = Kind::Hyperplane;
  f.label_ = label;
  f.dim_ = dim;
  f.axis_ = axis;
  f.offset_ = offset;
  return f;
}

Interface Interface::moving_circle(const Vec& center, double radius0, double rate,
                                   int label) {
  if (center.size() != 2) throw InvalidGeometry("moving circle lives in 2-D");
  Interface f;
  f.kind_ = Kind::MovingCircle;
  f.label_ = label;
  f.dim_ = 2;
  f.center_ = center;
  f.radius_ = radius0;
  f.rate_ = rate;
  return f;
}

double Interface::polar_radius(double theta) const {
  const double arg = frequency_ * theta;
  return base_ + amplitude_ * (cosine_ ? std::cos(arg) : std::sin(arg));
}

double Interface::polar_radius_rate(double theta) const {
  const double arg = frequency_ * theta;
  return amplitude_ * frequency_ * (cosine_ ? -std::sin(arg) : std::cos(arg));
}

double Interface::circle_radius(double t) const { return radius_ + rate_ * t; }

double Interface::level(const Vec& x, double t) const {
  switch (kind_) {
    case Kind::PolarCurve: {
      const double dx = x[0] - center_[0];
      const double dy = x[1] - center_[1];
      const double r = polar_radius(std::atan2(dy, dx));
      return dx * dx + dy * dy - r * r;
    }
    case Kind::Sphere:
      return (x - center_).squaredNorm() - radius_ * radius_;
    case Kind::Hyperplane:
      return x[axis_] - offset_;
    case Kind::MovingCircle: {
      const double r = circle_radius(t);
      const double dx = x[0] - center_[0];
      const double dy = x[1] - center_[1];
      return dx * dx + dy * dy - r * r;
    }
  }
  return 0.0;
}

Vec Interface::level_gradient(const Vec& x, double t) const {
  switch (kind_) {
    case Kind::PolarCurve: {
      const double dx = x[0] - center_[0];
      const double dy = x[1] - center_[1];
      const double rho2 = dx * dx + dy * dy;
      const double theta = std::atan2(dy, dx);
      const double r = polar_radius(theta);
      const double dr = polar_radius_rate(theta);
      Vec g(2);
      if (rho2 == 0.0) {
        g << 0.0, 0.0;  // level has a minimum at the center
        return g;
      }
      // grad(rho^2 - r(theta)^2) with grad(theta) = (-dy, dx)/rho^2
      g[0] = 2.0 * dx + 2.0 * r * dr * dy / rho2;
      g[1] = 2.0 * dy - 2.0 * r * dr * dx / rho2;
      return g;
    }
    case Kind::Sphere:
      return 2.0 * (x - center_);
    case Kind::Hyperplane: {
      Vec g = Vec::Zero(dim_);
      g[axis_] = 1.0;
      return g;
    }
    case Kind::MovingCircle: {
      (void)t;  // spatial gradient at fixed t
      Vec g(2);
      g[0] = 2.0 * (x[0] - center_[0]);
      g[1] = 2.0 * (x[1] - center_[1]);
      return g;
    }
  }
  return Vec::Zero(dim_);
}

Vec Interface::unit_normal(const Vec& x, double t) const {
  if (std::abs(level(x, t)) > kOnInterfaceTol) {
    throw NotOnInterface("query point is not on the interface");
  }
  Vec g = level_gradient(x, t);
  const double n = g.norm();
  if (n == 0.0) throw NotOnInterface("degenerate level-set gradient");
  return g / n;
}

int Interface::parameter_dim() const {
  switch (kind_) {
    case Kind::PolarCurve:
    case Kind::MovingCircle:
      return 1;
    case Kind::Sphere:
      return dim_ - 1;
    case Kind::Hyperplane:
      return dim_ - 1;
  }
  return 0;
}

InterfacePoint Interface::point_at(const Vec& params, double t) const {
  if (params.size() != parameter_dim()) {
    throw DimensionMismatch("interface parameter has the wrong size");
  }
  Vec x(dim_);
  switch (kind_) {
    case Kind::PolarCurve: {
      const double theta = params[0];
      const double r = polar_radius(theta);
      x[0] = center_[0] + r * std::cos(theta);
      x[1] = center_[1] + r * std::sin(theta);
      break;
    }
    case Kind::Sphere: {
      if (dim_ == 2) {
        const double theta = params[0];
        x[0] = center_[0] + radius_ * std::cos(theta);
        x[1] = center_[1] + radius_ * std::sin(theta);
      } else if (dim_ == 3) {
        const double azimuth = params[0];
        const double polar = params[1];
        x[0] = center_[0] + radius_ * std::sin(polar) * std::cos(azimuth);
        x[1] = center_[1] + radius_ * std::sin(polar) * std::sin(azimuth);
        x[2] = center_[2] + radius_ * std::cos(polar);
      } else {
        throw UnsupportedDimension("sphere parameterization shipped for d <= 3");
      }
      break;
    }
    case Kind::Hyperplane: {
      int k = 0;
      for (int i = 0; i < dim_; ++i) {
        x[i] = (i == axis_) ? offset_ : params[k++];
      }
      break;
    }
    case Kind::MovingCircle: {
      const double theta = params[0];
      const double r = circle_radius(t);
      x[0] = center_[0] + r * std::cos(theta);
      x[1] = center_[1] + r * std::sin(theta);
      break;
    }
  }
  InterfacePoint p;
  p.x = x;
  p.t = t;
  p.normal = unit_normal(x, t);
  p.label = label_;
  return p;
}

namespace {

void validate_interface(const Interface& f, const DomainBox& box,
                        const std::optional<double>& horizon) {
  if (f.dim() != box.dim()) {
    throw InvalidGeometry("interface dimension does not match the box");
  }
  if (f.kind() == Interface::Kind::PolarCurve) {
    for (int i = 0; i < 4096; ++i) {
      const double theta = 2.0 * kPi * i / 4096.0;
      if (f.polar_radius(theta) <= 0.0) {
        throw InvalidGeometry("polar curve radius must stay positive");
      }
    }
  }
  if (f.kind() == Interface::Kind::MovingCircle) {
    if (!horizon) throw InvalidGeometry("moving interface needs a time horizon");
    for (int i = 0; i <= 1024; ++i) {
      const double t = *horizon * i / 1024.0;
      if (f.circle_radius(t) <= 0.0) {
        throw InvalidGeometry("moving circle radius must stay positive on [0,T]");
      }
    }
  }
}

// Sample points of interface k and require every other interface to see them
// on a consistent side: inside all outer interfaces, outside all inner ones.
void validate_nesting(const std::vector<Interface>& interfaces,
                      const std::optional<double>& horizon) {
  const int n = static_cast<int>(interfaces.size());
  if (n < 2 && !horizon) return;
  std::vector<double> times{0.0};
  if (horizon) {
    times = {0.0, 0.25 * *horizon, 0.5 * *horizon, 0.75 * *horizon, *horizon};
  }
  for (int k = 0; k < n; ++k) {
    const Interface& f = interfaces[k];
    if (f.parameter_dim() != 1) continue;  // hyperplanes: single-interface setups
    for (double t : times) {
      for (int i = 0; i < 512; ++i) {
        Vec params(1);
        params[0] = 2.0 * kPi * i / 512.0;
        const Vec x = f.point_at(params, t).x;
        for (int j = 0; j < n; ++j) {
          if (j == k) continue;
          const double phi = interfaces[j].level(x, t);
          const bool ok = (j < k) ? phi > 0.0 : phi < 0.0;
          if (!ok) {
            std::ostringstream msg;
            msg << "interfaces " << j << " and " << k << " are not nested";
            throw InvalidGeometry(msg.str());
          }
        }
      }
    }
  }
}

}  // namespace

GeometrySpec make_geometry(DomainBox box, std::vector<Interface> interfaces,
                           std::optional<double> time_horizon) {
  if (interfaces.empty()) throw InvalidGeometry("need at least one interface");
  if (time_horizon && *time_horizon <= 0.0) {
    throw InvalidGeometry("time horizon must be positive");
  }
  for (const Interface& f : interfaces) validate_interface(f, box, time_horizon);
  validate_nesting(interfaces, time_horizon);
  GeometrySpec g;
  g.box = std::move(box);
  g.interfaces = std::move(interfaces);
  g.n_subdomains = static_cast<int>(g.interfaces.size()) + 1;
  g.time_horizon = time_horizon;
  return g;
}

int classify_point(const GeometrySpec& geom, const Vec& x, double t) {
  if (!geom.box.contains(x, kAmbiguousTol)) {
    throw PointOutsideDomain("point lies outside the domain box");
  }
  int index = 0;
  for (const Interface& f : geom.interfaces) {
    const double phi = f.level(x, t);
    if (std::abs(phi) < kAmbiguousTol) {
      throw AmbiguousPoint("point lies on an interface");
    }
    if (phi > 0.0) ++index;
  }
  return index;
}

int classify_point_robust(const GeometrySpec& geom, Vec x, double t) {
  for (const Interface& f : geom.interfaces) {
    if (std::abs(f.level(x, t)) < kAmbiguousTol) {
      Vec g = f.level_gradient(x, t);
      const double n = g.norm();
      if (n > 0.0) x += (1e-10 / n) * g;
    }
  }
  return classify_point(geom, x, t);
}

}  // namespace lrnn::geometry
