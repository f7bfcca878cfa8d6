#pragma once

#include <optional>
#include <vector>

#include "lrnn/errors.hpp"
#include "lrnn/types.hpp"

namespace lrnn::geometry {

// |level| below this counts as "on the interface" for normal queries.
inline constexpr double kOnInterfaceTol = 1e-10;
// |level| below this makes a classification query ambiguous.
inline constexpr double kAmbiguousTol = 1e-12;

// Axis-aligned box domain.
struct DomainBox {
  Vec lo;
  Vec hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double extent(int axis) const { return hi[axis] - lo[axis]; }
  bool contains(const Vec& x, double tol = 0.0) const;
};

DomainBox make_box(const Vec& lo, const Vec& hi);
// (a,b)^d
DomainBox cube(double lo, double hi, int dim);

struct InterfacePoint {
  Vec x;           // spatial coordinates
  double t = 0.0;  // time (space-time problems only)
  Vec normal;      // unit spatial normal, oriented inner -> outer
  int label = 0;
};

// A closed interface realized as a signed level set, negative on the inner
// side. Normals are level-set gradients, so they point inner -> outer.
class Interface {
 public:
  enum class Kind { PolarCurve, Sphere, Hyperplane, MovingCircle };

  // r(theta) = base + amplitude * sin(frequency*theta)   (or cos)
  static Interface polar_curve(const Vec& center, double base, double amplitude,
                               double frequency, bool cosine, int label = 0);
  static Interface sphere(const Vec& center, double radius, int label = 0);
  static Interface hyperplane(int axis, double offset, int dim, int label = 0);
  // circle of radius radius0 + rate*t about `center` (2-D only)
  static Interface moving_circle(const Vec& center, double radius0, double rate,
                                 int label = 0);

  Kind kind() const { return kind_; }
  int label() const { return label_; }
  int dim() const { return dim_; }
  bool moving() const { return kind_ == Kind::MovingCircle; }

  double level(const Vec& x, double t = 0.0) const;
  Vec level_gradient(const Vec& x, double t = 0.0) const;  // spatial gradient

  // Unit normal at a point on the interface; throws NotOnInterface when
  // |level| > kOnInterfaceTol. For moving circles this is the spatial normal
  // of the circle at fixed t.
  Vec unit_normal(const Vec& x, double t = 0.0) const;

  // Map a surface parameter to an interface point with its normal attached.
  // Parameters: PolarCurve [theta]; Sphere d=2 [theta], d=3 [azimuth,polar];
  // Hyperplane: the d-1 free coordinates; MovingCircle [theta] at time t.
  InterfacePoint point_at(const Vec& params, double t = 0.0) const;
  int parameter_dim() const;

  double polar_radius(double theta) const;       // PolarCurve
  double polar_radius_rate(double theta) const;  // dr/dtheta
  double circle_radius(double t) const;          // MovingCircle
  int hyperplane_axis() const { return axis_; }  // Hyperplane

 private:
  Interface() = default;

  Kind kind_ = Kind::Sphere;
  int label_ = 0;
  int dim_ = 2;
  Vec center_;
  double radius_ = 0.0;  // Sphere
  double base_ = 0.0, amplitude_ = 0.0, frequency_ = 0.0;  // PolarCurve
  bool cosine_ = false;
  int axis_ = 0;  // Hyperplane
  double offset_ = 0.0;
  double rate_ = 0.0;  // MovingCircle
};

struct GeometrySpec {
  DomainBox box;
  std::vector<Interface> interfaces;  // ordered innermost -> outermost
  int n_subdomains = 0;
  std::optional<double> time_horizon;

  int dim() const { return box.dim(); }
  bool space_time() const { return time_horizon.has_value(); }
};

// Builds a GeometrySpec and validates it by dense sampling: polar radii stay
// positive, moving radii stay positive on [0,T], and interfaces are strictly
// nested (pairwise non-intersecting) inside the box.
GeometrySpec make_geometry(DomainBox box, std::vector<Interface> interfaces,
                           std::optional<double> time_horizon = {});

// 0-based subdomain index of x, innermost region first. Throws
// PointOutsideDomain / AmbiguousPoint.
int classify_point(const GeometrySpec& geom, const Vec& x, double t = 0.0);

// Same, but nudges x off any interface it sits on (within kAmbiguousTol) by
// 1e-10 along the outward level-set gradient first.
int classify_point_robust(const GeometrySpec& geom, Vec x, double t = 0.0);

}  // namespace lrnn::geometry
