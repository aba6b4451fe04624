#pragma once

// Poincaré disk model: points, boundary circle, isometries as SU(1,1)
// Möbius maps, distances, Busemann functions, Gromov products, shadows,
// and geodesic polygon areas.

#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

namespace geoflow {

using cplx = std::complex<double>;

inline constexpr double kInteriorTol = 1e-12;   // rejection at construction
inline constexpr double kRimClamp = 1e-14;      // |z| <= 1 - kRimClamp
inline constexpr double kAngularTol = 1e-10;

double wrap_angle(double theta);  // reduce to [0, 2*pi)
double angular_dist(double a, double b);

struct DiskPoint {
  double x = 0.0;
  double y = 0.0;

  DiskPoint() = default;
  DiskPoint(double px, double py);
  static DiskPoint from_complex(cplx z) { return DiskPoint(z.real(), z.imag()); }

  cplx z() const { return {x, y}; }
  double norm2() const { return x * x + y * y; }
  // 1 - |z|^2 evaluated as (1-|z|)(1+|z|) to keep precision at the rim
  double one_minus_norm2() const;
};

struct BoundaryPoint {
  double theta = 0.0;

  BoundaryPoint() = default;
  explicit BoundaryPoint(double t) : theta(wrap_angle(t)) {}
  cplx unit() const { return std::polar(1.0, theta); }
  bool same_as(const BoundaryPoint& o, double tol = kAngularTol) const {
    return angular_dist(theta, o.theta) < tol;
  }
};

struct UnitTangent {
  DiskPoint base;
  double dir = 0.0;  // chart angle; metric normalization happens on use

  UnitTangent() = default;
  UnitTangent(DiskPoint b, double d) : base(b), dir(wrap_angle(d)) {}
  UnitTangent reversed() const { return {base, dir + M_PI}; }
};

struct BoundaryArc {
  double center = 0.0;
  double halfwidth = 0.0;  // in (0, pi]

  BoundaryArc() = default;
  BoundaryArc(double c, double hw);
  double measure() const { return 2.0 * halfwidth; }
  bool contains(double theta) const {
    // half-open: [center - hw, center + hw)
    double d = wrap_angle(theta - (center - halfwidth));
    return d < 2.0 * halfwidth;
  }
  bool contains(const BoundaryPoint& p) const { return contains(p.theta); }
  bool disjoint_from(const BoundaryArc& o) const;
};

// Disk isometry w -> (a*w + b) / (conj(b)*w + conj(a)), |a|^2 - |b|^2 = 1.
struct Mobius {
  cplx a{1.0, 0.0};
  cplx b{0.0, 0.0};

  static Mobius identity() { return {}; }
  static Mobius to_origin(const DiskPoint& p);    // p -> 0
  static Mobius from_origin(const DiskPoint& p);  // 0 -> p
  static Mobius rotation(double phi);             // about 0 by phi

  Mobius compose(const Mobius& o) const;  // this after o
  Mobius inverse() const { return {std::conj(a), -b}; }

  cplx apply(cplx w) const;
  DiskPoint apply(const DiskPoint& p) const;
  BoundaryPoint apply(const BoundaryPoint& p) const;
  UnitTangent apply(const UnitTangent& v) const;
  // d(p, M p) without forming the image point; +inf if it rounds onto the circle
  double dist_to_image(const DiskPoint& p) const;
  // |derivative| on the boundary circle at angle theta
  double boundary_deriv(double theta) const;
  // argument of the derivative at an interior point (tangent rotation)
  double deriv_arg(cplx w) const;
};

// Geodesic as either a diameter (line through 0) or a circle orthogonal
// to the unit circle.
struct Geodesic {
  bool is_line = false;
  cplx normal{0.0, 0.0};   // line case: unit normal, line = {Re(conj(n) z) = 0}
  cplx center{0.0, 0.0};   // circle case
  double radius = 0.0;

  static Geodesic through(cplx p, cplx q);  // p, q in closed disk, distinct
  // signed side: > 0 when z is on the same side as the disk center
  double side(cplx z) const;
  // smallest t > 0 with p + t*e^{i theta} on the geodesic, if any
  std::optional<double> ray_hit(cplx p, double theta) const;
  DiskPoint closest_point_to_origin() const;
};

double hyp_dist(const DiskPoint& p, const DiskPoint& q);

// (v^-, v^+): backward and forward endpoints of the geodesic of v
std::pair<BoundaryPoint, BoundaryPoint> geodesic_endpoints(const UnitTangent& v);

// b_xi(q, p), Busemann function based at xi normalized by p
double busemann(const BoundaryPoint& xi, const DiskPoint& q, const DiskPoint& p);

// beta_p(xi, eta); throws when xi and eta coincide within kInteriorTol
double gromov_product(const BoundaryPoint& xi, const BoundaryPoint& eta,
                      const DiskPoint& p);

// Shadow pr_x B(y, r); throws when d(x, y) <= r
BoundaryArc shadow_arc(const DiskPoint& x, const DiskPoint& y, double r);

// Point at arclength t along the unit-speed ray from p toward xi
DiskPoint point_on_ray(const DiskPoint& p, const BoundaryPoint& xi, double t);

// Chart direction at p of the ray toward xi
UnitTangent tangent_toward(const DiskPoint& p, const BoundaryPoint& xi);

// Hyperbolic area by radial quadrature from an interior point. Vertices may
// lie on the boundary circle (|v| = 1); consecutive vertices distinct.
double geodesic_polygon_area(const std::vector<cplx>& vertices);

double ideal_triangle_area(const BoundaryPoint& a, const BoundaryPoint& b,
                           const BoundaryPoint& c);

}  // namespace geoflow
