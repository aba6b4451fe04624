#include "geoflow/disk.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace geoflow {

double wrap_angle(double theta) {
  double t = std::fmod(theta, 2.0 * M_PI);
  if (t < 0.0) t += 2.0 * M_PI;
  if (t >= 2.0 * M_PI) t = 0.0;
  return t;
}

double angular_dist(double a, double b) {
  double d = std::fabs(wrap_angle(a) - wrap_angle(b));
  return std::min(d, 2.0 * M_PI - d);
}

DiskPoint::DiskPoint(double px, double py) : x(px), y(py) {
  double n = std::sqrt(x * x + y * y);
  if (n >= 1.0 - kInteriorTol)
    throw std::invalid_argument("DiskPoint: norm must be < 1");
  if (n > 1.0 - kRimClamp) {
    double s = (1.0 - kRimClamp) / n;
    x *= s;
    y *= s;
  }
}

double DiskPoint::one_minus_norm2() const {
  double n = std::sqrt(norm2());
  return (1.0 - n) * (1.0 + n);
}

BoundaryArc::BoundaryArc(double c, double hw) : center(wrap_angle(c)), halfwidth(hw) {
  if (!(hw > 0.0) || hw > M_PI)
    throw std::invalid_argument("BoundaryArc: halfwidth must be in (0, pi]");
}

bool BoundaryArc::disjoint_from(const BoundaryArc& o) const {
  return angular_dist(center, o.center) >= halfwidth + o.halfwidth;
}

Mobius Mobius::to_origin(const DiskPoint& p) {
  double s = std::sqrt(p.one_minus_norm2());
  return {cplx(1.0 / s, 0.0), -p.z() / s};
}

Mobius Mobius::from_origin(const DiskPoint& p) { return to_origin(p).inverse(); }

Mobius Mobius::rotation(double phi) {
  return {std::polar(1.0, 0.5 * phi), cplx(0.0, 0.0)};
}

Mobius Mobius::compose(const Mobius& o) const {
  // (this ∘ o): matrix product [[a,b],[conj b, conj a]] * [[o.a,o.b],...]
  return {a * o.a + b * std::conj(o.b), a * o.b + b * std::conj(o.a)};
}

cplx Mobius::apply(cplx w) const {
  return (a * w + b) / (std::conj(b) * w + std::conj(a));
}

DiskPoint Mobius::apply(const DiskPoint& p) const {
  cplx w = apply(p.z());
  double n = std::abs(w);
  if (n > 1.0 - kRimClamp) w *= (1.0 - kRimClamp) / n;
  return DiskPoint::from_complex(w);
}

BoundaryPoint Mobius::apply(const BoundaryPoint& p) const {
  cplx w = p.unit();
  cplx num = a * w + b;
  cplx den = std::conj(b) * w + std::conj(a);
  return BoundaryPoint(std::arg(num) - std::arg(den));
}

double Mobius::boundary_deriv(double theta) const {
  cplx den = std::conj(b) * std::polar(1.0, theta) + std::conj(a);
  return 1.0 / std::norm(den);
}

double Mobius::deriv_arg(cplx w) const {
  return -2.0 * std::arg(std::conj(b) * w + std::conj(a));
}

UnitTangent Mobius::apply(const UnitTangent& v) const {
  return {apply(v.base), v.dir + deriv_arg(v.base.z())};
}

double Mobius::dist_to_image(const DiskPoint& p) const {
  // d(p, M p) via d(z, u/v) = 2 atanh(|z v - u| / |v - conj(z) u|); avoids
  // forming u/v, which rounds onto the boundary circle at large displacements
  cplx z = p.z();
  cplx u = a * z + b;
  cplx v = std::conj(b) * z + std::conj(a);
  double r = std::abs(z * v - u) / std::abs(v - std::conj(z) * u);
  if (r >= 1.0) return std::numeric_limits<double>::infinity();
  return std::log1p(2.0 * r / (1.0 - r));
}

double hyp_dist(const DiskPoint& p, const DiskPoint& q) {
  cplx num = p.z() - q.z();
  cplx den = 1.0 - std::conj(p.z()) * q.z();
  double r = std::abs(num) / std::abs(den);
  if (r >= 1.0) r = 1.0 - 1e-17;
  // 2 atanh(r) in log form
  return std::log1p(2.0 * r / (1.0 - r));
}

Geodesic Geodesic::through(cplx p, cplx q) {
  double det = p.real() * q.imag() - p.imag() * q.real();
  double scale = std::max(std::abs(p) * std::abs(q), 1e-30);
  if (std::fabs(det) < 1e-13 * scale || std::abs(p) < 1e-14 || std::abs(q) < 1e-14) {
    // diameter through the origin
    cplx d = (std::abs(q - p) > 1e-14) ? (q - p) : p;
    d /= std::abs(d);
    Geodesic g;
    g.is_line = true;
    g.normal = cplx(-d.imag(), d.real());
    return g;
  }
  double rp = 0.5 * (std::norm(p) + 1.0);
  double rq = 0.5 * (std::norm(q) + 1.0);
  double cx = (rp * q.imag() - rq * p.imag()) / det;
  double cy = (rq * p.real() - rp * q.real()) / det;
  Geodesic g;
  g.center = {cx, cy};
  g.radius = std::sqrt(std::max(std::norm(g.center) - 1.0, 0.0));
  return g;
}

double Geodesic::side(cplx z) const {
  if (is_line) return z.real() * normal.real() + z.imag() * normal.imag();
  return std::abs(z - center) - radius;
}

std::optional<double> Geodesic::ray_hit(cplx p, double theta) const {
  cplx u = std::polar(1.0, theta);
  if (is_line) {
    double denom = u.real() * normal.real() + u.imag() * normal.imag();
    double num = p.real() * normal.real() + p.imag() * normal.imag();
    if (std::fabs(denom) < 1e-300) return std::nullopt;
    double t = -num / denom;
    if (t <= 1e-15) return std::nullopt;
    return t;
  }
  cplx d = p - center;
  double B = u.real() * d.real() + u.imag() * d.imag();
  double C = std::norm(d) - radius * radius;
  double disc = B * B - C;
  if (disc < 0.0) return std::nullopt;
  double sq = std::sqrt(disc);
  double t = (C > 0.0) ? (-B - sq) : (-B + sq);
  if (t <= 1e-15) return std::nullopt;
  return t;
}

DiskPoint Geodesic::closest_point_to_origin() const {
  if (is_line) return DiskPoint(0.0, 0.0);
  double n = std::abs(center);
  double rho = n - radius;
  cplx z = center / n * rho;
  return DiskPoint(z.real(), z.imag());
}

std::pair<BoundaryPoint, BoundaryPoint> geodesic_endpoints(const UnitTangent& v) {
  Mobius inv = Mobius::from_origin(v.base);
  BoundaryPoint plus = inv.apply(BoundaryPoint(v.dir));
  BoundaryPoint minus = inv.apply(BoundaryPoint(v.dir + M_PI));
  return {minus, plus};
}

namespace {
// log of the Poisson kernel (1-|q|^2)/|xi - q|^2
double log_poisson(const BoundaryPoint& xi, const DiskPoint& q) {
  double num = q.one_minus_norm2();
  double den = std::norm(xi.unit() - q.z());
  return std::log(num) - std::log(den);
}
}  // namespace

double busemann(const BoundaryPoint& xi, const DiskPoint& q, const DiskPoint& p) {
  return -log_poisson(xi, q) + log_poisson(xi, p);
}

double gromov_product(const BoundaryPoint& xi, const BoundaryPoint& eta,
                      const DiskPoint& p) {
  if (angular_dist(xi.theta, eta.theta) < kInteriorTol)
    throw std::invalid_argument("gromov_product: coincident boundary points");
  Geodesic g = Geodesic::through(xi.unit(), eta.unit());
  DiskPoint q = g.closest_point_to_origin();
  return -(busemann(xi, q, p) + busemann(eta, q, p));
}

BoundaryArc shadow_arc(const DiskPoint& x, const DiskPoint& y, double r) {
  double D = hyp_dist(x, y);
  if (D <= r)
    throw std::invalid_argument("shadow_arc: ball contains the viewpoint");
  Mobius T = Mobius::to_origin(x);
  cplx yp = T.apply(y.z());
  double s = std::sinh(r) / std::sinh(D);
  double hw = std::asin(std::clamp(s, 0.0, 1.0));
  Mobius inv = T.inverse();
  // transport the arc back: center maps exactly, halfwidth from the two edges
  BoundaryPoint c0(std::arg(yp));
  BoundaryPoint c = inv.apply(c0);
  BoundaryPoint e1 = inv.apply(BoundaryPoint(c0.theta + hw));
  BoundaryPoint e2 = inv.apply(BoundaryPoint(c0.theta - hw));
  double hw1 = angular_dist(c.theta, e1.theta);
  double hw2 = angular_dist(c.theta, e2.theta);
  return BoundaryArc(c.theta, 0.5 * (hw1 + hw2));
}

DiskPoint point_on_ray(const DiskPoint& p, const BoundaryPoint& xi, double t) {
  Mobius T = Mobius::to_origin(p);
  BoundaryPoint dir = T.apply(xi);
  cplx w = std::polar(std::tanh(0.5 * t), dir.theta);
  return T.inverse().apply(DiskPoint::from_complex(w));
}

UnitTangent tangent_toward(const DiskPoint& p, const BoundaryPoint& xi) {
  Mobius T = Mobius::to_origin(p);
  return {p, T.apply(xi).theta};
}

namespace {

// 16-point Gauss-Legendre nodes/weights on [-1, 1]
constexpr std::array<double, 8> kGLx = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr std::array<double, 8> kGLw = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

template <class F>
double gl16(F&& f, double a, double b) {
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < 8; ++i) {
    sum += kGLw[i] * (f(mid + half * kGLx[i]) + f(mid - half * kGLx[i]));
  }
  return sum * half;
}

template <class F>
double composite(F&& f, double a, double b, int n) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    sum += gl16(f, a + (b - a) * i / n, a + (b - a) * (i + 1) / n);
  return sum;
}

// Integrate f over [a, b] where f may have an integrable 1/sqrt singularity
// at an endpoint (sa / sb); the substitution t = u^2 makes those ends smooth.
template <class F>
double graded(F&& f, double a, double b, bool sa, bool sb) {
  double span = b - a;
  if (span <= 0.0) return 0.0;
  double m1 = a + 0.25 * span, m2 = b - 0.25 * span;
  double sum = composite(f, m1, m2, 8);
  if (sa) {
    auto g = [&](double u) { return f(a + u * u) * 2.0 * u; };
    sum += composite(g, 0.0, std::sqrt(0.25 * span), 6);
  } else {
    sum += composite(f, a, m1, 4);
  }
  if (sb) {
    auto g = [&](double u) { return f(b - u * u) * 2.0 * u; };
    sum += composite(g, 0.0, std::sqrt(0.25 * span), 6);
  } else {
    sum += composite(f, m2, b, 4);
  }
  return sum;
}

// Poincaré <-> Klein: geodesics are straight chords in the Klein model, so
// the Euclidean centroid of a convex polygon's Klein vertices is interior.
cplx poincare_to_klein(cplx z) { return 2.0 * z / (1.0 + std::norm(z)); }
cplx klein_to_poincare(cplx k) {
  double n = std::norm(k);
  if (n > 1.0) n = 1.0;
  return k / (1.0 + std::sqrt(1.0 - n));
}

}  // namespace

double geodesic_polygon_area(const std::vector<cplx>& verts_in) {
  size_t n = verts_in.size();
  if (n < 3) throw std::invalid_argument("polygon: need >= 3 vertices");
  for (size_t i = 0; i < n; ++i) {
    if (std::abs(verts_in[i] - verts_in[(i + 1) % n]) < 1e-12)
      throw std::invalid_argument("polygon: coincident consecutive vertices");
  }
  // interior reference point via the Klein chart centroid
  cplx kmean = 0.0;
  for (auto& v : verts_in) kmean += poincare_to_klein(v);
  kmean /= static_cast<double>(n);
  cplx mean = klein_to_poincare(kmean);
  if (std::abs(mean) > 1.0 - 1e-9) mean *= (1.0 - 1e-9) / std::abs(mean);
  Mobius T = Mobius::to_origin(DiskPoint::from_complex(mean));
  std::vector<cplx> verts(n);
  std::vector<bool> at_rim(n);
  for (size_t i = 0; i < n; ++i) {
    cplx w = T.apply(verts_in[i]);
    at_rim[i] = std::abs(verts_in[i]) > 1.0 - 1e-9;
    if (at_rim[i]) w /= std::abs(w);
    verts[i] = w;
  }
  // orientation: positive wedge widths must sum to 2*pi
  std::vector<double> ang(n);
  for (size_t i = 0; i < n; ++i) ang[i] = std::arg(verts[i]);
  double wsum = 0.0;
  for (size_t i = 0; i < n; ++i) wsum += wrap_angle(ang[(i + 1) % n] - ang[i]);
  bool ccw = std::fabs(wsum - 2.0 * M_PI) < 1e-9;
  if (!ccw) {
    std::reverse(verts.begin(), verts.end());
    std::reverse(at_rim.begin(), at_rim.end());
    for (size_t i = 0; i < n; ++i) ang[i] = std::arg(verts[i]);
  }
  double area = 0.0;
  for (size_t i = 0; i < n; ++i) {
    size_t j = (i + 1) % n;
    Geodesic side = Geodesic::through(verts[i], verts[j]);
    double a0 = ang[i];
    double width = wrap_angle(ang[j] - a0);
    auto f = [&](double th) {
      auto hit = side.ray_hit(0.0, a0 + th);
      double rho = hit ? std::min(*hit, 1.0 - 1e-16) : 1.0 - 1e-16;
      return 2.0 * rho * rho / ((1.0 - rho) * (1.0 + rho));
    };
    area += graded(f, 0.0, width, at_rim[i], at_rim[j]);
  }
  return area;
}

double ideal_triangle_area(const BoundaryPoint& a, const BoundaryPoint& b,
                           const BoundaryPoint& c) {
  const BoundaryPoint* pts[3] = {&a, &b, &c};
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (pts[i]->same_as(*pts[j], 1e-12))
        throw std::invalid_argument("ideal_triangle_area: coincident vertices");
  return geodesic_polygon_area({a.unit(), b.unit(), c.unit()});
}

}  // namespace geoflow
