#include "geoflow/metric.hpp"

#include <cmath>

#include "geoflow/errors.hpp"

namespace geoflow {

namespace {

// hyperbolic Laplacian of a radial Gaussian bump eps * exp(-rho^2 / 2 sigma^2)
// at hyperbolic distance rho from the center: f'' + coth(rho) f'
double bump_laplacian(double rho, double eps, double sigma) {
  double s2 = sigma * sigma;
  double f = eps * std::exp(-0.5 * rho * rho / s2);
  double rho_coth;  // rho * coth(rho), smooth at 0
  if (rho < 1e-6)
    rho_coth = 1.0 + rho * rho / 3.0;
  else
    rho_coth = rho / std::tanh(rho);
  return f * ((rho * rho / s2 - 1.0 - rho_coth) / s2);
}

}  // namespace

MetricSpec MetricSpec::constant(double K) {
  MetricSpec m;
  m.kind = Kind::Constant;
  m.K = K;
  return m;
}

MetricSpec MetricSpec::flat_band(double flat_halfwidth) {
  if (!(flat_halfwidth > 0.0))
    throw std::invalid_argument("flat_band: halfwidth must be > 0");
  MetricSpec m;
  m.kind = Kind::FermiBand;
  m.flat_halfwidth = flat_halfwidth;
  m.singular_whitelisted = true;  // K = 0 on the collar by construction
  return m;
}

MetricSpec MetricSpec::conformal(const GroupPreset& g,
                                 std::vector<ConformalBump> bumps,
                                 double orbit_radius) {
  MetricSpec m;
  m.kind = Kind::ConformalBumps;
  m.group = g;
  m.base_bumps = std::move(bumps);
  m.orbit_radius = orbit_radius;

  OrbitTable table = enumerate_orbit(g, DiskPoint(0.0, 0.0), orbit_radius);
  for (const auto& e : table.entries) {
    Mobius mob = e.g.mobius();
    for (std::size_t b = 0; b < m.base_bumps.size(); ++b) {
      m.centers.push_back(mob.apply(m.base_bumps[b].center));
      m.center_bump.push_back(b);
    }
  }

  // reject specs whose sampled curvature is not strictly negative
  double rmax = g.cocompact() ? g.circumradius : 3.0;
  for (int i = 0; i < 24; ++i)
    for (int k = 0; k < 24; ++k) {
      double rho = rmax * (i + 0.5) / 24.0;
      double th = 2.0 * M_PI * k / 24.0;
      DiskPoint z =
          DiskPoint::from_complex(std::polar(std::tanh(0.5 * rho), th));
      if (curvature_at(m, z) >= 0.0)
        throw std::invalid_argument(
            "conformal metric: nonnegative curvature on the validation grid");
    }
  return m;
}

double MetricSpec::phi(const DiskPoint& z) const {
  if (kind != Kind::ConformalBumps) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const ConformalBump& b = base_bumps[center_bump[i]];
    double rho = hyp_dist(z, centers[i]);
    sum += b.eps * std::exp(-0.5 * rho * rho / (b.sigma * b.sigma));
  }
  return sum;
}

double MetricSpec::fermi_f(double w) const {
  double a = std::fabs(w);
  if (kind == Kind::Constant) {
    if (K >= 0.0)
      throw std::invalid_argument("fermi_f: constant metric must have K < 0");
    double s = std::sqrt(-K);
    return std::cosh(s * a);
  }
  if (a <= flat_halfwidth) return 1.0;
  return std::cosh(a - flat_halfwidth);
}

double MetricSpec::fermi_fp(double w) const {
  double a = std::fabs(w), sgn = w < 0.0 ? -1.0 : 1.0;
  if (kind == Kind::Constant) {
    double s = std::sqrt(-K);
    return sgn * s * std::sinh(s * a);
  }
  if (a <= flat_halfwidth) return 0.0;
  return sgn * std::sinh(a - flat_halfwidth);
}

double curvature_at(const MetricSpec& m, const DiskPoint& z) {
  switch (m.kind) {
    case MetricSpec::Kind::Constant:
      return m.K;
    case MetricSpec::Kind::FermiBand: {
      // the chart is Fermi (t, w); z.y is read as the normal coordinate
      double w = z.y;
      double f = m.fermi_f(w);
      if (std::fabs(w) <= m.flat_halfwidth) return 0.0;
      return -1.0 * (m.fermi_f(w) / f);  // f'' = f outside the collar
    }
    case MetricSpec::Kind::ConformalBumps: {
      double lap = 0.0;
      for (std::size_t i = 0; i < m.centers.size(); ++i) {
        const ConformalBump& b = m.base_bumps[m.center_bump[i]];
        lap += bump_laplacian(hyp_dist(z, m.centers[i]), b.eps, b.sigma);
      }
      return std::exp(-2.0 * m.phi(z)) * (-1.0 - lap);
    }
  }
  return -1.0;
}

}  // namespace geoflow
