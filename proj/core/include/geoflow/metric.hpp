#pragma once

// Metric specifications: constant curvature, conformal Gaussian bumps over
// the hyperbolic metric (deck-equivariant), and Fermi-chart band metrics
// with a flat collar.

#include <vector>

#include "geoflow/group.hpp"

namespace geoflow {

struct ConformalBump {
  DiskPoint center;
  double eps = 0.0;    // amplitude of the conformal exponent
  double sigma = 0.5;  // hyperbolic width
};

struct MetricSpec {
  enum class Kind { Constant, ConformalBumps, FermiBand };

  Kind kind = Kind::Constant;
  double K = -1.0;  // constant case only

  // conformal case: g = e^{2 phi} g_hyp with phi a sum of radial bumps over
  // the orbit of each listed center
  std::vector<ConformalBump> base_bumps;
  GroupPreset group;                 // deck group generating the translates
  double orbit_radius = 7.0;         // translate centers within this radius
  std::vector<DiskPoint> centers;    // all translated bump centers (built)
  std::vector<std::size_t> center_bump;  // index into base_bumps per center

  // Fermi band: metric f(w)^2 dt^2 + dw^2 around a closed geodesic, with
  // f = 1 on |w| <= flat_halfwidth and cosh(|w| - flat_halfwidth) outside
  double flat_halfwidth = 0.0;
  bool singular_whitelisted = false;  // bypasses the K < 0 validation gate

  static MetricSpec constant(double K);
  // validates K < 0 on a polar grid over the Dirichlet domain; throws
  // std::invalid_argument when the sampled curvature is not strictly negative
  static MetricSpec conformal(const GroupPreset& g,
                              std::vector<ConformalBump> bumps,
                              double orbit_radius = 7.0);
  static MetricSpec flat_band(double flat_halfwidth);

  // conformal exponent phi and its chart gradient (zero for constant)
  double phi(const DiskPoint& z) const;

  // Fermi profile f and derivative, band and constant kinds
  double fermi_f(double w) const;
  double fermi_fp(double w) const;
};

double curvature_at(const MetricSpec& m, const DiskPoint& z);

}  // namespace geoflow
