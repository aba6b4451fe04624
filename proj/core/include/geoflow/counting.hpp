#pragma once

// Closed-geodesic counting against the Margulis law, equidistribution
// surrogates, sphere/ball volumes by Jacobi fans, orbit growth, and the
// Margulis function with its double-integral cross-check.

#include <vector>

#include "geoflow/measure.hpp"
#include "geoflow/metric.hpp"
#include "geoflow/ode.hpp"

namespace geoflow {

struct CountingReport {
  std::vector<double> t_grid;       // spacing 0.5
  std::vector<std::size_t> counts;  // #P(t): classes with length <= t
  std::vector<double> ratios;       // count * h * t * e^{-h t}
  double h_used = 0.0;
};

CountingReport margulis_count(const GroupPreset& g, double t_max, double h_hat,
                              const ConjClassOptions& opts = {});
// same report from a precomputed class list (shared enumerations are the
// expensive part for the cocompact preset)
CountingReport margulis_count(const std::vector<ConjClass>& classes,
                              double t_max, double h_hat);

struct EquiReport {
  double t = 0.0;
  double eps = 0.25;           // class window (t - eps, t]
  std::size_t class_count = 0;
  double total_length = 0.0;   // summed lengths of sampled classes
  double box_fraction = 0.0;   // fraction of axis time spent in the box
  double reference_mass = 0.0; // normalized Liouville mass of the box
};

// box: metric ball (center, radius) inside the Dirichlet domain; axis points
// are folded into the domain before the membership test. The reference mass
// is area(ball) / area(domain), clamped to 1; balls are assumed not to
// straddle the domain boundary.
EquiReport equidistribution_probe(const GroupPreset& g, double t,
                                  const DiskPoint& box_center,
                                  double box_radius,
                                  std::size_t samples_per_unit = 40,
                                  double eps = 0.25,
                                  const ConjClassOptions& opts = {});
EquiReport equidistribution_probe(const GroupPreset& g,
                                  const std::vector<ConjClass>& classes,
                                  double t, const DiskPoint& box_center,
                                  double box_radius,
                                  std::size_t samples_per_unit = 40,
                                  double eps = 0.25);

struct VolumeReport {
  std::vector<double> t_grid;  // spacing 0.5
  std::vector<double> sphere_vols;
  std::vector<double> ball_vols;
  std::vector<double> normalized;  // h * b_t * e^{-h t}
  double h_used = 0.0;
};

// s_t(x) = integral of j_theta(t) over a fan of n_dirs geodesics from x,
// each j solving Jacobi with j(0)=0, j'(0)=1; ball volume by cumulative
// trapezoid at dt resolution
VolumeReport sphere_volume_jacobi(const MetricSpec& m, const DiskPoint& x,
                                  double t_max, std::size_t n_dirs,
                                  double h_hat, double dt = 1e-3,
                                  const GroupPreset* fold_group = nullptr);

struct OrbitGrowthReport {
  DiskPoint x, y;
  std::vector<double> t_grid;
  std::vector<std::size_t> counts;  // a_t(x,y) = #{gamma: d(x, gamma y) <= t}
  std::vector<double> normalized;   // a_t * e^{-h t}
  double h_used = 0.0;
};

OrbitGrowthReport orbit_count_asymptotic(const GroupPreset& g,
                                         const DiskPoint& x, const DiskPoint& y,
                                         const std::vector<double>& t_grid,
                                         double h_hat,
                                         const OrbitBudget& budget = {});

// Bowen-Margulis mass of the quotient unit tangent bundle in Hopf
// coordinates: sum over atom pairs of e^{s beta_p(xi, eta)} weighted by the
// arclength the (xi, eta)-geodesic spends in the Dirichlet domain. Atoms are
// thinned to max_atoms by angular stride; the pair sum is self-normalized.
double bm_total_mass(const GroupPreset& g, const AtomicBoundaryMeasure& mu_o,
                     std::size_t max_atoms = 300,
                     std::size_t arc_samples = 120);

struct MargulisFunctionEstimate {
  DiskPoint x, y;
  double c_orbit = 0.0;     // h * a_t(x,y) * e^{-h t}, trailing-grid average
  double c_integral = 0.0;  // boundary kernel integral over the BM mass
  double rel_gap = 0.0;
  double h_used = 0.0;
  double bm_mass = 0.0;
};

struct MargulisOptions {
  double h_hat = 1.0;
  double measure_radius = 8.0;
  double t = 9.0;        // orbit-count horizon
  double bm_mass = 0.0;  // > 0: reuse a precomputed bm_total_mass
  OrbitBudget budget{};
};

// c_integral = (1 / (h * ||m||)) * sum over atoms eta of mu_y of
// e^{-h b_eta(y, x)}; the companion mu_x factor integrates to one since the
// kernel does not depend on the x-direction. Throws InsufficientData when a
// measure has fewer than 20 usable atoms.
MargulisFunctionEstimate margulis_function(const GroupPreset& g,
                                           const DiskPoint& x,
                                           const DiskPoint& y,
                                           const MargulisOptions& opts = {});

}  // namespace geoflow
