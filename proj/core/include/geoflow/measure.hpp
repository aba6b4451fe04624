#pragma once

// Poincaré series, critical exponent estimation, atomic Patterson-Sullivan
// measures, shadow statistics, Hopf coordinates, and Bowen-Margulis box
// masses.

#include <utility>
#include <vector>

#include "geoflow/group.hpp"
#include "geoflow/rng.hpp"

namespace geoflow {

struct PoincareSeriesReport {
  double s = 0.0;
  double R = 0.0;
  double partial_sum = 0.0;
  std::size_t term_count = 0;
};

// partial sum over a precomputed orbit table (orbit basepoint = table origin)
PoincareSeriesReport poincare_partial(const OrbitTable& table, const DiskPoint& p,
                                      double s);
PoincareSeriesReport poincare_partial(const GroupPreset& g, const DiskPoint& p,
                                      const DiskPoint& p0, double s, double R,
                                      const OrbitBudget& budget = {});

struct ExponentEstimate {
  double delta = 0.0;        // least-squares slope of log N(R) against R
  double band = 0.0;         // max deviation of pairwise slopes from delta
  std::vector<double> radii;
  std::vector<std::size_t> counts;  // N(R) per radius
};

// R_list: at least 3 increasing radii; throws InsufficientData on empty shells
ExponentEstimate critical_exponent(const GroupPreset& g, const DiskPoint& o,
                                   const std::vector<double>& R_list,
                                   const OrbitBudget& budget = {});

struct BoundaryAtom {
  BoundaryPoint xi;      // radial projection of the orbit point from basepoint
  DiskPoint orbit_point;
  double dist = 0.0;     // d(basepoint, orbit point)
  double weight = 0.0;
};

struct AtomicBoundaryMeasure {
  std::vector<BoundaryAtom> atoms;
  DiskPoint basepoint;
  double s = 0.0;
  // atoms closer than this to the basepoint have not resolved their limiting
  // direction; arc queries skip them while the total mass keeps them.
  // ps_measure sets it to half the orbit radius.
  double boundary_cutoff = 0.0;

  double total_mass() const;
  double arc_mass(const BoundaryArc& arc) const;
  std::size_t arc_atom_count(const BoundaryArc& arc) const;
};

// atoms e^{-s d(p, gamma p0)} / sum_alpha e^{-s d(p0, alpha p0)} with p0 the
// table origin
AtomicBoundaryMeasure ps_measure(const OrbitTable& table, const DiskPoint& p,
                                 double s);
AtomicBoundaryMeasure ps_measure(const GroupPreset& g, const DiskPoint& p,
                                 double s, double R,
                                 const OrbitBudget& budget = {});

struct ShadowSample {
  double d = 0.0;       // d(p, gamma p)
  double rho = 0.0;     // mu_p(shadow) * e^{delta * d}
  std::size_t atom_count = 0;
};

struct ShadowStats {
  std::vector<ShadowSample> samples;  // counted samples only
  std::size_t flagged = 0;            // shadows with fewer than 20 atoms
  double min_rho = 0.0;
  double max_rho = 0.0;
  double spread = 0.0;                // max/min
};

struct ShadowOptions {
  double delta_hat = 1.0;
  double measure_radius = 10.0;  // orbit radius for the atomic measure
  double min_atoms = 20;
  std::uint64_t seed = 7;
  OrbitBudget budget{};
};

ShadowStats shadow_lemma_check(const GroupPreset& g, const DiskPoint& p, double r,
                               std::pair<double, double> d_range,
                               std::size_t sample_count,
                               const ShadowOptions& opts = {});

struct HopfCoord {
  BoundaryPoint minus;
  BoundaryPoint plus;
  double s = 0.0;  // b_{v^-}(pi v, p)
};

HopfCoord hopf_coords(const UnitTangent& v, const DiskPoint& p);

struct BoxMeasureReport {
  BoundaryArc P_arc;
  BoundaryArc F_arc;
  double depth = 0.0;
  double bm_mass = 0.0;
};

// depth * sum over atom pairs of e^{s * gromov(xi, eta)} w(xi) w(eta); the
// exponent s is taken from the measure itself
BoxMeasureReport bm_box_mass(const AtomicBoundaryMeasure& mu_p,
                             const BoundaryArc& P_arc, const BoundaryArc& F_arc,
                             double depth);

}  // namespace geoflow
