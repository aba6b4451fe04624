#include "geoflow/measure.hpp"

#include <algorithm>
#include <cmath>

namespace geoflow {

PoincareSeriesReport poincare_partial(const OrbitTable& table, const DiskPoint& p,
                                      double s) {
  PoincareSeriesReport rep;
  rep.s = s;
  rep.R = table.radius;
  for (const auto& e : table.entries) {
    double d = hyp_dist(p, e.g.apply(table.origin));
    rep.partial_sum += std::exp(-s * d);
    ++rep.term_count;
  }
  return rep;
}

PoincareSeriesReport poincare_partial(const GroupPreset& g, const DiskPoint& p,
                                      const DiskPoint& p0, double s, double R,
                                      const OrbitBudget& budget) {
  if (s < 0.0 || !(R > 0.0))
    throw std::invalid_argument("poincare_partial: need s >= 0 and R > 0");
  return poincare_partial(enumerate_orbit(g, p0, R, budget), p, s);
}

ExponentEstimate critical_exponent(const GroupPreset& g, const DiskPoint& o,
                                   const std::vector<double>& R_list,
                                   const OrbitBudget& budget) {
  if (R_list.size() < 3)
    throw std::invalid_argument("critical_exponent: need at least 3 radii");
  for (std::size_t i = 0; i + 1 < R_list.size(); ++i)
    if (R_list[i] >= R_list[i + 1])
      throw std::invalid_argument("critical_exponent: radii must increase");

  OrbitTable table = enumerate_orbit(g, o, R_list.back(), budget);
  ExponentEstimate est;
  est.radii = R_list;
  std::size_t idx = 0;
  for (double R : R_list) {
    while (idx < table.size() && table.entries[idx].disp <= R) ++idx;
    est.counts.push_back(idx);
  }
  for (std::size_t i = 0; i + 1 < est.counts.size(); ++i)
    if (est.counts[i + 1] == est.counts[i])
      throw InsufficientData("critical_exponent: empty orbit shell");

  // least squares of log N(R) against R
  double n = static_cast<double>(R_list.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < R_list.size(); ++i) {
    double x = R_list[i], y = std::log(static_cast<double>(est.counts[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  est.delta = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  for (std::size_t i = 0; i < R_list.size(); ++i)
    for (std::size_t j = i + 1; j < R_list.size(); ++j) {
      double slope = (std::log(static_cast<double>(est.counts[j])) -
                      std::log(static_cast<double>(est.counts[i]))) /
                     (R_list[j] - R_list[i]);
      est.band = std::max(est.band, std::fabs(slope - est.delta));
    }
  return est;
}

double AtomicBoundaryMeasure::total_mass() const {
  double m = 0.0;
  for (const auto& a : atoms) m += a.weight;
  return m;
}

double AtomicBoundaryMeasure::arc_mass(const BoundaryArc& arc) const {
  double m = 0.0;
  for (const auto& a : atoms)
    if (a.dist >= boundary_cutoff && arc.contains(a.xi)) m += a.weight;
  return m;
}

std::size_t AtomicBoundaryMeasure::arc_atom_count(const BoundaryArc& arc) const {
  std::size_t n = 0;
  for (const auto& a : atoms)
    if (a.dist >= boundary_cutoff && arc.contains(a.xi)) ++n;
  return n;
}

AtomicBoundaryMeasure ps_measure(const OrbitTable& table, const DiskPoint& p,
                                 double s) {
  AtomicBoundaryMeasure mu;
  mu.basepoint = p;
  mu.s = s;
  mu.boundary_cutoff = 0.5 * table.radius;
  double norm = 0.0;
  for (const auto& e : table.entries) norm += std::exp(-s * e.disp);
  mu.atoms.reserve(table.size());
  for (const auto& e : table.entries) {
    BoundaryAtom a;
    a.orbit_point = e.g.apply(table.origin);
    a.dist = hyp_dist(p, a.orbit_point);
    a.weight = std::exp(-s * a.dist) / norm;
    // radial pushforward: boundary endpoint of the ray from p through the atom
    cplx delta = a.orbit_point.z() - p.z();
    if (std::abs(delta) < 1e-12) {
      a.xi = BoundaryPoint(0.0);  // never queried: dist 0 is under the cutoff
    } else {
      UnitTangent dir(p, std::arg(delta));
      a.xi = geodesic_endpoints(dir).second;
    }
    mu.atoms.push_back(a);
  }
  return mu;
}

AtomicBoundaryMeasure ps_measure(const GroupPreset& g, const DiskPoint& p,
                                 double s, double R, const OrbitBudget& budget) {
  if (!(R > 0.0)) throw std::invalid_argument("ps_measure: R must be > 0");
  return ps_measure(enumerate_orbit(g, DiskPoint(0.0, 0.0), R, budget), p, s);
}

ShadowStats shadow_lemma_check(const GroupPreset& g, const DiskPoint& p, double r,
                               std::pair<double, double> d_range,
                               std::size_t sample_count,
                               const ShadowOptions& opts) {
  if (!(r > 0.0)) throw std::invalid_argument("shadow_lemma_check: r must be > 0");
  // one table serves both the sample pool and the measure when possible
  double table_radius = std::max(d_range.second, opts.measure_radius);
  OrbitTable table = enumerate_orbit(g, p, table_radius, opts.budget);
  AtomicBoundaryMeasure mu = ps_measure(table, p, opts.delta_hat);

  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < table.size(); ++i) {
    double d = table.entries[i].disp;
    if (d >= d_range.first && d <= d_range.second && d > r) eligible.push_back(i);
  }
  if (eligible.empty())
    throw InsufficientData("shadow_lemma_check: no orbit points in d_range");

  Rng rng(opts.seed);
  ShadowStats stats;
  for (std::size_t k = 0; k < sample_count; ++k) {
    const OrbitEntry& e =
        table.entries[eligible[rng.next_u64() % eligible.size()]];
    DiskPoint q = e.g.apply(p);
    BoundaryArc arc = shadow_arc(p, q, r);
    std::size_t n_atoms = mu.arc_atom_count(arc);
    if (n_atoms < static_cast<std::size_t>(opts.min_atoms)) {
      ++stats.flagged;
      continue;
    }
    ShadowSample s;
    s.d = e.disp;
    s.atom_count = n_atoms;
    s.rho = mu.arc_mass(arc) * std::exp(opts.delta_hat * e.disp);
    stats.samples.push_back(s);
  }
  if (stats.samples.empty())
    throw InsufficientData("shadow_lemma_check: all samples flagged");
  stats.min_rho = stats.max_rho = stats.samples.front().rho;
  for (const auto& s : stats.samples) {
    stats.min_rho = std::min(stats.min_rho, s.rho);
    stats.max_rho = std::max(stats.max_rho, s.rho);
  }
  stats.spread = stats.max_rho / stats.min_rho;
  return stats;
}

HopfCoord hopf_coords(const UnitTangent& v, const DiskPoint& p) {
  auto [minus, plus] = geodesic_endpoints(v);
  HopfCoord h;
  h.minus = minus;
  h.plus = plus;
  h.s = busemann(minus, v.base, p);
  return h;
}

BoxMeasureReport bm_box_mass(const AtomicBoundaryMeasure& mu_p,
                             const BoundaryArc& P_arc, const BoundaryArc& F_arc,
                             double depth) {
  if (!P_arc.disjoint_from(F_arc))
    throw std::invalid_argument("bm_box_mass: arcs must be disjoint");
  if (!(depth > 0.0)) throw std::invalid_argument("bm_box_mass: depth must be > 0");
  BoxMeasureReport rep;
  rep.P_arc = P_arc;
  rep.F_arc = F_arc;
  rep.depth = depth;
  double mass = 0.0;
  for (const auto& ax : mu_p.atoms) {
    if (ax.dist < mu_p.boundary_cutoff || !P_arc.contains(ax.xi)) continue;
    for (const auto& ay : mu_p.atoms) {
      if (ay.dist < mu_p.boundary_cutoff || !F_arc.contains(ay.xi)) continue;
      double beta = gromov_product(ax.xi, ay.xi, mu_p.basepoint);
      mass += std::exp(mu_p.s * beta) * ax.weight * ay.weight;
    }
  }
  rep.bm_mass = depth * mass;
  return rep;
}

}  // namespace geoflow
