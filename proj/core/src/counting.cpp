#include "geoflow/counting.hpp"

#include <algorithm>
#include <cmath>

#include "geoflow/errors.hpp"

namespace geoflow {

namespace {

std::vector<double> half_grid(double t_max) {
  std::vector<double> grid;
  for (double t = 0.5; t <= t_max + 1e-12; t += 0.5) grid.push_back(t);
  if (grid.empty() || grid.back() < t_max - 1e-12) grid.push_back(t_max);
  return grid;
}

// exact point at arclength t along the geodesic of v (constant curvature -1)
DiskPoint geo_point(const UnitTangent& v, double t) {
  Mobius m = Mobius::from_origin(v.base);
  double psi = v.dir - m.deriv_arg(cplx(0.0, 0.0));
  return m.apply(DiskPoint::from_complex(std::tanh(0.5 * t) *
                                         std::polar(1.0, psi)));
}

// unit tangent on the (xi, eta)-geodesic at the point closest to the origin,
// pointing toward eta
UnitTangent geodesic_midpoint_tangent(const BoundaryPoint& xi,
                                      const BoundaryPoint& eta) {
  Geodesic gd = Geodesic::through(xi.unit(), eta.unit());
  return tangent_toward(gd.closest_point_to_origin(), eta);
}

}  // namespace

CountingReport margulis_count(const GroupPreset& g, double t_max, double h_hat,
                              const ConjClassOptions& opts) {
  if (!(t_max > 0.0) || !(h_hat > 0.0))
    throw std::invalid_argument("margulis_count: need t_max > 0 and h_hat > 0");
  return margulis_count(conj_classes_up_to(g, t_max, opts), t_max, h_hat);
}

CountingReport margulis_count(const std::vector<ConjClass>& classes,
                              double t_max, double h_hat) {
  if (!(t_max > 0.0) || !(h_hat > 0.0))
    throw std::invalid_argument("margulis_count: need t_max > 0 and h_hat > 0");
  std::vector<double> lengths;
  lengths.reserve(classes.size());
  for (const auto& c : classes) lengths.push_back(c.length);
  std::sort(lengths.begin(), lengths.end());

  CountingReport rep;
  rep.h_used = h_hat;
  rep.t_grid = half_grid(t_max);
  for (double t : rep.t_grid) {
    std::size_t n = std::upper_bound(lengths.begin(), lengths.end(), t) -
                    lengths.begin();
    rep.counts.push_back(n);
    rep.ratios.push_back(static_cast<double>(n) * h_hat * t *
                         std::exp(-h_hat * t));
  }
  return rep;
}

EquiReport equidistribution_probe(const GroupPreset& g, double t,
                                  const DiskPoint& box_center,
                                  double box_radius,
                                  std::size_t samples_per_unit, double eps,
                                  const ConjClassOptions& opts) {
  return equidistribution_probe(g, conj_classes_up_to(g, t, opts), t,
                                box_center, box_radius, samples_per_unit, eps);
}

EquiReport equidistribution_probe(const GroupPreset& g,
                                  const std::vector<ConjClass>& classes,
                                  double t, const DiskPoint& box_center,
                                  double box_radius,
                                  std::size_t samples_per_unit, double eps) {
  if (!(box_radius > 0.0) || !(eps > 0.0))
    throw std::invalid_argument("equidistribution_probe: bad box or window");
  EquiReport rep;
  rep.t = t;
  rep.eps = eps;

  std::size_t hits = 0, total = 0;
  for (const auto& c : classes) {
    if (c.length <= t - eps || c.length > t) continue;
    ++rep.class_count;
    rep.total_length += c.length;
    auto [xi, eta] = c.representative.axis_endpoints();
    UnitTangent v0 = geodesic_midpoint_tangent(xi, eta);
    std::size_t n = std::max<std::size_t>(
        8, static_cast<std::size_t>(std::ceil(c.length * samples_per_unit)));
    for (std::size_t k = 0; k < n; ++k) {
      double s = c.length * (k + 0.5) / n - 0.5 * c.length;
      DiskPoint z = geo_point(v0, s);
      DiskPoint folded = fold_to_domain(g, z).first;
      if (hyp_dist(folded, box_center) <= box_radius) ++hits;
      ++total;
    }
  }
  if (rep.class_count == 0)
    throw InsufficientData("equidistribution_probe: empty class window");
  rep.box_fraction = static_cast<double>(hits) / static_cast<double>(total);
  double ball_area = 2.0 * M_PI * (std::cosh(box_radius) - 1.0);
  rep.reference_mass = std::min(1.0, ball_area / g.domain_area());
  return rep;
}

VolumeReport sphere_volume_jacobi(const MetricSpec& m, const DiskPoint& x,
                                  double t_max, std::size_t n_dirs,
                                  double h_hat, double dt,
                                  const GroupPreset* fold_group) {
  if (n_dirs < 4 || !(t_max > 0.0))
    throw std::invalid_argument("sphere_volume_jacobi: need n_dirs >= 4, t > 0");
  std::size_t steps = static_cast<std::size_t>(std::ceil(t_max / dt));
  std::vector<double> s_fine(steps + 1, 0.0);
  double wedge = 2.0 * M_PI / static_cast<double>(n_dirs);
  for (std::size_t k = 0; k < n_dirs; ++k) {
    UnitTangent v(x, wedge * (static_cast<double>(k) + 0.5));
    KSignal K = curvature_signal(m, v, t_max + dt, dt, fold_group);
    JacobiTrace j = jacobi_solve(K, 0.0, 1.0, t_max, dt);
    if (j.first_zero >= 0.0)
      throw NumericalFailure("sphere_volume_jacobi: conjugate point in fan");
    for (std::size_t i = 0; i <= steps && i < j.j.size(); ++i)
      s_fine[i] += wedge * j.j[i];
  }
  std::vector<double> b_fine(steps + 1, 0.0);
  for (std::size_t i = 1; i <= steps; ++i)
    b_fine[i] = b_fine[i - 1] + 0.5 * dt * (s_fine[i - 1] + s_fine[i]);

  VolumeReport rep;
  rep.h_used = h_hat;
  rep.t_grid = half_grid(t_max);
  for (double t : rep.t_grid) {
    std::size_t i = std::min(steps, static_cast<std::size_t>(t / dt + 0.5));
    rep.sphere_vols.push_back(s_fine[i]);
    rep.ball_vols.push_back(b_fine[i]);
    rep.normalized.push_back(h_hat * b_fine[i] * std::exp(-h_hat * t));
  }
  return rep;
}

OrbitGrowthReport orbit_count_asymptotic(const GroupPreset& g,
                                         const DiskPoint& x, const DiskPoint& y,
                                         const std::vector<double>& t_grid,
                                         double h_hat,
                                         const OrbitBudget& budget) {
  if (t_grid.empty())
    throw std::invalid_argument("orbit_count_asymptotic: empty grid");
  // the multiset {d(x, gamma y)} is unchanged when both points move by the
  // same deck element (conjugation of the group), so fold x into the domain
  // first; this keeps the enumeration frontier near the origin
  DiskPoint xf = x, yf = y;
  if (g.cocompact()) {
    auto [fx, e] = fold_to_domain(g, x);
    xf = fx;
    yf = e.apply(y);
  }
  double t_max = *std::max_element(t_grid.begin(), t_grid.end());
  OrbitTable table =
      enumerate_orbit(g, yf, t_max + hyp_dist(xf, yf) + 1e-9, budget);
  std::vector<double> dists;
  dists.reserve(table.size());
  for (const auto& e : table.entries)
    dists.push_back(hyp_dist(xf, e.g.mobius().apply(yf)));
  std::sort(dists.begin(), dists.end());

  OrbitGrowthReport rep;
  rep.x = x;
  rep.y = y;
  rep.h_used = h_hat;
  rep.t_grid = t_grid;
  for (double t : t_grid) {
    std::size_t n =
        std::upper_bound(dists.begin(), dists.end(), t) - dists.begin();
    rep.counts.push_back(n);
    rep.normalized.push_back(static_cast<double>(n) * std::exp(-h_hat * t));
  }
  return rep;
}

double bm_total_mass(const GroupPreset& g, const AtomicBoundaryMeasure& mu_o,
                     std::size_t max_atoms, std::size_t arc_samples) {
  if (!g.cocompact())
    throw std::invalid_argument("bm_total_mass: needs a cocompact preset");
  std::vector<const BoundaryAtom*> kept;
  for (const auto& a : mu_o.atoms)
    if (a.dist >= mu_o.boundary_cutoff) kept.push_back(&a);
  if (kept.size() < 20)
    throw InsufficientData("bm_total_mass: fewer than 20 usable atoms");
  std::sort(kept.begin(), kept.end(),
            [](const BoundaryAtom* a, const BoundaryAtom* b) {
              return a->xi.theta < b->xi.theta;
            });
  std::size_t stride = (kept.size() + max_atoms - 1) / max_atoms;
  std::vector<const BoundaryAtom*> thin;
  for (std::size_t i = 0; i < kept.size(); i += stride) thin.push_back(kept[i]);

  double wsum = 0.0;
  for (const auto* a : thin) wsum += a->weight;

  double reach = g.circumradius + 0.5;
  double ds = 2.0 * reach / static_cast<double>(arc_samples);
  double mass = 0.0;
  for (const auto* a : thin) {
    for (const auto* b : thin) {
      if (a == b) continue;
      // arclength of the (xi, eta)-geodesic inside the Dirichlet domain
      UnitTangent v0 = geodesic_midpoint_tangent(a->xi, b->xi);
      if (hyp_dist(DiskPoint(0.0, 0.0), v0.base) > g.circumradius) continue;
      double ell = 0.0;
      for (std::size_t k = 0; k < arc_samples; ++k) {
        double s = -reach + ds * (static_cast<double>(k) + 0.5);
        if (g.in_domain(geo_point(v0, s))) ell += ds;
      }
      if (ell == 0.0) continue;
      double beta = gromov_product(a->xi, b->xi, mu_o.basepoint);
      mass += std::exp(mu_o.s * beta) * ell * a->weight * b->weight;
    }
  }
  return mass / (wsum * wsum);
}

MargulisFunctionEstimate margulis_function(const GroupPreset& g,
                                           const DiskPoint& x,
                                           const DiskPoint& y,
                                           const MargulisOptions& opts) {
  MargulisFunctionEstimate est;
  est.x = x;
  est.y = y;
  est.h_used = opts.h_hat;

  // the estimate is invariant under moving both points by one deck element,
  // so compute at folded representatives to keep the measure table shallow
  DiskPoint xf = x, yf = y;
  if (g.cocompact()) {
    auto [fx, e] = fold_to_domain(g, x);
    xf = fx;
    yf = e.apply(y);
  }

  est.bm_mass = opts.bm_mass;
  if (!(est.bm_mass > 0.0)) {
    AtomicBoundaryMeasure mu_o = ps_measure(g, DiskPoint(0.0, 0.0), opts.h_hat,
                                            opts.measure_radius, opts.budget);
    est.bm_mass = bm_total_mass(g, mu_o);
  }

  // trailing average of h * a_t e^{-h t} over the last three half-steps
  std::vector<double> tail = {opts.t - 1.0, opts.t - 0.5, opts.t};
  OrbitGrowthReport growth =
      orbit_count_asymptotic(g, xf, yf, tail, opts.h_hat, opts.budget);
  double acc = 0.0;
  for (double v : growth.normalized) acc += opts.h_hat * v;
  est.c_orbit = acc / static_cast<double>(growth.normalized.size());

  AtomicBoundaryMeasure mu_y =
      ps_measure(g, yf, opts.h_hat, opts.measure_radius, opts.budget);
  double wsum = 0.0, ksum = 0.0;
  std::size_t used = 0;
  for (const auto& a : mu_y.atoms) {
    if (a.dist < mu_y.boundary_cutoff) continue;
    wsum += a.weight;
    ksum += a.weight * std::exp(-opts.h_hat * busemann(a.xi, yf, xf));
    ++used;
  }
  if (used < 20)
    throw InsufficientData("margulis_function: fewer than 20 usable atoms");
  est.c_integral = (ksum / wsum) / (opts.h_hat * est.bm_mass);
  est.rel_gap = std::fabs(est.c_orbit - est.c_integral) /
                std::max(est.c_orbit, est.c_integral);
  return est;
}

}  // namespace geoflow
