#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "geoflow/measure.hpp"
#include "geoflow/rng.hpp"

using namespace geoflow;

namespace {

const OrbitTable& octagon_table(double R) {
  static std::map<double, OrbitTable> cache;
  auto it = cache.find(R);
  if (it == cache.end())
    it = cache.emplace(R, enumerate_orbit(preset("genus2-octagon"),
                                          DiskPoint(0.0, 0.0), R))
             .first;
  return it->second;
}

}  // namespace

TEST_CASE("Poincare partial sums: identity term, monotonicity, convexity") {
  auto p = preset("genus2-octagon");
  DiskPoint o(0.0, 0.0);
  auto below = poincare_partial(p, o, o, 1.0, 2.0);
  CHECK(below.term_count == 1);
  CHECK(below.partial_sum == doctest::Approx(1.0).epsilon(1e-15));

  const auto& table = octagon_table(6.5);
  double s1 = poincare_partial(table, o, 1.0).partial_sum;
  double s15 = poincare_partial(table, o, 1.5).partial_sum;
  double s2 = poincare_partial(table, o, 2.0).partial_sum;
  CHECK(s2 < s1);
  // log-convexity in s
  CHECK(std::log(s15) <= 0.5 * (std::log(s1) + std::log(s2)) + 1e-12);
  // nondecreasing in R
  double small = poincare_partial(octagon_table(5.0), o, 1.0).partial_sum;
  CHECK(small <= s1);
}

TEST_CASE("Poincare sums at s=1 grow roughly linearly for the octagon") {
  DiskPoint o(0.0, 0.0);
  double s5 = poincare_partial(octagon_table(5.0), o, 1.0).partial_sum;
  double s65 = poincare_partial(octagon_table(6.5), o, 1.0).partial_sum;
  double s8 = poincare_partial(octagon_table(8.0), o, 1.0).partial_sum;
  double inc1 = (s65 - s5) / 1.5, inc2 = (s8 - s65) / 1.5;
  CHECK(inc1 > 0.0);
  CHECK(inc2 / inc1 > 0.35);
  CHECK(inc2 / inc1 < 3.0);
}

TEST_CASE("critical exponent estimates per preset") {
  DiskPoint o(0.0, 0.0);
  auto oct = critical_exponent(preset("genus2-octagon"), o, {5.0, 6.5, 8.0});
  CHECK(oct.delta > 0.85);
  CHECK(oct.delta < 1.15);

  auto s2 = critical_exponent(preset("schottky2"), o, {4.0, 6.0, 8.0});
  CHECK(s2.delta < 0.9);
  CHECK(s2.delta > 0.2);

  auto cyc = critical_exponent(preset("cyclic"), o, {4.1, 8.1, 12.1, 16.1});
  CHECK(cyc.delta < 0.25);

  CHECK_THROWS_AS(critical_exponent(preset("cyclic"), o, {4.0, 6.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(critical_exponent(preset("cyclic"), o, {2.1, 2.2, 2.3}),
                  InsufficientData);
}

TEST_CASE("PS measure mass normalization and bounds") {
  DiskPoint o(0.0, 0.0);
  const auto& table = octagon_table(6.5);
  auto mu0 = ps_measure(table, o, 1.2);
  CHECK(mu0.total_mass() == doctest::Approx(1.0).epsilon(1e-12));

  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    DiskPoint p = DiskPoint::from_complex(
        std::polar(rng.uniform(0.0, 0.8), rng.uniform(0.0, 2.0 * M_PI)));
    double s = rng.uniform(0.8, 2.0);
    auto mu = ps_measure(table, p, s);
    double d = hyp_dist(p, o);
    CHECK(mu.total_mass() >= std::exp(-s * d) - 1e-12);
    CHECK(mu.total_mass() <= std::exp(s * d) + 1e-12);
  }
}

TEST_CASE("PS measure equivariance: weights transport along the group") {
  auto g = preset("genus2-octagon");
  const auto& table = octagon_table(6.5);
  DiskPoint p(0.15, -0.22);
  double s = 1.1;
  GroupElement gamma = g.generators[1];
  auto mu_p = ps_measure(table, p, s);
  auto mu_gp = ps_measure(table, DiskPoint::from_complex(gamma.apply(p).z()), s);
  // weight of gamma * alpha at gamma p equals weight of alpha at p
  GroupElement gi = gamma.inverse();
  std::size_t matched = 0;
  for (std::size_t i = 0; i < table.size() && matched < 40; ++i) {
    GroupElement pre = gi.compose(table.entries[i].g);
    for (std::size_t j = 0; j < table.size(); ++j) {
      if (table.entries[j].g.same_as(pre, 1e-8)) {
        CHECK(mu_gp.atoms[i].weight ==
              doctest::Approx(mu_p.atoms[j].weight).epsilon(1e-9));
        ++matched;
        break;
      }
    }
  }
  CHECK(matched >= 30);
}

TEST_CASE("PS mass escapes to the boundary as the radius grows") {
  DiskPoint o(0.0, 0.0);
  auto frac_inner = [&](double R) {
    auto mu = ps_measure(octagon_table(R), o, 0.7);
    double inner = 0.0;
    for (const auto& a : mu.atoms)
      if (a.dist < 0.5 * R) inner += a.weight;
    return inner / mu.total_mass();
  };
  double f5 = frac_inner(5.0), f8 = frac_inner(8.0);
  CHECK(f8 < f5);
  CHECK(f8 < 0.35);
}

TEST_CASE("PS conformality against the Busemann reweighting oracle") {
  auto g = preset("genus2-octagon");
  DiskPoint o(0.0, 0.0);
  const auto& table = octagon_table(8.0);
  double delta = critical_exponent(g, o, {5.0, 6.5, 8.0}).delta;
  double s = delta + 0.05;
  DiskPoint q(0.12, 0.05);
  auto mu_p = ps_measure(table, o, s);
  auto mu_q = ps_measure(table, q, s);
  int tested = 0;
  for (int k = 0; k < 8; ++k) {
    BoundaryArc arc(k * M_PI / 4.0, M_PI / 8.0);
    if (mu_p.arc_atom_count(arc) < 80) continue;
    double ratio = mu_q.arc_mass(arc) / mu_p.arc_mass(arc);
    // weighted arc average of the conformal derivative
    double num = 0.0, den = 0.0;
    for (const auto& a : mu_p.atoms) {
      if (a.dist < mu_p.boundary_cutoff || !arc.contains(a.xi)) continue;
      num += a.weight * std::exp(-s * busemann(a.xi, q, o));
      den += a.weight;
    }
    CHECK(ratio == doctest::Approx(num / den).epsilon(0.25));
    ++tested;
  }
  CHECK(tested >= 4);
}

TEST_CASE("shadow statistics: bounded spread and monotonicity in r") {
  auto g = preset("genus2-octagon");
  DiskPoint o(0.0, 0.0);
  ShadowOptions opts;
  opts.delta_hat = 1.0;
  opts.measure_radius = 8.5;
  auto stats = shadow_lemma_check(g, o, 2.2, {3.6, 5.5}, 60, opts);
  CHECK(stats.samples.size() >= 30);
  CHECK(stats.spread < 100.0);
  // with every sample retained, widening the shadow smooths the statistic
  auto mid = shadow_lemma_check(g, o, 2.8, {3.6, 5.5}, 60, opts);
  auto wide = shadow_lemma_check(g, o, 3.5, {3.6, 5.5}, 60, opts);
  CHECK(mid.flagged == 0);
  CHECK(wide.flagged == 0);
  CHECK(wide.spread < mid.spread * 1.05);

  // nested shadows give monotone masses sample by sample
  auto mu = ps_measure(octagon_table(8.0), o, 1.0);
  const auto& table = octagon_table(6.0);
  for (std::size_t i = table.size() - 5; i < table.size(); ++i) {
    DiskPoint q = DiskPoint::from_complex(table.entries[i].g.apply(o).z());
    CHECK(mu.arc_mass(shadow_arc(o, q, 1.0)) <=
          mu.arc_mass(shadow_arc(o, q, 2.0)) + 1e-15);
  }
}

TEST_CASE("Hopf coordinates: normalization, flow additivity, reversal") {
  DiskPoint p(0.3, -0.1);
  Rng rng(12);
  for (int i = 0; i < 50; ++i) {
    UnitTangent v = tangent_toward(p, BoundaryPoint(rng.uniform(0.0, 2.0 * M_PI)));
    auto h = hopf_coords(v, p);
    CHECK(std::fabs(h.s) < 1e-10);
    auto hr = hopf_coords(v.reversed(), p);
    CHECK(hr.minus.same_as(h.plus, 1e-9));
    CHECK(hr.plus.same_as(h.minus, 1e-9));
    for (double t : {0.5, 1.0, 2.0}) {
      DiskPoint base_t = point_on_ray(v.base, h.plus, t);
      UnitTangent vt = tangent_toward(base_t, h.plus);
      auto ht = hopf_coords(vt, p);
      CHECK(ht.s == doctest::Approx(h.s + t).epsilon(1e-8));
      CHECK(ht.plus.same_as(h.plus, 1e-8));
      CHECK(ht.minus.same_as(h.minus, 1e-8));
    }
  }
}

TEST_CASE("BM box mass: trivial cases and depth linearity") {
  DiskPoint o(0.0, 0.0);
  auto mu = ps_measure(preset("schottky2"), o, 0.8, 8.0);
  // schottky2 limit set clusters near the four axis endpoints; the diagonal
  // directions carry no atoms
  BoundaryArc empty_arc(M_PI / 4.0, 0.12);
  CHECK(mu.arc_atom_count(empty_arc) == 0);
  BoundaryArc full_arc(0.0, 0.3);
  auto rep0 = bm_box_mass(mu, empty_arc, BoundaryArc(M_PI, 0.3), 1.0);
  CHECK(rep0.bm_mass == 0.0);
  auto rep1 = bm_box_mass(mu, full_arc, BoundaryArc(M_PI, 0.3), 1.0);
  auto rep2 = bm_box_mass(mu, full_arc, BoundaryArc(M_PI, 0.3), 2.0);
  CHECK(rep1.bm_mass > 0.0);
  CHECK(rep2.bm_mass == doctest::Approx(2.0 * rep1.bm_mass).epsilon(1e-15));
  CHECK_THROWS_AS(bm_box_mass(mu, full_arc, BoundaryArc(0.1, 0.3), 1.0),
                  std::invalid_argument);
}

TEST_CASE("BM boxes track Liouville masses in constant curvature") {
  DiskPoint o(0.0, 0.0);
  auto mu = ps_measure(octagon_table(8.5), o, 1.0);
  // Liouville oracle in Hopf coordinates: density 4/|xi-eta|^2 d theta d theta
  auto liouville = [](const BoundaryArc& P, const BoundaryArc& F) {
    int n = 200;
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double a = P.center - P.halfwidth + (i + 0.5) * P.measure() / n;
        double b = F.center - F.halfwidth + (j + 0.5) * F.measure() / n;
        cplx d = std::polar(1.0, a) - std::polar(1.0, b);
        sum += 4.0 / std::norm(d) * (P.measure() / n) * (F.measure() / n);
      }
    return sum;
  };
  std::vector<double> ratios;
  for (int k = 0; k < 5; ++k) {
    BoundaryArc P(0.3 + 0.35 * k, 0.35);
    BoundaryArc F(M_PI + 0.45 * k, 0.43);
    auto rep = bm_box_mass(mu, P, F, 1.0);
    REQUIRE(rep.bm_mass > 0.0);
    ratios.push_back(rep.bm_mass / liouville(P, F));
  }
  double lo = *std::min_element(ratios.begin(), ratios.end());
  double hi = *std::max_element(ratios.begin(), ratios.end());
  CHECK(hi / lo < 1.25);
}
