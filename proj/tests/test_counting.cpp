#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "geoflow/counting.hpp"

using namespace geoflow;

namespace {

const GroupPreset& octagon() {
  static GroupPreset g = preset("genus2-octagon");
  return g;
}

// shared across cases: the class enumeration dominates the runtime
const std::vector<ConjClass>& octagon_classes() {
  static std::vector<ConjClass> c = conj_classes_up_to(octagon(), 5.85);
  return c;
}

std::size_t grid_index(const std::vector<double>& grid, double t) {
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (std::fabs(grid[i] - t) < 1e-9) return i;
  REQUIRE(false);
  return 0;
}

}  // namespace

TEST_CASE("octagon length spectrum matches the preset geometry") {
  const auto& classes = octagon_classes();
  double systole = 2.0 * std::acosh(1.0 + std::sqrt(2.0));
  REQUIRE(!classes.empty());
  std::vector<double> lengths;
  for (const auto& c : classes) lengths.push_back(c.length);
  std::sort(lengths.begin(), lengths.end());
  CHECK(lengths.front() == doctest::Approx(systole).epsilon(1e-9));
  // multiplicities of the first three primitive lengths and the first power
  std::size_t n_sys = 0, n_2nd = 0, n_3rd = 0, n_pow = 0;
  for (double l : lengths) {
    if (std::fabs(l - systole) < 1e-6) ++n_sys;
    if (std::fabs(l - 4.8969) < 1e-3) ++n_2nd;
    if (std::fabs(l - 5.8281) < 1e-3) ++n_3rd;
    if (std::fabs(l - 2.0 * systole) < 1e-6) ++n_pow;
  }
  CHECK(n_sys == 24);
  CHECK(n_2nd == 24);
  CHECK(n_3rd == 48);
  CHECK(n_pow == 0);  // enumeration is primitive-only below 5.85

  // every representative moves the basepoint by at most its length plus the
  // domain diameter on both ends
  DiskPoint o(0.0, 0.0);
  double diam = 2.0 * octagon().circumradius;
  for (const auto& c : classes) {
    double disp = hyp_dist(o, c.representative.apply(o));
    CHECK(disp >= c.length - 1e-9);
    CHECK(disp <= c.length + 2.0 * diam + 1e-9);
  }
}

TEST_CASE("margulis count ratios on the octagon") {
  auto rep = margulis_count(octagon_classes(), 5.85, 1.0);
  CHECK(rep.h_used == 1.0);
  REQUIRE(rep.t_grid.size() == rep.counts.size());
  REQUIRE(rep.t_grid.size() == rep.ratios.size());
  // no closed geodesic below the systole
  double systole = 2.0 * std::acosh(1.0 + std::sqrt(2.0));
  for (std::size_t i = 0; i < rep.t_grid.size(); ++i) {
    if (rep.t_grid[i] < systole - 1e-9) CHECK(rep.counts[i] == 0);
  }
  // counts are cumulative and match the direct tally at the endpoint
  for (std::size_t i = 1; i < rep.counts.size(); ++i)
    CHECK(rep.counts[i] >= rep.counts[i - 1]);
  CHECK(rep.counts.back() == octagon_classes().size());
  // normalized ratio N(t) h t e^{-h t} is order one near the cutoff
  for (std::size_t i = 0; i < rep.t_grid.size(); ++i) {
    if (rep.t_grid[i] < 4.4) continue;
    CHECK(rep.ratios[i] > 0.3);
    CHECK(rep.ratios[i] < 3.0);
  }
}

TEST_CASE("margulis count exponent sensitivity is exact reweighting") {
  auto classes = conj_classes_up_to(preset("schottky2"), 10.0);
  CHECK(classes.size() == 312);
  double d_hat = 0.7568;
  auto r1 = margulis_count(classes, 10.0, d_hat);
  auto r2 = margulis_count(classes, 10.0, d_hat + 0.05);
  REQUIRE(r1.t_grid.size() == r2.t_grid.size());
  // same counts, ratios reweighted by e^{-(h2-h1) t} pointwise
  for (std::size_t i = 0; i < r1.t_grid.size(); ++i) {
    CHECK(r1.counts[i] == r2.counts[i]);
    if (r1.counts[i] == 0) continue;
    double want = r1.ratios[i] * ((d_hat + 0.05) / d_hat) *
                  std::exp(-0.05 * r1.t_grid[i]);
    CHECK(r2.ratios[i] == doctest::Approx(want).epsilon(1e-12));
  }
  // at the measured exponent the normalized ratio sits in a narrow band
  for (std::size_t i = 0; i < r1.t_grid.size(); ++i) {
    if (r1.t_grid[i] < 6.0) continue;
    CHECK(r1.ratios[i] > 1.0);
    CHECK(r1.ratios[i] < 2.0);
  }
}

TEST_CASE("closed geodesics equidistribute against the area") {
  const auto& classes = octagon_classes();
  DiskPoint o(0.0, 0.0);
  // a box covering the whole fundamental domain captures every sample
  auto whole = equidistribution_probe(octagon(), classes, 5.85, o,
                                      octagon().circumradius + 1e-6);
  CHECK(whole.box_fraction == doctest::Approx(1.0));
  CHECK(whole.reference_mass == doctest::Approx(1.0));
  CHECK(whole.class_count == 48);  // window (5.60, 5.85]
  CHECK(whole.total_length > 48 * 5.8);

  // ball carrying 5% of the area: 2 pi (cosh r - 1) = 0.05 * 4 pi
  double r = std::acosh(1.1);
  double rho = 0.85;  // ball stays inside the apothem 1.528
  DiskPoint c1(std::tanh(rho / 2.0), 0.0);
  cplx z2 = std::polar(std::tanh(rho / 2.0), M_PI / 4.0);
  DiskPoint c2(z2.real(), z2.imag());
  auto b1 = equidistribution_probe(octagon(), classes, 5.85, c1, r);
  CHECK(b1.reference_mass == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(b1.box_fraction > 0.02);
  CHECK(b1.box_fraction < 0.10);
  // the octagon symmetry rotates c1 to c2, so the fractions agree closely
  auto b2 = equidistribution_probe(octagon(), classes, 5.85, c2, r);
  CHECK(b2.box_fraction ==
        doctest::Approx(b1.box_fraction).epsilon(0.05));
  // empty window
  CHECK_THROWS_AS(equidistribution_probe(octagon(), classes, 2.0, o, 0.5),
                  InsufficientData);
}

TEST_CASE("sphere volumes from Jacobi fans reproduce 2 pi sinh t") {
  MetricSpec h2 = MetricSpec::constant(-1.0);
  DiskPoint o(0.0, 0.0);
  auto v = sphere_volume_jacobi(h2, o, 8.0, 64, 1.0);
  REQUIRE(v.t_grid.back() == doctest::Approx(8.0));
  for (std::size_t i = 0; i < v.t_grid.size(); ++i) {
    double want = 2.0 * M_PI * std::sinh(v.t_grid[i]);
    CHECK(v.sphere_vols[i] == doctest::Approx(want).epsilon(1e-5));
  }
  // h b_t e^{-h t} -> pi
  CHECK(v.normalized.back() == doctest::Approx(M_PI).epsilon(1e-3));
  // fan refinement changes nothing in the rotationally symmetric case
  auto v16 = sphere_volume_jacobi(h2, o, 8.0, 16, 1.0);
  CHECK(v16.sphere_vols.back() ==
        doctest::Approx(v.sphere_vols.back()).epsilon(1e-12));
  // ball volume differentiates back to the sphere volume: Richardson
  // stencil on the 0.5 grid
  std::size_t i4 = grid_index(v.t_grid, 4.0);
  double rich = (-v.ball_vols[i4 + 2] + 8.0 * v.ball_vols[i4 + 1] -
                 8.0 * v.ball_vols[i4 - 1] + v.ball_vols[i4 - 2]) /
                6.0;
  CHECK(rich == doctest::Approx(v.sphere_vols[i4]).epsilon(0.02));
  // small radius: s_t ~ 2 pi sinh t already at t = 0.5
  std::size_t i0 = grid_index(v.t_grid, 0.5);
  CHECK(v.sphere_vols[i0] ==
        doctest::Approx(2.0 * M_PI * std::sinh(0.5)).epsilon(1e-6));
}

TEST_CASE("sphere volumes survive folding through the octagon domain") {
  MetricSpec m = MetricSpec::conformal(octagon(), {}, 6.0);
  auto v = sphere_volume_jacobi(m, DiskPoint(0.1, 0.05), 6.0, 32, 1.0, 1e-3,
                                &octagon());
  double want = 2.0 * M_PI * std::sinh(6.0);
  CHECK(v.sphere_vols.back() == doctest::Approx(want).epsilon(1e-3));
  CHECK(v.normalized.back() == doctest::Approx(M_PI).epsilon(0.01));
}

TEST_CASE("orbit counting normalizes to a bounded band") {
  DiskPoint o(0.0, 0.0);
  auto rep = orbit_count_asymptotic(octagon(), o, o, {7.0, 7.5, 8.0, 8.5, 9.0},
                                    1.0);
  for (double v : rep.normalized) {
    CHECK(v > 0.15);
    CHECK(v < 0.35);
  }
  // below the first orbit point only the identity counts
  auto small = orbit_count_asymptotic(octagon(), o, DiskPoint(0.2, 0.0),
                                      {0.3, 0.5}, 1.0);  // d = 2 atanh 0.2
  CHECK(small.counts[0] == 0);
  CHECK(small.counts[1] == 1);
  // a_t(x, y) = a_t(y, x)
  DiskPoint x(0.1, 0.05), y(-0.12, 0.2);
  auto fwd = orbit_count_asymptotic(octagon(), x, y, {5.0, 6.0}, 1.0);
  auto bwd = orbit_count_asymptotic(octagon(), y, x, {5.0, 6.0}, 1.0);
  CHECK(fwd.counts[0] == bwd.counts[0]);
  CHECK(fwd.counts[1] == bwd.counts[1]);
  CHECK_THROWS_AS(orbit_count_asymptotic(octagon(), x, y, {}, 1.0),
                  std::invalid_argument);
}

TEST_CASE("margulis function on the octagon") {
  DiskPoint o(0.0, 0.0);
  AtomicBoundaryMeasure mu = ps_measure(octagon(), o, 1.0, 8.5);
  double mhat = bm_total_mass(octagon(), mu);
  // flow-invariant mass of the product measure; geometric value 4
  CHECK(mhat == doctest::Approx(4.0).epsilon(0.05));

  MargulisOptions opts;
  opts.h_hat = 1.0;
  opts.measure_radius = 8.5;
  opts.t = 9.0;
  opts.bm_mass = mhat;
  auto est = margulis_function(octagon(), o, o, opts);
  // c(o, o) = 1/4 for the octagon at entropy 1
  CHECK(est.c_orbit == doctest::Approx(0.25).epsilon(0.1));
  CHECK(est.c_integral == doctest::Approx(0.25).epsilon(0.1));
  CHECK(est.rel_gap < 0.05);
  CHECK(est.bm_mass == mhat);
}

TEST_CASE("margulis function is deck invariant and continuous") {
  DiskPoint x(0.1, 0.05), y(-0.08, 0.12);
  MargulisOptions opts;
  opts.h_hat = 1.0;
  opts.measure_radius = 7.0;
  opts.t = 6.0;
  opts.bm_mass = 4.0;  // shared normalization, cancels in the comparison
  auto base = margulis_function(octagon(), x, y, opts);

  Mobius g = octagon().generators[1].mobius();
  DiskPoint gx = g.apply(x), gy = g.apply(y);
  auto moved = margulis_function(octagon(), gx, gy, opts);
  CHECK(moved.c_orbit == doctest::Approx(base.c_orbit).epsilon(1e-9));
  CHECK(moved.c_integral == doctest::Approx(base.c_integral).epsilon(1e-9));

  // moving one endpoint a tenth of a unit moves the kernel integral a little
  DiskPoint x2(0.1498, 0.05);
  auto near = margulis_function(octagon(), x2, y, opts);
  CHECK(std::fabs(near.c_integral - base.c_integral) / base.c_integral < 0.10);
}
