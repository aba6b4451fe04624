#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "geoflow/hts.hpp"

using namespace geoflow;

namespace {

const GroupPreset& octagon() {
  static GroupPreset g = preset("genus2-octagon");
  return g;
}

std::vector<double> octagon_radii() {
  std::vector<double> rl;
  for (double r = 4.0; r <= 9.01; r += 0.5) rl.push_back(r);
  return rl;
}

}  // namespace

TEST_CASE("octagon series diverges at the exponent, converges above") {
  auto rl = octagon_radii();
  auto div = divergence_diagnostic(octagon(), rl);
  CHECK(div.delta_hat > 0.9);
  CHECK(div.delta_hat < 1.1);
  CHECK(div.s_used == doctest::Approx(div.delta_hat));
  CHECK(div.growth_fit == "linear-divergent");
  CHECK(div.fit_residual < 0.2);
  REQUIRE(div.partial_sums.size() == rl.size());
  for (std::size_t i = 1; i < div.partial_sums.size(); ++i)
    CHECK(div.partial_sums[i] > div.partial_sums[i - 1]);

  auto conv = divergence_diagnostic(octagon(), rl, 0.2);
  CHECK(conv.s_used == doctest::Approx(conv.delta_hat + 0.2));
  CHECK(conv.growth_fit == "saturating-convergent");

  CHECK_THROWS_AS(divergence_diagnostic(octagon(), {5.0, 6.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(divergence_diagnostic(octagon(), {6.0, 5.0, 7.0}),
                  std::invalid_argument);
}

TEST_CASE("elementary cyclic group diverges at its exponent") {
  GroupPreset cy = preset("cyclic");
  double ell = translation_length(cy.generators[0]);
  CHECK(ell == doctest::Approx(2.0).epsilon(1e-9));
  // radii centered between orbit shells so bucket counts stay even
  std::vector<double> rl;
  for (int k = 6; k <= 16; k += 2) rl.push_back((k + 0.5) * ell);
  auto div = divergence_diagnostic(cy, rl);
  CHECK(div.delta_hat < 0.1);  // log N(R) grows like log R
  CHECK(div.growth_fit == "linear-divergent");
  auto conv = divergence_diagnostic(cy, rl, 0.2);
  CHECK(conv.growth_fit == "saturating-convergent");
}

TEST_CASE("cocompact quotient is fully recurrent") {
  MetricSpec h2 = MetricSpec::constant(-1.0);
  auto rep = radial_recurrence_sample(octagon(), h2, 40, 200.0, 1.5);
  CHECK(rep.recurrence_fraction == 1.0);
  REQUIRE(rep.returns.size() == 40);
  for (std::size_t r : rep.returns) CHECK(r >= 10);
}

TEST_CASE("schottky quotient leaks mass through the funnels") {
  MetricSpec h2 = MetricSpec::constant(-1.0);
  GroupPreset s2 = preset("schottky2");
  auto tight = radial_recurrence_sample(s2, h2, 200, 200.0, 0.8);
  auto loose = radial_recurrence_sample(s2, h2, 200, 200.0, 1.5);
  CHECK(tight.recurrence_fraction < 1.0);
  CHECK(loose.recurrence_fraction < 1.0);
  // almost every random direction escapes, so count single returns
  auto frac_returning = [](const RecurrenceReport& r) {
    std::size_t n = 0;
    for (std::size_t k : r.returns) n += (k >= 1);
    return static_cast<double>(n) / static_cast<double>(r.returns.size());
  };
  CHECK(frac_returning(tight) < frac_returning(loose));

  // longer horizon never loses a return (same seed, same geodesics)
  auto longer = radial_recurrence_sample(s2, h2, 200, 400.0, 1.5);
  for (std::size_t i = 0; i < 200; ++i)
    CHECK(longer.returns[i] >= loose.returns[i]);
}

TEST_CASE("recurrence stepping respects curvature rescaling") {
  // K = -4 doubles the speed of the unit-speed flow through the same quotient
  MetricSpec h2 = MetricSpec::constant(-1.0);
  MetricSpec k4 = MetricSpec::constant(-4.0);
  auto slow = radial_recurrence_sample(octagon(), h2, 20, 100.0, 1.5, 7);
  auto fast = radial_recurrence_sample(octagon(), k4, 20, 50.0, 1.5, 7);
  REQUIRE(slow.returns.size() == fast.returns.size());
  for (std::size_t i = 0; i < slow.returns.size(); ++i)
    CHECK(slow.returns[i] == fast.returns[i]);
}

TEST_CASE("recurrence sampling rejects unsupported setups") {
  MetricSpec h2 = MetricSpec::constant(-1.0);
  CHECK_THROWS_AS(radial_recurrence_sample(octagon(), h2, 0, 10.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(radial_recurrence_sample(octagon(), h2, 10, 10.0, 10.0),
                  std::invalid_argument);
  MetricSpec bumpy = MetricSpec::conformal(
      octagon(), {ConformalBump{DiskPoint(0.15, 0.1), 0.05, 0.5}}, 6.0);
  CHECK_THROWS_AS(radial_recurrence_sample(octagon(), bumpy, 10, 10.0, 1.0),
                  std::invalid_argument);
  MetricSpec band = MetricSpec::flat_band(0.3);
  CHECK_THROWS_AS(radial_recurrence_sample(octagon(), band, 10, 10.0, 1.0),
                  std::invalid_argument);
}
