#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "geoflow/entropy.hpp"

using namespace geoflow;

namespace {

const GroupPreset& octagon() {
  static GroupPreset g = preset("genus2-octagon");
  return g;
}

}  // namespace

TEST_CASE("katok bound on the octagon is tight") {
  auto rep = katok_bound_check(octagon());
  CHECK(std::fabs(rep.area - 4.0 * M_PI) < 1e-4);
  CHECK(rep.euler == -2);
  CHECK(rep.bound == doctest::Approx(1.0).epsilon(1e-6));
  // equality case: constant curvature, so the slack is pure estimation error
  CHECK(std::fabs(rep.slack) < 0.05);
  CHECK(rep.h_sq == doctest::Approx(rep.h_hat * rep.h_hat));
  CHECK(rep.slack == doctest::Approx(rep.h_sq - rep.bound));
}

TEST_CASE("katok bound is covariant under metric scaling") {
  // same exponent fit, radius kept small to stay cheap
  auto base = katok_bound_check(octagon(), 1.0, 8.0);
  auto scaled = katok_bound_check(octagon(), 2.0, 8.0);
  CHECK(scaled.h_hat == doctest::Approx(base.h_hat / 2.0).epsilon(1e-12));
  CHECK(scaled.bound == doctest::Approx(base.bound / 4.0).epsilon(1e-12));
  CHECK(scaled.slack == doctest::Approx(base.slack / 4.0).epsilon(1e-9));
  CHECK((scaled.slack > 0) == (base.slack > 0));

  CHECK_THROWS_AS(katok_bound_check(preset("schottky2")),
                  std::invalid_argument);
  CHECK_THROWS_AS(katok_bound_check(octagon(), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(katok_bound_check(octagon(), 1.0, 3.0),
                  std::invalid_argument);
}

TEST_CASE("mean curvature identities in constant curvature") {
  MetricSpec h2 = MetricSpec::constant(-1.0);
  auto rep = mean_curvature_identity(h2, 4, 10.0, 1.0);
  // u sits at the fixed point 1, so all three averages are exact
  for (int j = 0; j < 3; ++j) {
    CHECK(rep.lhs[j] == doctest::Approx(rep.rhs[j]).epsilon(1e-12));
    CHECK(rep.rel_err[j] < 1e-12);
  }
  CHECK(rep.rhs[0] == 1.0);
  CHECK(rep.rhs[1] == 1.0);
  CHECK(rep.rhs[2] == 1.0);

  MetricSpec k4 = MetricSpec::constant(-4.0);
  auto r4 = mean_curvature_identity(k4, 4, 10.0, 2.0);
  CHECK(r4.lhs[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r4.lhs[1] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(r4.lhs[2] == doctest::Approx(8.0).epsilon(1e-12));

  CHECK_THROWS_AS(mean_curvature_identity(h2, 0, 10.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(mean_curvature_identity(h2, 4, -1.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("mean curvature identity holds approximately off constant") {
  MetricSpec bumpy = MetricSpec::conformal(
      octagon(), {ConformalBump{DiskPoint(0.15, 0.1), 0.05, 0.5}}, 6.0);
  auto rep = mean_curvature_identity(bumpy, 4, 15.0, 1.0, 99, &octagon());
  // descriptive: the bump is small, so the averages stay near the
  // constant-curvature entropy
  CHECK(rep.rel_err[0] < 0.1);
  CHECK(rep.rel_err[1] < 0.1);
  CHECK(rep.rel_err[2] < 0.1);
  // determinism: same seed reproduces the averages bit for bit
  auto rep2 = mean_curvature_identity(bumpy, 4, 15.0, 1.0, 99, &octagon());
  CHECK(rep2.lhs[0] == rep.lhs[0]);
  CHECK(rep2.lhs[2] == rep.lhs[2]);
}

TEST_CASE("spherical measures converge to the boundary measure") {
  auto rep = spherical_to_ps(octagon(), DiskPoint(0.0, 0.0), {7.0, 8.0, 9.0},
                             32, 1.0);
  REQUIRE(rep.masses.size() == 3);
  // total mass tracks the volume-growth constant ~1/4
  for (double m : rep.masses) {
    CHECK(m > 0.175);
    CHECK(m < 0.325);
  }
  // octagon histograms flatten toward uniform and toward the atom histogram
  CHECK(rep.tv_to_uniform.back() < 0.1);
  CHECK(rep.tv_to_ps.back() < 0.1);
  CHECK(rep.tv_to_ps.back() <= rep.tv_to_ps.front());

  CHECK_THROWS_AS(
      spherical_to_ps(octagon(), DiskPoint(0.0, 0.0), {7.0, 8.0}, 8, 1.0),
      std::invalid_argument);
  CHECK_THROWS_AS(
      spherical_to_ps(octagon(), DiskPoint(0.0, 0.0), {8.0, 7.0}, 32, 1.0),
      std::invalid_argument);
}
