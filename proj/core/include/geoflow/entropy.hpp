#pragma once

// Entropy identities: the Gauss-Bonnet lower bound on squared entropy, the
// mean-curvature integral formulas, and spherical-measure convergence to the
// boundary measure.

#include <array>
#include <cstdint>
#include <vector>

#include "geoflow/measure.hpp"
#include "geoflow/ode.hpp"

namespace geoflow {

struct KatokReport {
  double area = 0.0;   // Dirichlet domain quadrature, unscaled metric
  int euler = 0;       // from the area at curvature -1
  double scale = 1.0;  // metric scaled by scale^2
  double h_hat = 0.0;  // critical exponent, scaled
  double h_sq = 0.0;
  double bound = 0.0;  // -2 pi euler / (scaled area)
  double slack = 0.0;  // h_sq - bound; >= 0 up to estimation error
};

// h^2 >= -2 pi E / Vol with equality in constant curvature. The exponent is
// fitted over orbit radii {R-4, R-2, R}.
KatokReport katok_bound_check(const GroupPreset& g, double scale = 1.0,
                              double R = 10.0, const OrbitBudget& budget = {});

struct EntropyIdentityReport {
  double h_hat = 0.0;
  // ensemble averages of u, 2u^2 + K, and u^3 + 5u(u^2 + K), where u is the
  // unstable mean curvature; the derivative terms are eliminated through the
  // evolution equation of u, so the pointwise identities hold by construction
  std::array<double, 3> lhs{};
  std::array<double, 3> rhs{};  // h, h^2, h^3
  std::array<double, 3> rel_err{};
};

// time averages over horizon T after a fixed burn-in, ensemble-averaged over
// v_samples vectors drawn uniformly (area times angle); fold_group keeps long
// orbits inside the fundamental domain
EntropyIdentityReport mean_curvature_identity(
    const MetricSpec& m, std::size_t v_samples, double T, double h_hat,
    std::uint64_t seed = 20200729, const GroupPreset* fold_group = nullptr);

struct SphericalReport {
  std::vector<double> R_list;
  std::vector<double> masses;  // h N(R) e^{-h R} per radius
  std::vector<double> tv_to_ps;
  std::vector<double> tv_to_uniform;
  std::size_t nbins = 0;
  double h_used = 0.0;
};

// orbit points within R binned by direction seen from x, each with weight
// e^{-h R}; compared in total variation against the boundary-measure
// histogram and against the uniform histogram
SphericalReport spherical_to_ps(const GroupPreset& g, const DiskPoint& x,
                                const std::vector<double>& R_list,
                                std::size_t nbins, double h_hat,
                                const OrbitBudget& budget = {});

}  // namespace geoflow
