#pragma once

// Divergence-type classification of the orbital series at the critical
// exponent and radial-recurrence sampling as a conservativity proxy.

#include <cstdint>
#include <string>
#include <vector>

#include "geoflow/measure.hpp"
#include "geoflow/metric.hpp"

namespace geoflow {

struct HTSReport {
  double delta_hat = 0.0;
  double s_used = 0.0;
  std::vector<double> R_list;
  std::vector<double> partial_sums;
  // "linear-divergent": per-unit increments stay level and a linear fit holds;
  // "saturating-convergent": increments collapse; otherwise "inconclusive"
  std::string growth_fit;
  double fit_residual = 0.0;  // worst linear-fit deviation over the sum range
};

// partial sums of e^{-s d(o, gamma o)} against R at s = delta_hat + s_offset;
// the exponent is fitted on the same radii
HTSReport divergence_diagnostic(const GroupPreset& g,
                                const std::vector<double>& R_list,
                                double s_offset = 0.0,
                                const OrbitBudget& budget = {});

struct RecurrenceReport {
  std::size_t n_geodesics = 0;
  double T = 0.0;
  double core_radius = 0.0;
  std::vector<std::size_t> returns;  // core-ball entries per sample
  double recurrence_fraction = 0.0;  // fraction with >= 10 returns
};

// folds sampled geodesics through the quotient and counts re-entries into the
// core ball about the origin; free-group samples that leave the convex core
// by a wide margin are treated as escaped for good
RecurrenceReport radial_recurrence_sample(const GroupPreset& g,
                                          const MetricSpec& m,
                                          std::size_t n_geodesics, double T,
                                          double core_radius,
                                          std::uint64_t seed = 424242);

}  // namespace geoflow
