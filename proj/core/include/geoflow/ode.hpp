#pragma once

// Geodesic, Jacobi, and Riccati integration; Green-bundle limits; Lyapunov
// exponents; regularity classification; Fermi-chart strip probes.

#include <functional>
#include <vector>

#include "geoflow/metric.hpp"

namespace geoflow {

// curvature along a geodesic, parameterized by arclength
using KSignal = std::function<double(double)>;

inline KSignal constant_signal(double K) {
  return [K](double) { return K; };
}

struct GeodesicTrace {
  std::vector<double> t;
  std::vector<DiskPoint> pos;
  std::vector<cplx> vel;  // chart velocity
  double dt = 0.0;
  double T = 0.0;
  double max_drift = 0.0;  // worst |e^{lambda} |v| - 1| seen
};

// fixed-step RK4 in the conformal chart; throws NumericalFailure when the
// unit-speed drift exceeds 1e-5 (halve dt and retry). fold_group, when given,
// pulls the state back to the Dirichlet domain so long horizons stay away
// from the rim; the trace then records folded positions.
GeodesicTrace geodesic_flow(const MetricSpec& m, const UnitTangent& v, double T,
                            double dt, const GroupPreset* fold_group = nullptr);

// curvature sampled along the geodesic of v, usable on [-T, T]
KSignal curvature_signal(const MetricSpec& m, const UnitTangent& v, double T,
                         double dt, const GroupPreset* fold_group = nullptr);

struct JacobiTrace {
  std::vector<double> t;
  std::vector<double> j;
  std::vector<double> jp;
  // first interior zero of j for t > 0, linear-interpolated; <0 when none
  double first_zero = -1.0;
};

JacobiTrace jacobi_solve(const KSignal& K, double j0, double j0p, double T,
                         double dt);

struct RiccatiTrace {
  std::vector<double> t;
  std::vector<double> u;  // j'/j from the linear lift; huge near Jacobi zeros
  std::size_t blowups = 0;  // sign changes of j (poles of u)
};

// integrates the linear (j, j') lift of u' = -u^2 - K, so poles are exact
RiccatiTrace riccati_solve(const KSignal& K, double u0, double T, double dt);

struct GreenReport {
  std::vector<double> S;
  std::vector<double> u_at_0;      // boundary-problem slope per horizon
  std::vector<double> increments;  // |u_{S_{i+1}} - u_{S_i}|
  double limit = 0.0;              // Aitken-extrapolated
};

enum class GreenSide { Stable, Unstable };

// Jacobi boundary problem j(0)=1, j(+-S)=0 along the geodesic of v; throws
// NumericalFailure when the Cauchy increments stop decreasing
GreenReport green_limit(const MetricSpec& m, const UnitTangent& v,
                        GreenSide side, const std::vector<double>& S_list,
                        double dt, const GroupPreset* fold_group = nullptr);

struct LyapunovEstimate {
  double chi = 0.0;           // time average of the unstable Riccati value
  double tail_variance = 0.0; // variance of windowed averages, last half
};

LyapunovEstimate lyapunov_exponent(const MetricSpec& m, const UnitTangent& v,
                                   double T, double dt,
                                   const GroupPreset* fold_group = nullptr);

struct RegularityVerdict {
  double u_plus_at_0 = 0.0;   // unstable Green limit
  double u_minus_at_0 = 0.0;  // stable Green limit
  double gap = 0.0;           // u_plus - u_minus
  double bounded_ratio = 0.0; // sup_t j^s(t) / j^s(0)
  enum class Kind { Regular, Singular, Undecided } verdict = Kind::Undecided;
  double tol = 0.0;
};

RegularityVerdict classify_regularity(const MetricSpec& m, const UnitTangent& v,
                                      const std::vector<double>& S_list,
                                      double dt, double tol,
                                      const GroupPreset* fold_group = nullptr);

struct StripSample {
  double offset = 0.0;
  double max_separation = 0.0;
  bool strip_candidate = false;  // separation stayed within 2x the offset
};

// Fermi-chart probe around the band core (constant metrics use f = cosh);
// offsets displace the base point along the normal coordinate
std::vector<StripSample> strip_probe(const MetricSpec& m,
                                     const std::vector<double>& offsets,
                                     double T, double dt = 1e-3);

}  // namespace geoflow
