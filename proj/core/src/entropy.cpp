#include "geoflow/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "geoflow/errors.hpp"

namespace geoflow {

KatokReport katok_bound_check(const GroupPreset& g, double scale, double R,
                              const OrbitBudget& budget) {
  if (!g.cocompact())
    throw std::invalid_argument("katok_bound_check: needs a cocompact preset");
  if (!(scale > 0.0) || !(R > 4.0))
    throw std::invalid_argument("katok_bound_check: bad scale or radius");

  KatokReport rep;
  rep.scale = scale;
  rep.area = g.domain_area();
  rep.euler = -static_cast<int>(std::llround(rep.area / (2.0 * M_PI)));

  ExponentEstimate est = critical_exponent(g, DiskPoint(0.0, 0.0),
                                           {R - 4.0, R - 2.0, R}, budget);
  rep.h_hat = est.delta / scale;
  rep.h_sq = rep.h_hat * rep.h_hat;
  rep.bound = -2.0 * M_PI * static_cast<double>(rep.euler) /
              (scale * scale * rep.area);
  rep.slack = rep.h_sq - rep.bound;
  return rep;
}

namespace {

UnitTangent sample_vector(Rng& r, const GroupPreset* fold_group) {
  double dir = r.uniform(0.0, 2.0 * M_PI);
  double rmax = (fold_group != nullptr && fold_group->cocompact())
                    ? fold_group->circumradius
                    : 0.5;
  for (int tries = 0; tries < 10000; ++tries) {
    // uniform in hyperbolic area: cosh(rho) - 1 uniform on the cap
    double rho = std::acosh(1.0 + r.uniform() * (std::cosh(rmax) - 1.0));
    double phi = r.uniform(0.0, 2.0 * M_PI);
    cplx z = std::polar(std::tanh(rho / 2.0), phi);
    DiskPoint p(z.real(), z.imag());
    if (fold_group == nullptr || !fold_group->cocompact() ||
        fold_group->in_domain(p))
      return {p, dir};
  }
  throw NumericalFailure("sample_vector: domain rejection did not terminate");
}

}  // namespace

EntropyIdentityReport mean_curvature_identity(const MetricSpec& m,
                                              std::size_t v_samples, double T,
                                              double h_hat, std::uint64_t seed,
                                              const GroupPreset* fold_group) {
  if (v_samples == 0 || !(T > 0.0) || !(h_hat > 0.0))
    throw std::invalid_argument("mean_curvature_identity: bad arguments");

  const double burn = 5.0;  // forward Riccati converges to the unstable
                            // solution at rate 2 sqrt(-K)
  const double dt = 1e-3;
  Rng rng(seed);

  std::array<double, 3> acc{};
  for (std::size_t i = 0; i < v_samples; ++i) {
    Rng r = rng.split(i);
    UnitTangent v = sample_vector(r, fold_group);
    KSignal K = curvature_signal(m, v, burn + T, dt, fold_group);

    double u = std::sqrt(std::max(0.0, -K(0.0)));
    auto du = [&](double t, double uu) { return -(uu * uu + K(t)); };

    std::array<double, 3> sum{};
    double prev[3] = {0, 0, 0};
    bool have_prev = false;
    std::size_t steps = static_cast<std::size_t>(std::llround((burn + T) / dt));
    for (std::size_t k = 0; k <= steps; ++k) {
      double t = k * dt;
      if (t >= burn - 1e-12) {
        double Kt = K(t);
        double f0 = u;
        double f1 = 2.0 * u * u + Kt;
        double f2 = u * u * u + 5.0 * u * (u * u + Kt);
        if (have_prev) {
          sum[0] += 0.5 * dt * (prev[0] + f0);
          sum[1] += 0.5 * dt * (prev[1] + f1);
          sum[2] += 0.5 * dt * (prev[2] + f2);
        }
        prev[0] = f0;
        prev[1] = f1;
        prev[2] = f2;
        have_prev = true;
      }
      if (k == steps) break;
      double k1 = du(t, u);
      double k2 = du(t + 0.5 * dt, u + 0.5 * dt * k1);
      double k3 = du(t + 0.5 * dt, u + 0.5 * dt * k2);
      double k4 = du(t + dt, u + dt * k3);
      u += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    double span = steps * dt - burn;
    for (int j = 0; j < 3; ++j) acc[j] += sum[j] / span;
  }

  EntropyIdentityReport rep;
  rep.h_hat = h_hat;
  rep.rhs = {h_hat, h_hat * h_hat, h_hat * h_hat * h_hat};
  for (int j = 0; j < 3; ++j) {
    rep.lhs[j] = acc[j] / static_cast<double>(v_samples);
    rep.rel_err[j] = std::fabs(rep.lhs[j] - rep.rhs[j]) / std::fabs(rep.rhs[j]);
  }
  return rep;
}

namespace {

double tv_distance(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::fabs(p[i] - q[i]);
  return 0.5 * s;
}

void normalize(std::vector<double>& h) {
  double s = 0.0;
  for (double v : h) s += v;
  if (s > 0.0)
    for (double& v : h) v /= s;
}

}  // namespace

SphericalReport spherical_to_ps(const GroupPreset& g, const DiskPoint& x,
                                const std::vector<double>& R_list,
                                std::size_t nbins, double h_hat,
                                const OrbitBudget& budget) {
  if (nbins < 16)
    throw std::invalid_argument("spherical_to_ps: need at least 16 bins");
  if (R_list.empty() || !std::is_sorted(R_list.begin(), R_list.end()))
    throw std::invalid_argument("spherical_to_ps: R_list must be increasing");

  OrbitTable table = enumerate_orbit(g, x, R_list.back(), budget);
  Mobius to_o = Mobius::to_origin(x);

  // reference histogram from the boundary measure at the same basepoint
  AtomicBoundaryMeasure mu = ps_measure(table, x, h_hat);
  std::vector<double> ps_hist(nbins, 0.0);
  auto bin_of = [&](double theta) {
    double u = theta / (2.0 * M_PI);
    u -= std::floor(u);
    std::size_t b = static_cast<std::size_t>(u * nbins);
    return std::min(b, nbins - 1);
  };
  for (const auto& a : mu.atoms) {
    if (a.dist < mu.boundary_cutoff) continue;
    ps_hist[bin_of(std::arg(to_o.apply(a.xi.unit())))] += a.weight;
  }
  normalize(ps_hist);
  std::vector<double> uniform(nbins, 1.0 / static_cast<double>(nbins));

  SphericalReport rep;
  rep.R_list = R_list;
  rep.nbins = nbins;
  rep.h_used = h_hat;
  for (double R : R_list) {
    std::vector<double> hist(nbins, 0.0);
    std::size_t n = 0;
    for (const auto& e : table.entries) {
      if (e.disp <= 0.0 || e.disp > R) continue;
      cplx z = to_o.apply(e.g.apply(x)).z();
      hist[bin_of(std::arg(z))] += 1.0;
      ++n;
    }
    rep.masses.push_back(h_hat * static_cast<double>(n) *
                         std::exp(-h_hat * R));
    normalize(hist);
    rep.tv_to_ps.push_back(tv_distance(hist, ps_hist));
    rep.tv_to_uniform.push_back(tv_distance(hist, uniform));
  }
  return rep;
}

}  // namespace geoflow
