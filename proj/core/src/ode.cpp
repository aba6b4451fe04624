#include "geoflow/ode.hpp"

#include <algorithm>
#include <cmath>

#include "geoflow/errors.hpp"

namespace geoflow {

namespace {

struct ChartState {
  double x, y, vx, vy;
};

// conformal exponent of the metric against the flat chart metric and its
// gradient; metric = e^{2 lambda} (dx^2 + dy^2)
double chart_lambda(const MetricSpec& m, double x, double y) {
  double base = 0.0;
  if (m.kind == MetricSpec::Kind::Constant) {
    if (m.K >= 0.0)
      throw std::invalid_argument("geodesic_flow: constant case needs K < 0");
    double r2 = x * x + y * y;
    return std::log(2.0 / (1.0 - r2)) - 0.5 * std::log(-m.K);
  }
  double r2 = x * x + y * y;
  base = std::log(2.0 / (1.0 - r2));
  return base + m.phi(DiskPoint(x, y));
}

void chart_lambda_grad(const MetricSpec& m, double x, double y, double& gx,
                       double& gy) {
  if (m.kind == MetricSpec::Kind::Constant) {
    double r2 = x * x + y * y;
    gx = 2.0 * x / (1.0 - r2);
    gy = 2.0 * y / (1.0 - r2);
    return;
  }
  double r2 = x * x + y * y;
  gx = 2.0 * x / (1.0 - r2);
  gy = 2.0 * y / (1.0 - r2);
  // bump-sum gradient by central differences; the closed form buys nothing
  // at this tolerance
  const double h = 1e-6;
  gx += (m.phi(DiskPoint(x + h, y)) - m.phi(DiskPoint(x - h, y))) / (2.0 * h);
  gy += (m.phi(DiskPoint(x, y + h)) - m.phi(DiskPoint(x, y - h))) / (2.0 * h);
}

ChartState geodesic_rhs(const MetricSpec& m, const ChartState& s) {
  double gx, gy;
  chart_lambda_grad(m, s.x, s.y, gx, gy);
  ChartState d;
  d.x = s.vx;
  d.y = s.vy;
  d.vx = -gx * (s.vx * s.vx - s.vy * s.vy) - 2.0 * gy * s.vx * s.vy;
  d.vy = -gy * (s.vy * s.vy - s.vx * s.vx) - 2.0 * gx * s.vx * s.vy;
  return d;
}

ChartState rk4_step(const MetricSpec& m, const ChartState& s, double dt) {
  auto add = [](const ChartState& a, const ChartState& b, double c) {
    return ChartState{a.x + c * b.x, a.y + c * b.y, a.vx + c * b.vx,
                      a.vy + c * b.vy};
  };
  ChartState k1 = geodesic_rhs(m, s);
  ChartState k2 = geodesic_rhs(m, add(s, k1, 0.5 * dt));
  ChartState k3 = geodesic_rhs(m, add(s, k2, 0.5 * dt));
  ChartState k4 = geodesic_rhs(m, add(s, k3, dt));
  ChartState out = s;
  out.x += dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
  out.y += dt / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
  out.vx += dt / 6.0 * (k1.vx + 2.0 * k2.vx + 2.0 * k3.vx + k4.vx);
  out.vy += dt / 6.0 * (k1.vy + 2.0 * k2.vy + 2.0 * k3.vy + k4.vy);
  return out;
}

void fold_state(const GroupPreset& g, ChartState& s) {
  auto [zf, gamma] = fold_to_domain(g, DiskPoint(s.x, s.y));
  Mobius mob = gamma.mobius();
  // chart velocity transforms by the complex derivative of the Mobius map
  cplx z(s.x, s.y);
  cplx denom = std::conj(mob.b) * z + std::conj(mob.a);
  cplx dv = cplx(s.vx, s.vy) / (denom * denom);
  s.x = zf.x;
  s.y = zf.y;
  s.vx = dv.real();
  s.vy = dv.imag();
}

}  // namespace

GeodesicTrace geodesic_flow(const MetricSpec& m, const UnitTangent& v, double T,
                            double dt, const GroupPreset* fold_group) {
  if (!(T > 0.0) || !(dt > 0.0) || dt > 1e-2)
    throw std::invalid_argument("geodesic_flow: need T > 0 and dt <= 1e-2");
  double fold_r2 = 1.0;
  if (fold_group) {
    double rr = fold_group->cocompact()
                    ? std::tanh(0.5 * (fold_group->circumradius + 0.5))
                    : 0.95;
    fold_r2 = rr * rr;
  }
  ChartState s;
  s.x = v.base.x;
  s.y = v.base.y;
  double lam0 = chart_lambda(m, s.x, s.y);
  s.vx = std::exp(-lam0) * std::cos(v.dir);
  s.vy = std::exp(-lam0) * std::sin(v.dir);

  std::size_t n = static_cast<std::size_t>(std::ceil(T / dt));
  GeodesicTrace tr;
  tr.dt = dt;
  tr.T = T;
  tr.t.reserve(n + 1);
  tr.pos.reserve(n + 1);
  tr.vel.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    tr.t.push_back(i * dt);
    tr.pos.push_back(DiskPoint(s.x, s.y));
    tr.vel.push_back(cplx(s.vx, s.vy));
    double speed = std::exp(chart_lambda(m, s.x, s.y)) *
                   std::hypot(s.vx, s.vy);
    tr.max_drift = std::max(tr.max_drift, std::fabs(speed - 1.0));
    if (tr.max_drift > 1e-5)
      throw NumericalFailure("geodesic_flow: unit-speed drift exceeded 1e-5");
    if (i == n) break;
    s = rk4_step(m, s, dt);
    if (fold_group && s.x * s.x + s.y * s.y > fold_r2)
      fold_state(*fold_group, s);
  }
  return tr;
}

KSignal curvature_signal(const MetricSpec& m, const UnitTangent& v, double T,
                         double dt, const GroupPreset* fold_group) {
  if (m.kind == MetricSpec::Kind::Constant) return constant_signal(m.K);
  if (m.kind == MetricSpec::Kind::FermiBand)
    return constant_signal(0.0);  // probes run along the band core
  GeodesicTrace fwd = geodesic_flow(m, v, T, dt, fold_group);
  GeodesicTrace bwd = geodesic_flow(m, v.reversed(), T, dt, fold_group);
  std::vector<double> samples(fwd.t.size() + bwd.t.size() - 1);
  std::size_t nb = bwd.t.size() - 1;
  for (std::size_t i = 0; i <= nb; ++i)
    samples[nb - i] = curvature_at(m, bwd.pos[i]);
  for (std::size_t i = 0; i < fwd.t.size(); ++i)
    samples[nb + i] = curvature_at(m, fwd.pos[i]);
  double t0 = -static_cast<double>(nb) * dt;
  return [samples = std::move(samples), t0, dt](double t) {
    double u = (t - t0) / dt;
    if (u <= 0.0) return samples.front();
    if (u >= static_cast<double>(samples.size() - 1)) return samples.back();
    std::size_t i = static_cast<std::size_t>(u);
    double f = u - static_cast<double>(i);
    return samples[i] * (1.0 - f) + samples[i + 1] * f;
  };
}

namespace {

// RK4 for the linear system (j, j')' = (j', -K j)
void jacobi_rk4(const KSignal& K, double t, double dt, double& j, double& jp) {
  auto rhs = [&](double tt, double jj, double jjp, double& dj, double& djp) {
    dj = jjp;
    djp = -K(tt) * jj;
  };
  double k1j, k1p, k2j, k2p, k3j, k3p, k4j, k4p;
  rhs(t, j, jp, k1j, k1p);
  rhs(t + 0.5 * dt, j + 0.5 * dt * k1j, jp + 0.5 * dt * k1p, k2j, k2p);
  rhs(t + 0.5 * dt, j + 0.5 * dt * k2j, jp + 0.5 * dt * k2p, k3j, k3p);
  rhs(t + dt, j + dt * k3j, jp + dt * k3p, k4j, k4p);
  j += dt / 6.0 * (k1j + 2.0 * k2j + 2.0 * k3j + k4j);
  jp += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
}

}  // namespace

JacobiTrace jacobi_solve(const KSignal& K, double j0, double j0p, double T,
                         double dt) {
  if (!(T > 0.0) || !(dt > 0.0))
    throw std::invalid_argument("jacobi_solve: need T > 0 and dt > 0");
  std::size_t n = static_cast<std::size_t>(std::ceil(T / dt));
  JacobiTrace tr;
  tr.t.reserve(n + 1);
  tr.j.reserve(n + 1);
  tr.jp.reserve(n + 1);
  double j = j0, jp = j0p;
  for (std::size_t i = 0; i <= n; ++i) {
    double t = i * dt;
    tr.t.push_back(t);
    tr.j.push_back(j);
    tr.jp.push_back(jp);
    if (tr.first_zero < 0.0 && i > 0) {
      double a = tr.j[i - 1], b = tr.j[i];
      if ((a > 0.0 && b <= 0.0) || (a < 0.0 && b >= 0.0))
        tr.first_zero = (t - dt) + dt * a / (a - b);
    }
    if (i == n) break;
    jacobi_rk4(K, t, dt, j, jp);
  }
  return tr;
}

RiccatiTrace riccati_solve(const KSignal& K, double u0, double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0))
    throw std::invalid_argument("riccati_solve: need T > 0 and dt > 0");
  std::size_t n = static_cast<std::size_t>(std::ceil(T / dt));
  RiccatiTrace tr;
  tr.t.reserve(n + 1);
  tr.u.reserve(n + 1);
  double j = 1.0, jp = u0;
  int last_sign = 1;
  for (std::size_t i = 0; i <= n; ++i) {
    double t = i * dt;
    tr.t.push_back(t);
    tr.u.push_back(jp / j);
    int sign = j >= 0.0 ? 1 : -1;
    if (i > 0 && sign != last_sign) ++tr.blowups;
    last_sign = sign;
    if (i == n) break;
    jacobi_rk4(K, t, dt, j, jp);
    // renormalize the linear lift; u = j'/j is scale-invariant
    double scale = std::max(std::fabs(j), std::fabs(jp));
    if (scale > 1e100) {
      j /= scale;
      jp /= scale;
    }
  }
  return tr;
}

GreenReport green_limit(const MetricSpec& m, const UnitTangent& v,
                        GreenSide side, const std::vector<double>& S_list,
                        double dt, const GroupPreset* fold_group) {
  if (S_list.size() < 3)
    throw std::invalid_argument("green_limit: need at least 3 horizons");
  for (std::size_t i = 0; i + 1 < S_list.size(); ++i)
    if (S_list[i] >= S_list[i + 1])
      throw std::invalid_argument("green_limit: horizons must increase");

  double S_max = S_list.back();
  KSignal K = curvature_signal(m, v, S_max + dt, dt, fold_group);
  // stable side solves on [0, S]; unstable solves on [-S, 0], equivalent to
  // the mirrored signal with the sign of the slope flipped
  bool mirrored = (side == GreenSide::Unstable);
  KSignal Kd = mirrored ? KSignal([K](double t) { return K(-t); }) : K;

  GreenReport rep;
  rep.S = S_list;
  double jA = 1.0, jAp = 0.0, jB = 0.0, jBp = 1.0;
  double t = 0.0;
  std::size_t next = 0;
  std::size_t n = static_cast<std::size_t>(std::ceil(S_max / dt));
  for (std::size_t i = 0; i <= n; ++i) {
    while (next < S_list.size() && t >= S_list[next] - 0.5 * dt) {
      double u = -jA / jB;  // slope at 0 of j = jA + c jB with j(S) = 0
      rep.u_at_0.push_back(mirrored ? -u : u);
      ++next;
    }
    if (i == n) break;
    jacobi_rk4(Kd, t, dt, jA, jAp);
    double t2 = t;
    jacobi_rk4(Kd, t2, dt, jB, jBp);
    t += dt;
  }
  while (next < S_list.size()) {
    double u = -jA / jB;
    rep.u_at_0.push_back(mirrored ? -u : u);
    ++next;
  }

  for (std::size_t i = 0; i + 1 < rep.u_at_0.size(); ++i)
    rep.increments.push_back(std::fabs(rep.u_at_0[i + 1] - rep.u_at_0[i]));
  for (std::size_t i = 0; i + 1 < rep.increments.size(); ++i)
    if (rep.increments[i + 1] > rep.increments[i] && rep.increments[i] > 1e-14)
      throw NumericalFailure("green_limit: Cauchy increments not decreasing");

  // Aitken extrapolation from the last three horizons
  std::size_t k = rep.u_at_0.size();
  double d1 = rep.u_at_0[k - 2] - rep.u_at_0[k - 3];
  double d2 = rep.u_at_0[k - 1] - rep.u_at_0[k - 2];
  if (std::fabs(d1) < 1e-14) {
    rep.limit = rep.u_at_0[k - 1];
  } else {
    double q = d2 / d1;
    if (std::fabs(q) > 0.99)
      throw NumericalFailure("green_limit: no geometric convergence");
    rep.limit = rep.u_at_0[k - 1] + d2 * q / (1.0 - q);
  }
  return rep;
}

LyapunovEstimate lyapunov_exponent(const MetricSpec& m, const UnitTangent& v,
                                   double T, double dt,
                                   const GroupPreset* fold_group) {
  if (T < 50.0)
    throw std::invalid_argument("lyapunov_exponent: need T >= 50");
  KSignal K = curvature_signal(m, v, T + dt, dt, fold_group);
  double K0 = K(0.0);
  double u0 = std::sqrt(std::max(0.0, -K0));
  RiccatiTrace tr = riccati_solve(K, u0, T, dt);

  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < tr.u.size(); ++i)
    sum += 0.5 * (tr.u[i] + tr.u[i + 1]) * dt;
  LyapunovEstimate est;
  est.chi = sum / T;

  // windowed averages over the last half
  std::size_t half = tr.u.size() / 2;
  std::size_t win = (tr.u.size() - half) / 10;
  if (win >= 2) {
    std::vector<double> means;
    for (std::size_t w = 0; w + win <= tr.u.size() - half; w += win) {
      double s = 0.0;
      for (std::size_t i = 0; i < win; ++i) s += tr.u[half + w + i];
      means.push_back(s / win);
    }
    double mbar = 0.0;
    for (double x : means) mbar += x;
    mbar /= means.size();
    for (double x : means)
      est.tail_variance += (x - mbar) * (x - mbar) / means.size();
  }
  return est;
}

RegularityVerdict classify_regularity(const MetricSpec& m, const UnitTangent& v,
                                      const std::vector<double>& S_list,
                                      double dt, double tol,
                                      const GroupPreset* fold_group) {
  GreenReport stab = green_limit(m, v, GreenSide::Stable, S_list, dt, fold_group);
  GreenReport unst =
      green_limit(m, v, GreenSide::Unstable, S_list, dt, fold_group);
  RegularityVerdict verdict;
  verdict.u_minus_at_0 = stab.limit;
  verdict.u_plus_at_0 = unst.limit;
  verdict.gap = unst.limit - stab.limit;
  verdict.tol = tol;
  if (verdict.gap > tol)
    verdict.verdict = RegularityVerdict::Kind::Regular;
  else if (verdict.gap < tol / 10.0)
    verdict.verdict = RegularityVerdict::Kind::Singular;
  else
    verdict.verdict = RegularityVerdict::Kind::Undecided;

  // bounded-asymptote ratio of the stable Jacobi solution
  KSignal K = curvature_signal(m, v, S_list.back() + dt, dt, fold_group);
  JacobiTrace js = jacobi_solve(K, 1.0, stab.limit, S_list.back(), dt);
  double sup = 0.0;
  for (double j : js.j) sup = std::max(sup, j);
  verdict.bounded_ratio = sup;
  return verdict;
}

std::vector<StripSample> strip_probe(const MetricSpec& m,
                                     const std::vector<double>& offsets,
                                     double T, double dt) {
  if (m.kind == MetricSpec::Kind::ConformalBumps)
    throw std::invalid_argument("strip_probe: needs a band or constant metric");
  std::vector<StripSample> out;
  for (double off : offsets) {
    // Fermi chart state (t, w, t', w') starting parallel to the core
    double tc = 0.0, w = off;
    double vt = 1.0 / m.fermi_f(off), vw = 0.0;
    double max_sep = std::fabs(off);
    std::size_t n = static_cast<std::size_t>(std::ceil(T / dt));
    auto rhs = [&](double wv, double vtv, double vwv, double& at, double& aw) {
      double f = m.fermi_f(wv), fp = m.fermi_fp(wv);
      at = -2.0 * (fp / f) * vtv * vwv;
      aw = f * fp * vtv * vtv;
    };
    for (std::size_t i = 0; i < n; ++i) {
      double k1t, k1w, k2t, k2w, k3t, k3w, k4t, k4w;
      rhs(w, vt, vw, k1t, k1w);
      rhs(w + 0.5 * dt * vw, vt + 0.5 * dt * k1t, vw + 0.5 * dt * k1w, k2t, k2w);
      rhs(w + 0.5 * dt * (vw + 0.5 * dt * k1w), vt + 0.5 * dt * k2t,
          vw + 0.5 * dt * k2w, k3t, k3w);
      rhs(w + dt * (vw + 0.5 * dt * k2w), vt + dt * k3t, vw + dt * k3w, k4t,
          k4w);
      tc += dt * vt + dt * dt / 6.0 * (k1t + k2t + k3t);
      w += dt * vw + dt * dt / 6.0 * (k1w + k2w + k3w);
      vt += dt / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
      vw += dt / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
      max_sep = std::max(max_sep, std::fabs(w));
      if (max_sep > 1e6) break;  // divergence established
    }
    StripSample s;
    s.offset = off;
    s.max_separation = max_sep;
    s.strip_candidate = off != 0.0 && max_sep <= 2.0 * std::fabs(off);
    out.push_back(s);
  }
  return out;
}

}  // namespace geoflow
