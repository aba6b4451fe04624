// Command-line front end: one subcommand per experiment family, CSV tables
// plus a JSON envelope with the resolved configuration embedded.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "geoflow/counting.hpp"
#include "geoflow/entropy.hpp"
#include "geoflow/errors.hpp"
#include "geoflow/hts.hpp"
#include "geoflow/measure.hpp"
#include "geoflow/ode.hpp"
#include "geoflow/report.hpp"

using json = nlohmann::json;
using namespace geoflow;

namespace {

std::string iso_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

struct Output {
  std::string json_path;  // empty: stdout
  std::string csv_path;   // empty: no csv
  int threads = 1;

  void emit(const std::string& experiment, const json& config,
            const json& results, const std::string& csv = "") const {
    if (!csv_path.empty() && csv.empty())
      throw std::invalid_argument("this experiment emits no CSV table");
    json env;
    env["schema_version"] = "1";
    env["experiment"] = experiment;
    env["timestamp"] = iso_now();
    env["config"] = config;
    env["config"]["threads"] = threads;
    env["results"] = results;
    std::string text = env.dump(2) + "\n";
    if (json_path.empty())
      std::fputs(text.c_str(), stdout);
    else
      write_file(json_path, text);
    if (!csv_path.empty()) write_file(csv_path, csv);
  }
};

void add_output_flags(CLI::App* cmd, Output& out) {
  cmd->add_option("--out", out.json_path, "JSON report path (default stdout)");
  cmd->add_option("--csv", out.csv_path, "CSV table path");
  cmd->add_option("--threads", out.threads, "worker thread budget")
      ->envname("GEOFLOW_THREADS")
      ->check(CLI::PositiveNumber);
}

json point_json(const DiskPoint& p) { return json{{"x", p.x}, {"y", p.y}}; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for geodesic flows on hyperbolic "
               "surfaces"};
  app.require_subcommand(1);
  app.fallthrough();
  // config keys live in a section named after the subcommand; flags given on
  // the command line win, unknown keys are rejected
  app.set_config("--config", "", "read options from an INI file");
  app.allow_config_extras(CLI::config_extras_mode::error);

  Output out;
  int status = 0;
  auto run = [&](const std::string& name, auto&& body) {
    try {
      body();
    } catch (const BudgetExceeded& e) {
      std::fprintf(stderr, "%s: budget exceeded: %s\n", name.c_str(), e.what());
      status = 3;
    } catch (const NumericalFailure& e) {
      std::fprintf(stderr, "%s: numerical failure: %s\n", name.c_str(),
                   e.what());
      status = 4;
    } catch (const InsufficientData& e) {
      std::fprintf(stderr, "%s: insufficient data: %s\n", name.c_str(),
                   e.what());
      status = 4;
    } catch (const FoldingFailed& e) {
      std::fprintf(stderr, "%s: folding failed: %s\n", name.c_str(), e.what());
      status = 4;
    } catch (const NonHyperbolic& e) {
      std::fprintf(stderr, "%s: non-hyperbolic element: %s\n", name.c_str(),
                   e.what());
      status = 4;
    } catch (const UnknownPreset& e) {
      std::fprintf(stderr, "%s: %s\n", name.c_str(), e.what());
      status = 2;
    } catch (const std::invalid_argument& e) {
      std::fprintf(stderr, "%s: bad configuration: %s\n", name.c_str(),
                   e.what());
      status = 2;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "%s: %s\n", name.c_str(), e.what());
      status = 4;
    }
  };

  // ---- orbit ----
  {
    auto* c = app.add_subcommand("orbit", "enumerate the orbit of the origin");
    auto pres = std::make_shared<std::string>("genus2-octagon");
    auto R = std::make_shared<double>(8.0);
    c->add_option("--preset", *pres, "group preset name");
    c->add_option("--R", *R, "orbit radius");
    add_output_flags(c, out);
    c->callback([&, pres, R] {
      run("orbit", [&] {
        OrbitTable t = enumerate_orbit(preset(*pres), DiskPoint(0, 0), *R);
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < t.entries.size(); ++i)
          rows.push_back({static_cast<double>(i), t.entries[i].disp});
        json cfg{{"preset", *pres}, {"R", *R}};
        json res{{"count", t.entries.size()},
                 {"max_disp", t.entries.empty() ? 0.0 : t.entries.back().disp}};
        out.emit("orbit", cfg, res, csv_table({"index", "disp"}, rows));
      });
    });
  }

  // ---- exponent ----
  {
    auto* c = app.add_subcommand("exponent", "critical exponent fit");
    auto pres = std::make_shared<std::string>("genus2-octagon");
    auto radii = std::make_shared<std::vector<double>>(
        std::vector<double>{6.0, 8.0, 10.0});
    c->add_option("--preset", *pres, "group preset name");
    c->add_option("--R-list", *radii, "orbit radii, at least 3");
    add_output_flags(c, out);
    c->callback([&, pres, radii] {
      run("exponent", [&] {
        ExponentEstimate est =
            critical_exponent(preset(*pres), DiskPoint(0, 0), *radii);
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < est.radii.size(); ++i)
          rows.push_back(
              {est.radii[i], static_cast<double>(est.counts[i])});
        json cfg{{"preset", *pres}, {"R_list", *radii}};
        json res{{"delta", est.delta}, {"band", est.band}};
        out.emit("exponent", cfg, res, csv_table({"R", "N"}, rows));
      });
    });
  }

  // ---- ps ----
  {
    auto* c = app.add_subcommand("ps", "boundary measure from orbit sums");
    auto pres = std::make_shared<std::string>("genus2-octagon");
    auto s = std::make_shared<double>(1.0);
    auto R = std::make_shared<double>(8.0);
    auto px = std::make_shared<double>(0.0);
    auto py = std::make_shared<double>(0.0);
    c->add_option("--s", *s, "exponent");
    c->add_option("--R", *R, "orbit radius");
    c->add_option("--preset", *pres, "group preset name");
    c->add_option("--px", *px, "basepoint x");
    c->add_option("--py", *py, "basepoint y");
    add_output_flags(c, out);
    c->callback([&, pres, s, R, px, py] {
      run("ps", [&] {
        AtomicBoundaryMeasure mu =
            ps_measure(preset(*pres), DiskPoint(*px, *py), *s, *R);
        std::vector<std::vector<double>> rows;
        for (const auto& a : mu.atoms)
          rows.push_back({a.xi.theta, a.dist, a.weight});
        json cfg{{"preset", *pres}, {"s", *s}, {"R", *R},
                 {"px", *px},       {"py", *py}};
        json res{{"total_mass", mu.total_mass()},
                 {"atom_count", mu.atoms.size()}};
        out.emit("ps", cfg, res, csv_table({"theta", "dist", "weight"}, rows));
      });
    });
  }

  // ---- shadow ----
  {
    auto* c = app.add_subcommand("shadow", "shadow-measure spread check");
    auto pres = std::make_shared<std::string>("genus2-octagon");
    auto r = std::make_shared<double>(2.8);
    auto dmin = std::make_shared<double>(4.0);
    auto dmax = std::make_shared<double>(8.0);
    auto n = std::make_shared<std::size_t>(100);
    auto delta = std::make_shared<double>(1.0);
    auto seed = std::make_shared<std::uint64_t>(7);
    c->add_option("--preset", *pres, "group preset name");
    c->add_option("--r", *r, "shadow radius");
    c->add_option("--d-min", *dmin, "smallest displacement");
    c->add_option("--d-max", *dmax, "largest displacement");
    c->add_option("--samples", *n, "sample count");
    c->add_option("--delta", *delta, "exponent");
    c->add_option("--seed", *seed, "rng seed");
    add_output_flags(c, out);
    c->callback([&, pres, r, dmin, dmax, n, delta, seed] {
      run("shadow", [&] {
        ShadowOptions opts;
        opts.delta_hat = *delta;
        opts.seed = *seed;
        ShadowStats st = shadow_lemma_check(preset(*pres), DiskPoint(0, 0), *r,
                                            {*dmin, *dmax}, *n, opts);
        std::vector<std::vector<double>> rows;
        for (const auto& s2 : st.samples) rows.push_back({s2.d, s2.rho});
        json cfg{{"preset", *pres}, {"r", *r},          {"d_min", *dmin},
                 {"d_max", *dmax},  {"samples", *n},    {"delta", *delta},
                 {"seed", *seed}};
        json res{{"spread", st.spread},
                 {"min_rho", st.min_rho},
                 {"max_rho", st.max_rho},
                 {"flagged", st.flagged}};
        out.emit("shadow", cfg, res, csv_table({"d", "rho"}, rows));
      });
    });
  }

  // ---- bm ----
  {
    auto* c = app.add_subcommand("bm", "product-measure total mass");
    auto pres = std::make_shared<std::string>("genus2-octagon");
    auto s = std::make_shared<double>(1.0);
    auto R = std::make_shared<double>(8.5);
    c->add_option("--preset", *pres, "group preset name");
    c->add_option("--s", *s, "exponent");
    c->add_option("--R", *R, "orbit radius");
    add_output_flags(c, out);
    c->callback([&, pres, s, R] {
      run("bm", [&] {
        GroupPreset g = preset(*pres);
        AtomicBoundaryMeasure mu = ps_measure(g, DiskPoint(0, 0), *s, *R);
        double mass = bm_total_mass(g, mu);
        json cfg{{"preset", *pres}, {"s", *s}, {"R", *R}};
        out.emit("bm", cfg, json{{"mass", mass}});
      });
    });
  }

  // ---- flow ----
  {
    auto* c = app.add_subcommand("flow", "integrate one geodesic");
    auto K = std::make_shared<double>(-1.0);
    auto T = std::make_shared<double>(5.0);
    auto dt = std::make_shared<double>(1e-3);
    auto px = std::make_shared<double>(0.0);
    auto py = std::make_shared<double>(0.0);
    auto dir = std::make_shared<double>(0.0);
    c->add_option("--K", *K, "constant curvature, < 0");
    c->add_option("--T", *T, "horizon");
    c->add_option("--dt", *dt, "step");
    c->add_option("--px", *px, "start x");
    c->add_option("--py", *py, "start y");
    c->add_option("--dir", *dir, "start direction");
    add_output_flags(c, out);
    c->callback([&, K, T, dt, px, py, dir] {
      run("flow", [&] {
        MetricSpec m = MetricSpec::constant(*K);
        GeodesicTrace tr =
            geodesic_flow(m, {DiskPoint(*px, *py), *dir}, *T, *dt);
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < tr.t.size(); ++i)
          rows.push_back({tr.t[i], tr.pos[i].x, tr.pos[i].y});
        json cfg{{"K", *K},   {"T", *T},   {"dt", *dt},
                 {"px", *px}, {"py", *py}, {"dir", *dir}};
        json res{{"max_drift", tr.max_drift},
                 {"end", point_json(tr.pos.back())}};
        out.emit("flow", cfg, res, csv_table({"t", "x", "y"}, rows));
      });
    });
  }

  // ---- green ----
  {
    auto* c = app.add_subcommand("green", "stable/unstable slope limits");
    auto K = std::make_shared<double>(-1.0);
    auto S = std::make_shared<std::vector<double>>(
        std::vector<double>{3.0, 4.5, 6.0});
    auto dt = std::make_shared<double>(1e-3);
    c->add_option("--K", *K, "constant curvature");
    c->add_option("--S-list", *S, "increasing horizons, at least 3");
    c->add_option("--dt", *dt, "step");
    add_output_flags(c, out);
    c->callback([&, K, S, dt] {
      run("green", [&] {
        MetricSpec m = MetricSpec::constant(*K);
        UnitTangent v(DiskPoint(0, 0), 0.0);
        GreenReport stab = green_limit(m, v, GreenSide::Stable, *S, *dt);
        GreenReport unst = green_limit(m, v, GreenSide::Unstable, *S, *dt);
        json cfg{{"K", *K}, {"S_list", *S}, {"dt", *dt}};
        json res{{"stable_limit", stab.limit},
                 {"unstable_limit", unst.limit},
                 {"gap", unst.limit - stab.limit}};
        out.emit("green", cfg, res);
      });
    });
  }

  // ---- riccati ----
  {
    auto* c = app.add_subcommand("riccati", "slope evolution at constant K");
    auto K = std::make_shared<double>(-1.0);
    auto u0 = std::make_shared<double>(0.0);
    auto T = std::make_shared<double>(10.0);
    auto dt = std::make_shared<double>(1e-3);
    c->add_option("--K", *K, "constant curvature");
    c->add_option("--u0", *u0, "initial slope");
    c->add_option("--T", *T, "horizon");
    c->add_option("--dt", *dt, "step");
    add_output_flags(c, out);
    c->callback([&, K, u0, T, dt] {
      run("riccati", [&] {
        RiccatiTrace tr = riccati_solve(constant_signal(*K), *u0, *T, *dt);
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < tr.t.size(); ++i)
          rows.push_back({tr.t[i], tr.u[i]});
        json cfg{{"K", *K}, {"u0", *u0}, {"T", *T}, {"dt", *dt}};
        json res{{"u_end", tr.u.back()}, {"blowups", tr.blowups}};
        out.emit("riccati", cfg, res, csv_table({"t", "u"}, rows));
      });
    });
  }

  // ---- lyapunov ----
  {
    auto* c = app.add_subcommand("lyapunov", "unstable slope time average");
    auto K = std::make_shared<double>(-1.0);
    auto T = std::make_shared<double>(100.0);
    auto dt = std::make_shared<double>(1e-3);
    c->add_option("--K", *K, "constant curvature");
    c->add_option("--T", *T, "horizon, at least 50");
    c->add_option("--dt", *dt, "step");
    add_output_flags(c, out);
    c->callback([&, K, T, dt] {
      run("lyapunov", [&] {
        MetricSpec m = MetricSpec::constant(*K);
        LyapunovEstimate est =
            lyapunov_exponent(m, {DiskPoint(0, 0), 0.0}, *T, *dt);
        json cfg{{"K", *K}, {"T", *T}, {"dt", *dt}};
        json res{{"chi", est.chi}, {"tail_variance", est.tail_variance}};
        out.emit("lyapunov", cfg, res);
      });
    });
  }

  // ---- count ----
  {
    auto* c = app.add_subcommand("count", "closed-geodesic counting ratios");
    auto pres = std::make_shared<std::string>("schottky2");
    auto tmax = std::make_shared<double>(10.0);
    auto h = std::make_shared<double>(0.0);
    c->add_option("--preset", *pres, "group preset name");
    c->add_option("--t-max", *tmax, "length cutoff");
    c->add_option("--h-hat", *h, "entropy; 0 fits the critical exponent");
    add_output_flags(c, out);
    c->callback([&, pres, tmax, h] {
      run("count", [&] {
        GroupPreset g = preset(*pres);
        double hh = *h;
        if (hh <= 0.0)
          hh = critical_exponent(g, DiskPoint(0, 0), {6.0, 7.0, 8.0}).delta;
        CountingReport rep = margulis_count(g, *tmax, hh);
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < rep.t_grid.size(); ++i)
          rows.push_back({rep.t_grid[i], static_cast<double>(rep.counts[i]),
                          rep.ratios[i]});
        json cfg{{"preset", *pres}, {"t_max", *tmax}, {"h", *h}};
        json res{{"h_used", rep.h_used},
                 {"final_count", rep.counts.back()},
                 {"final_ratio", rep.ratios.back()}};
        out.emit("count", cfg, res, csv_table({"t", "N", "ratio"}, rows));
      });
    });
  }

  // ---- equi ----
  {
    auto* c = app.add_subcommand("equi", "closed-geodesic equidistribution");
    auto pres = std::make_shared<std::string>("genus2-octagon");
    auto t = std::make_shared<double>(5.85);
    auto bx = std::make_shared<double>(0.0);
    auto by = std::make_shared<double>(0.0);
    auto br = std::make_shared<double>(0.62);
    auto eps = std::make_shared<double>(0.25);
    c->add_option("--preset", *pres, "group preset name");
    c->add_option("--t", *t, "length cutoff");
    c->add_option("--box-x", *bx, "ball center x");
    c->add_option("--box-y", *by, "ball center y");
    c->add_option("--box-r", *br, "ball radius");
    c->add_option("--eps", *eps, "class window width");
    add_output_flags(c, out);
    c->callback([&, pres, t, bx, by, br, eps] {
      run("equi", [&] {
        EquiReport rep = equidistribution_probe(
            preset(*pres), *t, DiskPoint(*bx, *by), *br, 40, *eps);
        json cfg{{"preset", *pres}, {"t", *t},       {"box_x", *bx},
                 {"box_y", *by},    {"box_r", *br},  {"eps", *eps}};
        json res{{"box_fraction", rep.box_fraction},
                 {"reference_mass", rep.reference_mass},
                 {"class_count", rep.class_count},
                 {"total_length", rep.total_length}};
        out.emit("equi", cfg, res);
      });
    });
  }

  // ---- volume ----
  {
    auto* c = app.add_subcommand("volume", "sphere volumes from Jacobi fans");
    auto K = std::make_shared<double>(-1.0);
    auto tmax = std::make_shared<double>(10.0);
    auto dirs = std::make_shared<std::size_t>(64);
    auto h = std::make_shared<double>(1.0);
    c->add_option("--K", *K, "constant curvature");
    c->add_option("--t-max", *tmax, "largest radius");
    c->add_option("--dirs", *dirs, "fan size");
    c->add_option("--h-hat", *h, "entropy used in the normalization");
    add_output_flags(c, out);
    c->callback([&, K, tmax, dirs, h] {
      run("volume", [&] {
        MetricSpec m = MetricSpec::constant(*K);
        VolumeReport rep =
            sphere_volume_jacobi(m, DiskPoint(0, 0), *tmax, *dirs, *h);
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < rep.t_grid.size(); ++i)
          rows.push_back({rep.t_grid[i], rep.sphere_vols[i], rep.ball_vols[i],
                          rep.normalized[i]});
        json cfg{{"K", *K}, {"t_max", *tmax}, {"dirs", *dirs}, {"h", *h}};
        json res{{"final_sphere", rep.sphere_vols.back()},
                 {"final_normalized", rep.normalized.back()}};
        out.emit("volume", cfg, res,
                 csv_table({"t", "sphere", "ball", "normalized"}, rows));
      });
    });
  }

  // ---- margulis-fn ----
  {
    auto* c = app.add_subcommand("margulis-fn", "volume-growth constant");
    auto pres = std::make_shared<std::string>("genus2-octagon");
    auto t = std::make_shared<double>(9.0);
    auto R = std::make_shared<double>(8.5);
    auto x1 = std::make_shared<double>(0.0);
    auto y1 = std::make_shared<double>(0.0);
    auto x2 = std::make_shared<double>(0.0);
    auto y2 = std::make_shared<double>(0.0);
    c->add_option("--preset", *pres, "group preset name");
    c->add_option("--t", *t, "orbit horizon");
    c->add_option("--R", *R, "measure radius");
    c->add_option("--x1", *x1, "first point x");
    c->add_option("--y1", *y1, "first point y");
    c->add_option("--x2", *x2, "second point x");
    c->add_option("--y2", *y2, "second point y");
    add_output_flags(c, out);
    c->callback([&, pres, t, R, x1, y1, x2, y2] {
      run("margulis-fn", [&] {
        MargulisOptions opts;
        opts.t = *t;
        opts.measure_radius = *R;
        MargulisFunctionEstimate est = margulis_function(
            preset(*pres), DiskPoint(*x1, *y1), DiskPoint(*x2, *y2), opts);
        json cfg{{"preset", *pres}, {"t", *t},   {"R", *R},  {"x1", *x1},
                 {"y1", *y1},       {"x2", *x2}, {"y2", *y2}};
        json res{{"c_orbit", est.c_orbit},
                 {"c_integral", est.c_integral},
                 {"rel_gap", est.rel_gap},
                 {"bm_mass", est.bm_mass}};
        out.emit("margulis-fn", cfg, res);
      });
    });
  }

  // ---- entropy ----
  {
    auto* c = app.add_subcommand("entropy", "entropy bound and identities");
    auto pres = std::make_shared<std::string>("genus2-octagon");
    auto K = std::make_shared<double>(-1.0);
    auto samples = std::make_shared<std::size_t>(4);
    auto T = std::make_shared<double>(10.0);
    auto seed = std::make_shared<std::uint64_t>(20200729);
    c->add_option("--preset", *pres, "group preset name");
    c->add_option("--K", *K, "constant curvature for the identities");
    c->add_option("--samples", *samples, "vectors sampled");
    c->add_option("--T", *T, "averaging horizon");
    c->add_option("--seed", *seed, "rng seed");
    add_output_flags(c, out);
    c->callback([&, pres, K, samples, T, seed] {
      run("entropy", [&] {
        KatokReport kat = katok_bound_check(preset(*pres));
        MetricSpec m = MetricSpec::constant(*K);
        EntropyIdentityReport ids = mean_curvature_identity(
            m, *samples, *T, std::sqrt(-*K), *seed);
        json cfg{{"preset", *pres}, {"K", *K},      {"samples", *samples},
                 {"T", *T},         {"seed", *seed}};
        json res{
            {"katok",
             {{"area", kat.area},
              {"euler", kat.euler},
              {"h_hat", kat.h_hat},
              {"bound", kat.bound},
              {"slack", kat.slack}}},
            {"identities",
             {{"h_hat", ids.h_hat},
              {"lhs", ids.lhs},
              {"rhs", ids.rhs},
              {"rel_err", ids.rel_err}}}};
        out.emit("entropy", cfg, res);
      });
    });
  }

  // ---- hts ----
  {
    auto* c = app.add_subcommand("hts", "divergence type and recurrence");
    auto pres = std::make_shared<std::string>("genus2-octagon");
    auto offset = std::make_shared<double>(0.0);
    auto n = std::make_shared<std::size_t>(40);
    auto T = std::make_shared<double>(200.0);
    auto core = std::make_shared<double>(1.5);
    auto seed = std::make_shared<std::uint64_t>(424242);
    c->add_option("--preset", *pres, "group preset name");
    c->add_option("--offset", *offset, "exponent offset for the series");
    c->add_option("--samples", *n, "geodesics sampled");
    c->add_option("--T", *T, "recurrence horizon");
    c->add_option("--core", *core, "core ball radius");
    c->add_option("--seed", *seed, "rng seed");
    add_output_flags(c, out);
    c->callback([&, pres, offset, n, T, core, seed] {
      run("hts", [&] {
        GroupPreset g = preset(*pres);
        std::vector<double> rl;
        for (double r = 4.0; r <= 9.01; r += 0.5) rl.push_back(r);
        HTSReport div = divergence_diagnostic(g, rl, *offset);
        MetricSpec m = MetricSpec::constant(-1.0);
        RecurrenceReport rec =
            radial_recurrence_sample(g, m, *n, *T, *core, *seed);
        json cfg{{"preset", *pres}, {"offset", *offset}, {"samples", *n},
                 {"T", *T},         {"core", *core},     {"seed", *seed}};
        json res{{"delta_hat", div.delta_hat},
                 {"s_used", div.s_used},
                 {"growth_fit", div.growth_fit},
                 {"fit_residual", div.fit_residual},
                 {"recurrence_fraction", rec.recurrence_fraction}};
        out.emit("hts", cfg, res);
      });
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  return status;
}
