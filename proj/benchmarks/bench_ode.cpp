#include <benchmark/benchmark.h>

#include "geoflow/metric.hpp"
#include "geoflow/ode.hpp"

using namespace geoflow;

namespace {

void BM_GeodesicFlow(benchmark::State& state) {
  MetricSpec m = MetricSpec::constant(-1.0);
  UnitTangent v(DiskPoint(0.1, 0.0), 0.4);
  double T = static_cast<double>(state.range(0));
  for (auto _ : state) {
    GeodesicTrace tr = geodesic_flow(m, v, T, 1e-3);
    benchmark::DoNotOptimize(tr.pos.data());
  }
}
BENCHMARK(BM_GeodesicFlow)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_JacobiSolve(benchmark::State& state) {
  double T = static_cast<double>(state.range(0));
  for (auto _ : state) {
    JacobiTrace tr = jacobi_solve(constant_signal(-1.0), 0.0, 1.0, T, 1e-3);
    benchmark::DoNotOptimize(tr.j.data());
  }
}
BENCHMARK(BM_JacobiSolve)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_RiccatiSolve(benchmark::State& state) {
  for (auto _ : state) {
    RiccatiTrace tr = riccati_solve(constant_signal(-1.0), 0.0, 10.0, 1e-3);
    benchmark::DoNotOptimize(tr.u.data());
  }
}
BENCHMARK(BM_RiccatiSolve)->Unit(benchmark::kMillisecond);

void BM_GreenLimit(benchmark::State& state) {
  MetricSpec m = MetricSpec::constant(-1.0);
  UnitTangent v(DiskPoint(0.0, 0.0), 0.3);
  std::vector<double> S = {4.0, 8.0, 16.0};
  for (auto _ : state) {
    GreenReport rep = green_limit(m, v, GreenSide::Stable, S, 1e-3);
    benchmark::DoNotOptimize(rep.limit);
  }
}
BENCHMARK(BM_GreenLimit)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
