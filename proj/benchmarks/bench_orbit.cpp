#include <benchmark/benchmark.h>

#include "geoflow/counting.hpp"
#include "geoflow/group.hpp"
#include "geoflow/measure.hpp"

using namespace geoflow;

namespace {

void BM_EnumerateOrbit(benchmark::State& state) {
  GroupPreset g = preset("genus2-octagon");
  DiskPoint o(0.0, 0.0);
  double R = static_cast<double>(state.range(0));
  for (auto _ : state) {
    OrbitTable t = enumerate_orbit(g, o, R);
    benchmark::DoNotOptimize(t.entries.data());
    state.counters["entries"] = static_cast<double>(t.size());
  }
}
BENCHMARK(BM_EnumerateOrbit)->Arg(6)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_EnumerateOrbitFree(benchmark::State& state) {
  GroupPreset g = preset("schottky2");
  DiskPoint o(0.0, 0.0);
  double R = static_cast<double>(state.range(0));
  for (auto _ : state) {
    OrbitTable t = enumerate_orbit(g, o, R);
    benchmark::DoNotOptimize(t.entries.data());
  }
}
BENCHMARK(BM_EnumerateOrbitFree)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_PsMeasure(benchmark::State& state) {
  GroupPreset g = preset("genus2-octagon");
  DiskPoint o(0.0, 0.0);
  OrbitTable table = enumerate_orbit(g, o, 8.0);
  for (auto _ : state) {
    AtomicBoundaryMeasure mu = ps_measure(table, o, 1.05);
    benchmark::DoNotOptimize(mu.atoms.data());
  }
}
BENCHMARK(BM_PsMeasure)->Unit(benchmark::kMillisecond);

void BM_ConjClasses(benchmark::State& state) {
  GroupPreset g = preset("schottky2");
  double t = static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto classes = conj_classes_up_to(g, t);
    benchmark::DoNotOptimize(classes.data());
  }
}
BENCHMARK(BM_ConjClasses)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace
