// Microbenchmarks for the hot paths: counter-based RNG draws, closed-form
// and inversion-based law evaluations, interference-bound table
// construction and lookup, simulation replication throughput, and analytic
// outage evaluation.

#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "twotier/analytic.hpp"
#include "twotier/channel.hpp"
#include "twotier/contour.hpp"
#include "twotier/geometry.hpp"
#include "twotier/montecarlo.hpp"
#include "twotier/params.hpp"
#include "twotier/rng.hpp"
#include "twotier/scenario.hpp"

namespace {

using namespace twotier;

constexpr double kAlign = 2.0 * M_PI / 3.0;

void rng_uniform(benchmark::State& state) {
  RngStream rng(1, 0, StreamRole::scratch);
  double acc = 0.0;
  for (auto _ : state) acc += rng.uniform01();
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(rng_uniform);

void rng_poisson(benchmark::State& state) {
  RngStream rng(1, 0, StreamRole::scratch);
  const double mean = double(state.range(0));
  std::uint64_t acc = 0;
  for (auto _ : state) acc += rng.poisson(mean);
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(rng_poisson)->Arg(5)->Arg(50);

void stable_cdf_closed_form(benchmark::State& state) {
  const LevyLaw law{3.7};
  double y = 0.1, acc = 0.0;
  for (auto _ : state) {
    acc += law.cdf(y);
    y = y < 1e4 ? y * 1.01 : 0.1;
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(stable_cdf_closed_form);

void stable_cdf_inversion(benchmark::State& state) {
  double y = 0.5, acc = 0.0;
  for (auto _ : state) {
    acc += stable_cdf_by_inversion(3.7, y);
    y = y < 1e3 ? y * 1.1 : 0.5;
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(stable_cdf_inversion);

void interference_bound_build(benchmark::State& state) {
  const SystemParams p = SystemParams::defaults();
  for (auto _ : state) {
    const MacroInterferenceBound bound(
        p, interior_observer_geometry(p, 250.0, kAlign, false));
    benchmark::DoNotOptimize(bound.visible_area());
  }
}
BENCHMARK(interference_bound_build)->Unit(benchmark::kMillisecond);

void interference_bound_lookup(benchmark::State& state) {
  const SystemParams p = SystemParams::defaults();
  const MacroInterferenceBound bound(
      p, interior_observer_geometry(p, 250.0, kAlign, false));
  double y = 1e-3, acc = 0.0;
  for (auto _ : state) {
    acc += bound.geometry_integral(y);
    y = y < 1e6 ? y * 1.07 : 1e-3;
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(interference_bound_lookup);

void mark_law_estimate(benchmark::State& state) {
  CompoundMarkSpec spec = compound_mark_spec(SystemParams::defaults(), 1);
  spec.samples = std::uint64_t(state.range(0));
  for (auto _ : state) {
    const ShadowMoments law = ShadowMoments::estimate(spec);
    benchmark::DoNotOptimize(law.moment());
  }
}
BENCHMARK(mark_law_estimate)->Arg(100'000)->Unit(benchmark::kMillisecond);

void replicate_macro_observer(benchmark::State& state) {
  ScenarioConfig sc;
  sc.params = SystemParams::defaults();
  sc.mean_macro_users = 24.0;
  sc.mean_femtos = double(state.range(0));
  sc.observer = ObserverKind::macro_station;
  const Simulator sim(sc);
  std::uint64_t index = 0;
  double acc = 0.0;
  for (auto _ : state) acc += sim.replicate(1, index++).total();
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(replicate_macro_observer)->Arg(0)->Arg(50)->Unit(benchmark::kMicrosecond);

void replicate_femto_observer(benchmark::State& state) {
  ScenarioConfig sc;
  sc.params = SystemParams::defaults();
  sc.mean_macro_users = 24.0;
  sc.mean_femtos = double(state.range(0));
  sc.observer = ObserverKind::femto_interior;
  sc.femto_offset_m = 250.0;
  sc.sector_align = kAlign;
  const Simulator sim(sc);
  std::uint64_t index = 0;
  double acc = 0.0;
  for (auto _ : state) acc += sim.replicate(1, index++).total();
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(replicate_femto_observer)->Arg(50)->Unit(benchmark::kMicrosecond);

void analytic_outage_point(benchmark::State& state) {
  ScenarioConfig sc;
  sc.params = SystemParams::defaults();
  sc.observer = ObserverKind::femto_interior;
  sc.femto_offset_m = 250.0;
  sc.sector_align = kAlign;
  EvalOptions opts;
  opts.method = EvalMethod::analytic;
  opts.fit_samples = 4'000;
  opts.moment_samples = 100'000;
  OutageModel model(sc, opts);
  model.evaluate(24.0, 10.0);  // build the cached artifacts up front
  double nf = 0.0, acc = 0.0;
  for (auto _ : state) {
    const TierOutage t = model.evaluate(24.0, nf);
    acc += t.femto.value_or(0.0) + t.macro.value_or(0.0);
    nf = nf < 120.0 ? nf + 1.0 : 0.0;
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(analytic_outage_point)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
