#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "rotrate/birkhoff.hpp"
#include "rotrate/continuation.hpp"
#include "rotrate/cr3bp.hpp"
#include "rotrate/embedding.hpp"
#include "rotrate/pipeline.hpp"
#include "rotrate/projections.hpp"
#include "rotrate/torus.hpp"

using namespace rotrate;

namespace {

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

std::vector<PlanarPoint> fish_points(std::size_t n) {
  const auto orbit = rigid_orbit(RotationVector({kGolden}), TorusPoint({0.0}), n - 1);
  std::vector<PlanarPoint> out(n);
  const auto curve = fish_curve();
  for (std::size_t i = 0; i < n; ++i) out[i] = eval_fourier(curve, orbit[i][0]);
  return out;
}

void BM_RigidOrbit(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rigid_orbit(RotationVector({kGolden, 0.5 * std::sqrt(3.0)}),
                                         TorusPoint({0.0, 0.0}), n));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RigidOrbit)->Arg(10000)->Arg(100000);

void BM_WeightedBirkhoff(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = std::sin(2 * M_PI * mod1(kGolden * i));
  for (auto _ : state) benchmark::DoNotOptimize(weighted_birkhoff_average(f, WeightParams{1}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_WeightedBirkhoff)->Arg(10000)->Arg(100000);

void BM_Continuation(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto pts = fish_points(n);
  std::vector<double> angles(n);
  for (std::size_t i = 0; i < n; ++i) angles[i] = angle_from_reference(pts[i], PlanarPoint{8.25, 4.4});
  EmbeddingConfig config;
  config.K = 7;
  config.component_metric = ComponentMetric::circle;
  const DelayCloud cloud = build_delay_cloud(angles, config);
  ContinuationParams params;
  params.delta = 0.03;
  for (auto _ : state) benchmark::DoNotOptimize(continue_lift(cloud, params));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Continuation)->Arg(20000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_FishPipeline(benchmark::State& state) {
  const auto pts = fish_points(static_cast<std::size_t>(state.range(0)));
  PipelineOptions options;
  options.K = 7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        estimate_rotation_rate(std::span<const PlanarPoint>(pts), PlanarPoint{8.25, 4.4}, options));
  }
}
BENCHMARK(BM_FishPipeline)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_Rk8Step(benchmark::State& state) {
  const Cr3bpParams params;
  Cr3bpState s{-0.38038900845738177, 0.0, 0.0, 0.81147962060855017, 0.0};
  for (auto _ : state) {
    s = advance(s, params, params.step_h, 1000);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_Rk8Step);

}  // namespace
BENCHMARK_MAIN();
