#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>

#include "topoexp/atsp.hpp"
#include "topoexp/descriptor.hpp"
#include "topoexp/explorer.hpp"
#include "topoexp/local_window.hpp"
#include "topoexp/map_gen.hpp"
#include "topoexp/random.hpp"

using namespace topoexp;

namespace {

const Fixture& forest() {
  static const Fixture f = generate_forest(1);
  return f;
}

DepthScan forest_scan() {
  const Fixture& f = forest();
  return raycast_scan(f.world, SensorModel{}, {f.start, 0.0}, 7);
}

CostMatrix random_matrix(std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  CostMatrix c(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    for (std::size_t j = 0; j <= m; ++j) c.at(i, j) = i == j ? 0.0 : rng.uniform(1.0, 20.0);
  }
  return c;
}

void BM_RaycastScan(benchmark::State& state) {
  const Fixture& f = forest();
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(raycast_scan(f.world, SensorModel{}, {f.start, 0.0}, seed++));
}
BENCHMARK(BM_RaycastScan);

void BM_BuildDescriptor(benchmark::State& state) {
  const DescriptorConfig cfg;
  const auto points = extract_valid_points(forest_scan(), cfg);
  for (auto _ : state) benchmark::DoNotOptimize(build_descriptor(points, cfg));
}
BENCHMARK(BM_BuildDescriptor);

void BM_CoversPoint(benchmark::State& state) {
  const DescriptorConfig cfg;
  const auto desc = build_descriptor(extract_valid_points(forest_scan(), cfg), cfg);
  const Vec3 origin = forest().start;
  double a = 0.0;
  for (auto _ : state) {
    a += 0.1;
    const Vec3 target{origin.x + 3.0 * std::cos(a), origin.y + 3.0 * std::sin(a), origin.z};
    benchmark::DoNotOptimize(covers_point(desc, origin, target));
  }
}
BENCHMARK(BM_CoversPoint);

void BM_AtspExact(benchmark::State& state) {
  const CostMatrix c = random_matrix(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(solve_atsp_exact(c));
}
BENCHMARK(BM_AtspExact)->DenseRange(4, 12, 4);

void BM_AtspHeuristic(benchmark::State& state) {
  const CostMatrix c = random_matrix(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(solve_atsp_heuristic(c));
}
BENCHMARK(BM_AtspHeuristic)->Arg(12)->Arg(40)->Arg(100);

void BM_WindowPlan(benchmark::State& state) {
  const DepthScan scan = forest_scan();
  const Vec3 here = forest().start;
  const Vec3 goal{here.x + 4.0, here.y + 2.0, here.z};
  for (auto _ : state) {
    const LocalWindow w(here, scan, 0.2, LocalWindowConfig{});
    benchmark::DoNotOptimize(w.plan(here, goal, 0.3, WindowLayer::kHard));
  }
}
BENCHMARK(BM_WindowPlan);

void BM_ExplorerStep(benchmark::State& state) {
  const Fixture& f = forest();
  ExplorerConfig cfg;
  cfg.wall_timing = false;
  auto ex = std::make_unique<Explorer>(f.world, f.start, cfg);
  for (auto _ : state) {
    if (ex->terminated()) {
      state.PauseTiming();
      ex = std::make_unique<Explorer>(f.world, f.start, cfg);
      state.ResumeTiming();
    }
    benchmark::DoNotOptimize(ex->step());
  }
}
BENCHMARK(BM_ExplorerStep)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
