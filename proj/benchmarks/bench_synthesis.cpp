#include <benchmark/benchmark.h>

#include "itosynth/synthesis.hpp"

using namespace itosynth;

namespace {

BoundaryTriple stable_quarter() { return {SpeedMeasure::canonical(0.5), JumpFunction::canonical(0.5), 0.0}; }

}  // namespace

static void BM_Synthesize(benchmark::State& state) {
    const BoundaryTriple b = stable_quarter();
    const double T = static_cast<double>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        RngStream rng(++seed, 0);
        const Synthesis s = synthesize(b, T, 0.05, rng);
        benchmark::DoNotOptimize(s.pp.points.size());
    }
}
BENCHMARK(BM_Synthesize)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_DrawPoint(benchmark::State& state) {
    const PointSampler ps(stable_quarter(), 0.05);
    RngStream rng(5, 0);
    std::uint64_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(ps.draw_point(rng, i++).lifetime);
}
BENCHMARK(BM_DrawPoint);
