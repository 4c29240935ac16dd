#include <benchmark/benchmark.h>

#include "itosynth/excursion.hpp"
#include "itosynth/local_time.hpp"
#include "itosynth/time_change.hpp"

using namespace itosynth;

static void BM_SampleExcursionAbove(benchmark::State& state) {
    const double eps = 1.0 / static_cast<double>(state.range(0));
    RngStream rng(1, 0);
    std::size_t knots = 0;
    for (auto _ : state) {
        const Excursion e = sample_excursion_above(eps, {}, rng);
        knots += e.size();
        benchmark::DoNotOptimize(e.times.data());
    }
    state.counters["knots"] = benchmark::Counter(static_cast<double>(knots), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_SampleExcursionAbove)->Arg(10)->Arg(100);

static void BM_AbsorbedBm(benchmark::State& state) {
    RngStream rng(2, 0);
    for (auto _ : state) benchmark::DoNotOptimize(sample_absorbed_bm(1.0, {}, rng).lifetime());
}
BENCHMARK(BM_AbsorbedBm);

static void BM_LocalTime(benchmark::State& state) {
    RngStream rng(3, 0);
    const Excursion e = sample_excursion_above(0.1, {}, rng);
    for (auto _ : state) benchmark::DoNotOptimize(estimate_local_time(e, 1e-3).final_row().data());
}
BENCHMARK(BM_LocalTime);

static void BM_Clock(benchmark::State& state) {
    RngStream rng(4, 0);
    const Excursion e = sample_excursion_above(0.1, {}, rng);
    const SpeedMeasure m = state.range(0) == 0 ? SpeedMeasure::canonical(0.5) : SpeedMeasure::canonical(0.8);
    for (auto _ : state) benchmark::DoNotOptimize(clock(e, m).total());
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(e.size()));
}
BENCHMARK(BM_Clock)->Arg(0)->Arg(1);
