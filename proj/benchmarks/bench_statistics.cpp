#include <benchmark/benchmark.h>

#include <random>

#include "itosynth/j1.hpp"
#include "itosynth/statistics.hpp"

using namespace itosynth;

namespace {

std::vector<double> uniforms(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(g);
    return v;
}

CadlagPath random_walk(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 g(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<double> t(n), x(n);
    for (std::size_t i = 1; i < n; ++i) {
        t[i] = static_cast<double>(i) / static_cast<double>(n - 1);
        x[i] = x[i - 1] + z(g) / std::sqrt(static_cast<double>(n));
    }
    return CadlagPath(t, x);
}

}  // namespace

static void BM_KsTwoSample(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = uniforms(n, 1), b = uniforms(n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(ks_two_sample(a, b).pvalue);
}
BENCHMARK(BM_KsTwoSample)->Arg(1000)->Arg(10000);

static void BM_StableIndex(benchmark::State& state) {
    auto v = uniforms(20000, 3);
    for (auto& x : v) x = 1.0 / (x * x);
    for (auto _ : state) benchmark::DoNotOptimize(stable_index(v).index);
}
BENCHMARK(BM_StableIndex);

static void BM_J1Distance(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const CadlagPath a = random_walk(n, 4), b = random_walk(n, 5);
    for (auto _ : state) benchmark::DoNotOptimize(j1_distance(a, b, 1.0, 0.5).distance);
}
BENCHMARK(BM_J1Distance)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);
