// Micro benchmarks for the distance kernels on synthetic curves.

#include <cstddef>
#include <random>

#include <benchmark/benchmark.h>

#include "kdtw/kdtw.hpp"
#include "kdtw/measures.hpp"
#include "kdtw/robust_median.hpp"
#include "kdtw/synth.hpp"

namespace {

using namespace kdtw;

SynthParams params_for(std::size_t m) {
    SynthParams p;
    p.m_total = m;
    return p;
}

// Type-A vs type-C pair of complexity m, the typical hard case for pruning.
DistanceMatrix synthetic_pair(std::size_t m) {
    const auto p = params_for(m);
    return distance_matrix(gen_type_a(p, 6, 1), gen_type_c(p, 2));
}

void BM_Dtw(benchmark::State& state) {
    const auto d = synthetic_pair(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(dtw_q(d).value);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Dtw)->Arg(101)->Arg(201)->Arg(401)->Arg(1001)->Complexity(benchmark::oNSquared);

void BM_Frechet(benchmark::State& state) {
    const auto d = synthetic_pair(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(discrete_frechet(d).value);
}
BENCHMARK(BM_Frechet)->Arg(201)->Arg(1001);

// range(1): 0 = no heuristics, 1 = early exit, 2 = early exit + feasibility search
void BM_KdtwExact(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const auto d = synthetic_pair(m);
    KdtwOptions options;
    options.early_exit = state.range(1) >= 1;
    options.feasibility_search = state.range(1) >= 2;
    const std::size_t k = synthetic_k(m);
    std::uint64_t calls = 0;
    for (auto _ : state) {
        const auto r = kdtw_exact(d, k, options);
        calls = r.dtw_calls;
        benchmark::DoNotOptimize(r.value);
    }
    state.counters["dtw_calls"] = static_cast<double>(calls);
}
BENCHMARK(BM_KdtwExact)->ArgsProduct({{41, 101}, {0, 1, 2}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KdtwExact)->Args({201, 2})->Unit(benchmark::kMillisecond);

void BM_KdtwApprox(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const auto d = synthetic_pair(m);
    const double eps = static_cast<double>(state.range(1)) / 100.0;
    const std::size_t k = synthetic_k(m);
    for (auto _ : state) benchmark::DoNotOptimize(kdtw_approx(d, k, eps).value);
}
BENCHMARK(BM_KdtwApprox)->ArgsProduct({{201, 1001}, {10, 50}})->Unit(benchmark::kMillisecond);

void BM_TopKMedian(benchmark::State& state) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Point> pts;
    for (int i = 0; i < state.range(0); ++i) pts.push_back(Point{u(rng), u(rng)});
    const auto k = static_cast<std::size_t>(state.range(0) / 2);
    for (auto _ : state) benchmark::DoNotOptimize(top_k_geometric_median(pts, k).objective);
}
BENCHMARK(BM_TopKMedian)->Arg(8)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
