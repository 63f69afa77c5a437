// Compares the OpenMP discrepancy kernels with their serial reference
// implementations on deterministic synthetic point sets.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "tilesplit/stats.hpp"
#include "tilesplit/util.hpp"

using namespace tilesplit;

namespace {

std::vector<double> points_1d(std::size_t n) {
    SplitMix64 rng(42);
    std::vector<double> xs(n);
    for (double& x : xs) x = rng.next_double();
    return xs;
}

std::vector<std::vector<double>> points_2d(std::size_t n) {
    SplitMix64 rng(43);
    std::vector<std::vector<double>> pts(n);
    for (auto& p : pts) p = {2.0 * rng.next_double(), rng.next_double()};
    return pts;
}

const std::vector<std::vector<double>> kDomain = {{0, 0}, {2, 0}, {2, 1}, {0, 1}};

void BM_StarSerial(benchmark::State& state) {
    const auto xs = points_1d(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(star_discrepancy_1d_serial(xs));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_StarParallel(benchmark::State& state) {
    const auto xs = points_1d(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(star_discrepancy_1d(xs));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BoxSerial(benchmark::State& state) {
    const auto pts = points_2d(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(box_discrepancy_serial(pts, kDomain));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BoxParallel(benchmark::State& state) {
    const auto pts = points_2d(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(box_discrepancy(pts, kDomain));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_StarSerial)->Arg(10000)->Arg(100000)->Arg(1000000);
BENCHMARK(BM_StarParallel)->Arg(10000)->Arg(100000)->Arg(1000000);
BENCHMARK(BM_BoxSerial)->Arg(10000)->Arg(100000);
BENCHMARK(BM_BoxParallel)->Arg(10000)->Arg(100000);

BENCHMARK_MAIN();
