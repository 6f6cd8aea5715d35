#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "shapemine/segmentation.hpp"

namespace {

using namespace shapemine;

Signal noisy_wave(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Sample> samples;
    samples.reserve(n);
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        samples.push_back({static_cast<double>(i), v});
        v += static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    }
    return Signal("bench", std::move(samples));
}

void BM_LineFit(benchmark::State& state) {
    const auto sig = noisy_wave(4096, 1);
    const PrefixSums ps(sig);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto fit = line_fit(sig, i % 2048, i % 2048 + 2047, ps);
        benchmark::DoNotOptimize(fit.mse);
        ++i;
    }
}
BENCHMARK(BM_LineFit);

void BM_SegmentMinCount(benchmark::State& state) {
    const auto sig = noisy_wave(static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state) {
        const auto seg = segment_min_count(sig, 0.05);
        benchmark::DoNotOptimize(seg.cuts.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SegmentMinCount)->RangeMultiplier(2)->Range(128, 2048)->Complexity(benchmark::oNSquared);

void BM_SegmentFixedCount(benchmark::State& state) {
    const auto sig = noisy_wave(static_cast<std::size_t>(state.range(0)), 3);
    for (auto _ : state) {
        const auto seg = segment_fixed_count(sig, 8);
        benchmark::DoNotOptimize(seg.cuts.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SegmentFixedCount)->RangeMultiplier(2)->Range(128, 1024)->Complexity(benchmark::oNSquared);

} // namespace

BENCHMARK_MAIN();
