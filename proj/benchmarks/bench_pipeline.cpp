#include <cmath>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "shapemine/abstraction.hpp"
#include "shapemine/learner.hpp"
#include "shapemine/matcher.hpp"
#include "shapemine/regexgen.hpp"

namespace {

using namespace shapemine;

std::vector<FeaturePoint> blob_points(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::vector<FeaturePoint> points(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int blob = static_cast<int>(i % 4);
        points[i].norm = {blob * 2.0 + unit() * 0.1, blob * -1.5 + unit() * 0.1, unit() * 0.1};
        points[i].trace_index = i / 16;
        points[i].segment_index = i % 16;
    }
    return points;
}

void BM_KMeans(benchmark::State& state) {
    const auto points = blob_points(400, 7);
    for (auto _ : state) {
        const auto result = k_means(points, static_cast<std::size_t>(state.range(0)), 0);
        benchmark::DoNotOptimize(result.wcss);
    }
}
BENCHMARK(BM_KMeans)->Arg(2)->Arg(4)->Arg(8);

void BM_ChooseClusterCount(benchmark::State& state) {
    const auto points = blob_points(400, 7);
    for (auto _ : state) {
        const auto choice = choose_cluster_count(points, 10.0, 10, 0);
        benchmark::DoNotOptimize(choice.k);
    }
}
BENCHMARK(BM_ChooseClusterCount);

void BM_RpniMerge(benchmark::State& state) {
    std::vector<Word> words;
    for (int i = 0; i < 32; ++i) {
        Word w;
        w.trace_id = std::to_string(i);
        for (int r = 0; r < 4 + i % 3; ++r) {
            w.letters.push_back("A");
            w.letters.push_back("B");
        }
        words.push_back(std::move(w));
    }
    const auto pta = build_prefix_tree(words);
    for (auto _ : state) {
        const auto merged = rpni_merge(pta);
        benchmark::DoNotOptimize(merged.state_count());
    }
}
BENCHMARK(BM_RpniMerge);

void BM_NoisyMatch(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::vector<Sample> samples;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i);
        const double period = 70.0;
        const double phase = t - period * std::floor(t / period);
        samples.push_back({t, phase < 35 ? phase / 17.5 : (period - phase) / 17.5});
    }
    const Signal sig("saw", std::move(samples));
    const auto lse = parse_lse(
        "(line(a1,b1,d1) . line(a2,b2,d2))* : a1 in [0.04, 0.07] and a2 in [-0.07, -0.04] and "
        "d1 in [30, 40] and d2 in [30, 40]");
    for (auto _ : state) {
        const auto result = noisy_match(sig, lse, 0.05);
        benchmark::DoNotOptimize(result.matched);
    }
}
BENCHMARK(BM_NoisyMatch)->Arg(140)->Arg(280)->Arg(560);

} // namespace
