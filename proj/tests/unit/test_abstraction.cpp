#include <cmath>
#include <random>

#include <doctest.h>

#include "shapemine/abstraction.hpp"

#include "../support/oracles.hpp"

using namespace shapemine;

namespace {

// Feature points straight from raw coordinates, bypassing segmentation.
std::vector<FeaturePoint> points_from(const std::vector<std::array<double, 3>>& raw) {
    std::vector<Segmentation> segs(1);
    std::vector<FeaturePoint> points;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        FeaturePoint p;
        p.slope = raw[i][0];
        p.offset = raw[i][1];
        p.duration = raw[i][2];
        p.trace_index = 0;
        p.segment_index = i;
        points.push_back(p);
    }
    // normalize like featurize does
    std::array<double, 3> mean{0, 0, 0}, var{0, 0, 0};
    for (const auto& p : points) {
        mean[0] += p.slope;
        mean[1] += p.offset;
        mean[2] += p.duration;
    }
    for (auto& m : mean) m /= points.size();
    for (const auto& p : points) {
        const std::array<double, 3> r{p.slope, p.offset, p.duration};
        for (int d = 0; d < 3; ++d) var[d] += (r[d] - mean[d]) * (r[d] - mean[d]);
    }
    for (auto& p : points) {
        const std::array<double, 3> r{p.slope, p.offset, p.duration};
        for (int d = 0; d < 3; ++d) {
            const double sd = std::sqrt(var[d] / points.size());
            p.norm[d] = sd > 0 ? (r[d] - mean[d]) / sd : 0.0;
        }
    }
    return points;
}

std::vector<FeaturePoint> three_blobs(std::size_t per_blob, std::mt19937_64& rng) {
    std::vector<std::array<double, 3>> raw;
    const std::array<std::array<double, 3>, 3> centers{{{-5, 0, 1}, {0, 6, 2}, {7, -4, 3}}};
    for (const auto& c : centers) {
        for (std::size_t i = 0; i < per_blob; ++i) {
            raw.push_back({c[0] + oracle::uniform(rng, -0.05, 0.05),
                           c[1] + oracle::uniform(rng, -0.05, 0.05),
                           c[2] + oracle::uniform(rng, -0.05, 0.05)});
        }
    }
    return points_from(raw);
}

} // namespace

TEST_CASE("featurize flattens segments and z-scores the population") {
    const Signal a("a", {{0, 0}, {1, 1}, {2, 2}, {3, 1}});
    const Signal b("b", {{0, 5}, {1, 6}, {2, 7}});
    std::vector<Segmentation> segs{segment_min_count(a, 1e-6), segment_min_count(b, 1e-6)};
    const auto points = featurize(segs);
    REQUIRE(points.size() == 3); // a: rise+fall, b: one line
    CHECK(points[0].trace_index == 0);
    CHECK(points[2].trace_index == 1);
    CHECK(points[2].segment_index == 0);

    // Spreadsheet-style recomputation of the z-scores.
    const double slopes[3] = {points[0].slope, points[1].slope, points[2].slope};
    const double mean = (slopes[0] + slopes[1] + slopes[2]) / 3.0;
    double var = 0.0;
    for (double s : slopes) var += (s - mean) * (s - mean);
    const double sd = std::sqrt(var / 3.0);
    for (int i = 0; i < 3; ++i) {
        CHECK(points[i].norm[0] == doctest::Approx((slopes[i] - mean) / sd).epsilon(1e-12));
    }
    CHECK_THROWS_AS(featurize({}), std::invalid_argument);
}

TEST_CASE("identical segments normalize to the origin") {
    const Signal a("a", {{0, 0}, {1, 1}, {2, 2}});
    std::vector<Segmentation> segs{segment_min_count(a, 1e-6), segment_min_count(a, 1e-6)};
    const auto points = featurize(segs);
    REQUIRE(points.size() == 2);
    for (const auto& p : points) {
        CHECK(p.norm[0] == 0.0); // std 0 rule
        CHECK(p.norm[1] == 0.0);
        CHECK(p.norm[2] == 0.0);
    }
}

TEST_CASE("k = |points| drives WCSS to zero, k = 1 to the total variance") {
    std::mt19937_64 rng(17);
    const auto points = three_blobs(3, rng);
    const auto singletons = k_means(points, points.size(), 0);
    CHECK(singletons.wcss == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

    const auto one = k_means(points, 1, 0);
    std::array<double, 3> mean{0, 0, 0};
    for (const auto& p : points) {
        for (int d = 0; d < 3; ++d) mean[d] += p.norm[d];
    }
    for (auto& m : mean) m /= points.size();
    double expected = 0.0;
    for (const auto& p : points) {
        for (int d = 0; d < 3; ++d) expected += (p.norm[d] - mean[d]) * (p.norm[d] - mean[d]);
    }
    CHECK(one.wcss == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("k-means never beats the exhaustive partition optimum") {
    std::mt19937_64 rng(23);
    for (int round = 0; round < 20; ++round) {
        const std::size_t n = 4 + oracle::pick(rng, 5); // 4..8
        std::vector<std::array<double, 3>> raw;
        for (std::size_t i = 0; i < n; ++i) {
            raw.push_back({oracle::uniform(rng, -3, 3), oracle::uniform(rng, -3, 3),
                           oracle::uniform(rng, -3, 3)});
        }
        const auto points = points_from(raw);
        const std::size_t k = 1 + oracle::pick(rng, 3);
        const auto result = k_means(points, k, round);
        std::vector<std::array<double, 3>> norm;
        for (const auto& p : points) norm.push_back(p.norm);
        CHECK(result.wcss >= oracle::optimal_partition_wcss(norm, k) - 1e-9);
    }
}

TEST_CASE("Lloyd iterations never increase WCSS") {
    std::mt19937_64 rng(29);
    for (int round = 0; round < 10; ++round) {
        const auto points = three_blobs(5, rng);
        const auto result = k_means(points, 1 + oracle::pick(rng, 4), round);
        for (std::size_t i = 1; i < result.wcss_history.size(); ++i) {
            CHECK(result.wcss_history[i] <= result.wcss_history[i - 1] + 1e-12);
        }
    }
}

TEST_CASE("three tight blobs select k = 3") {
    std::mt19937_64 rng(31);
    const auto points = three_blobs(6, rng);
    const auto choice = choose_cluster_count(points, 0.5, 6, 0);
    CHECK(choice.k == 3);
    REQUIRE(choice.wcss_by_k.size() == 6);
    for (std::size_t i = 1; i < choice.wcss_by_k.size(); ++i) {
        CHECK(choice.wcss_by_k[i] <= choice.wcss_by_k[i - 1] + 1e-9); // reported table monotone
    }
}

TEST_CASE("chosen k is consistent with the emitted WCSS table") {
    std::mt19937_64 rng(37);
    std::vector<std::array<double, 3>> raw;
    for (int i = 0; i < 10; ++i) {
        raw.push_back({oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1), 0.0});
        raw.push_back({8 + oracle::uniform(rng, -1, 1), 8 + oracle::uniform(rng, -1, 1), 0.0});
    }
    const auto points = points_from(raw);
    const double threshold = 2.0;
    const auto choice = choose_cluster_count(points, threshold, 8, 0);
    // Manual elbow rule on the emitted table.
    std::size_t expected = 8;
    for (std::size_t k = 1; k < 8; ++k) {
        if (choice.wcss_by_k[k - 1] - choice.wcss_by_k[k] < threshold) {
            expected = k;
            break;
        }
    }
    CHECK(choice.k == expected);
    CHECK(choice.k == 2); // two blobs
}

TEST_CASE("cluster-count preconditions") {
    std::mt19937_64 rng(53);
    const auto points = three_blobs(2, rng); // 6 points
    CHECK_THROWS_AS(choose_cluster_count(points, 1.0, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(choose_cluster_count(points, 1.0, points.size() + 1, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(k_means(points, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(k_means(points, points.size() + 1, 0), std::invalid_argument);
    CHECK(choose_cluster_count(points, 1.0, points.size(), 0).wcss_by_k.size() == points.size());
}

TEST_CASE("clustering is deterministic for a fixed seed") {
    std::mt19937_64 rng(41);
    const auto points = three_blobs(7, rng);
    const auto a = k_means(points, 3, 5);
    const auto b = k_means(points, 3, 5);
    CHECK(a.assignment == b.assignment);
    CHECK(a.wcss == b.wcss);
}

TEST_CASE("alphabet letters are named by first appearance and cover their members") {
    // Arrange clusters so cluster id 1 appears first in trace order.
    std::vector<FeaturePoint> points(4);
    points[0] = {2.0, 0.0, 1.0, {0, 0, 0}, 0, 0};
    points[1] = {-2.0, 5.0, 1.0, {0, 0, 0}, 0, 1};
    points[2] = {2.1, 0.1, 1.5, {0, 0, 0}, 1, 0};
    points[3] = {-1.9, 4.9, 0.5, {0, 0, 0}, 1, 1};
    const std::vector<std::size_t> assignment{1, 0, 1, 0};
    const auto alphabet = build_alphabet(points, assignment, {"first", "second"});

    REQUIRE(alphabet.letters.size() == 2);
    CHECK(alphabet.letters[0].name == "A"); // cluster 1, first seen
    CHECK(alphabet.letters[0].member_count == 2);
    CHECK(alphabet.letters[0].slope_range.lo == doctest::Approx(2.0));
    CHECK(alphabet.letters[0].slope_range.hi == doctest::Approx(2.1));
    CHECK(alphabet.letters[1].name == "B");
    CHECK(alphabet.letters[1].offset_range.contains(5.0));
    CHECK(alphabet.letters[1].duration_range.lo == doctest::Approx(0.5));

    REQUIRE(alphabet.words.size() == 2);
    CHECK(alphabet.words[0].trace_id == "first");
    CHECK(alphabet.words[0].letters == std::vector<std::string>{"A", "B"});
    CHECK(alphabet.words[1].letters == std::vector<std::string>{"A", "B"});
}

TEST_CASE("single cluster yields words of A") {
    std::mt19937_64 rng(43);
    const auto points = three_blobs(2, rng);
    const std::vector<std::size_t> assignment(points.size(), 0);
    const auto alphabet = build_alphabet(points, assignment);
    REQUIRE(alphabet.letters.size() == 1);
    CHECK(alphabet.letters[0].name == "A");
    for (const auto& word : alphabet.words) {
        for (const auto& letter : word.letters) CHECK(letter == "A");
    }
}

TEST_CASE("every member lies in its letter's cube") {
    std::mt19937_64 rng(47);
    const auto points = three_blobs(6, rng);
    const auto result = k_means(points, 3, 0);
    const auto alphabet = build_alphabet(points, result.assignment);
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool inside_any = false;
        for (const auto& letter : alphabet.letters) {
            if (letter.slope_range.contains(points[i].slope) &&
                letter.offset_range.contains(points[i].offset) &&
                letter.duration_range.contains(points[i].duration)) {
                inside_any = true;
            }
        }
        CHECK(inside_any);
    }
}
