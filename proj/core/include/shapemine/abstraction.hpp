#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "shapemine/interval.hpp"
#include "shapemine/segmentation.hpp"

namespace shapemine {

// One segment as a point in (slope, offset, duration) space. `norm` holds the
// z-scored coordinates used for clustering; raw values stay untouched for the
// letter cubes.
struct FeaturePoint {
    double slope = 0.0;
    double offset = 0.0;
    double duration = 0.0;
    std::array<double, 3> norm{0.0, 0.0, 0.0};
    std::size_t trace_index = 0;
    std::size_t segment_index = 0;
};

// Alphabet symbol: a cluster of segments plus its minimal bounding cube over
// the raw (slope, offset, duration) values.
struct Letter {
    std::string name;
    Interval slope_range;
    Interval offset_range;
    Interval duration_range;
    std::size_t member_count = 0;
};

struct Word {
    std::string trace_id;
    std::vector<std::string> letters; // one per segment, in temporal order
};

// One point per segment across all traces, in trace order then left-to-right.
// Normalized coordinates are z-scores over the pooled population (population
// standard deviation; a zero std maps the coordinate to 0).
// Throws std::invalid_argument when there are no segments at all.
std::vector<FeaturePoint> featurize(const std::vector<Segmentation>& segmentations);

struct KMeansResult {
    std::vector<std::size_t> assignment;             // point index -> cluster id
    std::vector<std::array<double, 3>> centroids;    // one per cluster
    double wcss = 0.0;                               // sum of squared distances to centroids
    std::vector<double> wcss_history;                // per Lloyd iteration of the kept run
};

// Lloyd's algorithm on the normalized coordinates with greedy k-means++
// initialization. Runs 3 restarts off one generator seeded by `seed` and
// keeps the lowest-WCSS run. Each run iterates to an assignment fixpoint (at
// most 300 rounds); an empty cluster seizes the point farthest from its
// assigned centroid. Deterministic for fixed inputs and seed.
KMeansResult k_means(const std::vector<FeaturePoint>& points, std::size_t k, std::uint64_t seed);

struct ClusterCountChoice {
    std::size_t k = 1;
    std::vector<double> wcss_by_k; // wcss_by_k[i] = WCSS of the (i+1)-cluster run
    KMeansResult clustering;       // the run behind the chosen k
};

// Runs k_means for k = 1..k_max (same seed) and picks the smallest k whose
// WCSS drop to k+1 falls below `wcss_threshold` (strict <); k_max if the
// drops never do. The full WCSS table is returned so runs can be audited.
ClusterCountChoice choose_cluster_count(const std::vector<FeaturePoint>& points,
                                        double wcss_threshold, std::size_t k_max,
                                        std::uint64_t seed);

struct Alphabet {
    std::vector<Letter> letters;
    std::vector<Word> words; // one per trace, in input order
};

// Names clusters A, B, C, ... in order of first appearance (scanning traces in
// input order, segments left-to-right), computes each letter's bounding cube
// in raw units, and spells out one word per trace. `trace_ids` (optional)
// supplies the word ids; defaults to the trace index.
Alphabet build_alphabet(const std::vector<FeaturePoint>& points,
                        const std::vector<std::size_t>& assignment,
                        const std::vector<std::string>& trace_ids = {});

} // namespace shapemine
