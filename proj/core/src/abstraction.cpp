#include "shapemine/abstraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace shapemine {

namespace {

// Uniform double in [0, 1) from the top 53 bits of the generator output.
// Hand-rolled so results are identical across standard libraries.
double next_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t next_index(std::mt19937_64& rng, std::size_t n) {
    return std::min<std::size_t>(static_cast<std::size_t>(next_unit(rng) * static_cast<double>(n)),
                                 n - 1);
}

// Flat 3-per-point layout used by the Lloyd inner loops.
double sq_dist3(const double* a, const double* b) {
    const double d0 = a[0] - b[0], d1 = a[1] - b[1], d2 = a[2] - b[2];
    return d0 * d0 + d1 * d1 + d2 * d2;
}

// Greedy k-means++: every new centroid is drawn from a small candidate pool
// sampled proportionally to the squared distances, keeping the candidate
// that lowers the total potential the most.
std::vector<double> kmeanspp_init(const std::vector<double>& pts, std::size_t n, std::size_t k,
                                  std::mt19937_64& rng) {
    std::vector<double> centroids;
    centroids.reserve(3 * k);
    const std::size_t seed_point = next_index(rng, n);
    centroids.insert(centroids.end(), &pts[3 * seed_point], &pts[3 * seed_point + 3]);

    const std::size_t candidates = 2 + static_cast<std::size_t>(std::log(static_cast<double>(k)));
    std::vector<double> d2(n);
    double potential = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        d2[i] = sq_dist3(&pts[3 * i], &centroids[0]);
        potential += d2[i];
    }

    std::vector<double> cand_d2(n);
    std::vector<double> best_d2(n);
    while (centroids.size() < 3 * k) {
        std::size_t best_pick = n;
        double best_potential = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < candidates; ++c) {
            std::size_t pick;
            if (potential <= 0.0) {
                pick = next_index(rng, n);
            } else {
                const double target = next_unit(rng) * potential;
                double acc = 0.0;
                pick = n - 1;
                for (std::size_t i = 0; i < n; ++i) {
                    acc += d2[i];
                    if (acc > target) {
                        pick = i;
                        break;
                    }
                }
            }
            double cand_potential = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                cand_d2[i] = std::min(d2[i], sq_dist3(&pts[3 * i], &pts[3 * pick]));
                cand_potential += cand_d2[i];
            }
            if (cand_potential < best_potential) {
                best_potential = cand_potential;
                best_pick = pick;
                best_d2.swap(cand_d2);
            }
        }
        centroids.insert(centroids.end(), &pts[3 * best_pick], &pts[3 * best_pick + 3]);
        d2.swap(best_d2);
        potential = best_potential;
    }
    return centroids;
}

} // namespace

std::vector<FeaturePoint> featurize(const std::vector<Segmentation>& segmentations) {
    std::vector<FeaturePoint> points;
    for (std::size_t ti = 0; ti < segmentations.size(); ++ti) {
        const auto& fits = segmentations[ti].fits;
        for (std::size_t si = 0; si < fits.size(); ++si) {
            FeaturePoint p;
            p.slope = fits[si].slope;
            p.offset = fits[si].offset;
            p.duration = fits[si].duration;
            p.trace_index = ti;
            p.segment_index = si;
            points.push_back(p);
        }
    }
    if (points.empty()) throw std::invalid_argument("featurize: no segments");

    const double n = static_cast<double>(points.size());
    std::array<double, 3> mean{0.0, 0.0, 0.0};
    for (const auto& p : points) {
        mean[0] += p.slope;
        mean[1] += p.offset;
        mean[2] += p.duration;
    }
    for (auto& m : mean) m /= n;
    std::array<double, 3> var{0.0, 0.0, 0.0};
    for (const auto& p : points) {
        var[0] += (p.slope - mean[0]) * (p.slope - mean[0]);
        var[1] += (p.offset - mean[1]) * (p.offset - mean[1]);
        var[2] += (p.duration - mean[2]) * (p.duration - mean[2]);
    }
    std::array<double, 3> std_dev;
    for (int c = 0; c < 3; ++c) std_dev[c] = std::sqrt(var[c] / n);

    for (auto& p : points) {
        const std::array<double, 3> raw{p.slope, p.offset, p.duration};
        for (int c = 0; c < 3; ++c) {
            p.norm[c] = std_dev[c] > 0.0 ? (raw[c] - mean[c]) / std_dev[c] : 0.0;
        }
    }
    return points;
}

namespace {

KMeansResult lloyd_run(const std::vector<double>& pts, std::size_t n, std::size_t k,
                       std::mt19937_64& rng) {
    KMeansResult res;
    std::vector<double> centroids = kmeanspp_init(pts, n, k, rng);
    res.assignment.assign(n, k); // sentinel, forces `changed` on the first pass
    std::vector<std::size_t> sizes(k, 0);

    constexpr int kMaxIterations = 300;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        bool changed = false;
        double assign_cost = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double* p = &pts[3 * i];
            std::size_t best = 0;
            double best_d = sq_dist3(p, &centroids[0]);
            for (std::size_t c = 1; c < k; ++c) {
                const double d = sq_dist3(p, &centroids[3 * c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            assign_cost += best_d;
            if (res.assignment[i] != best) {
                res.assignment[i] = best;
                changed = true;
            }
        }

        std::fill(sizes.begin(), sizes.end(), 0);
        for (auto a : res.assignment) ++sizes[a];
        // Empty clusters seize the point farthest from its assigned centroid.
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] > 0) continue;
            std::size_t far = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (sizes[res.assignment[i]] <= 1) continue;
                const double d = sq_dist3(&pts[3 * i], &centroids[3 * res.assignment[i]]);
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            --sizes[res.assignment[far]];
            res.assignment[far] = c;
            sizes[c] = 1;
            changed = true;
        }

        std::fill(centroids.begin(), centroids.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double* c = &centroids[3 * res.assignment[i]];
            c[0] += pts[3 * i];
            c[1] += pts[3 * i + 1];
            c[2] += pts[3 * i + 2];
        }
        for (std::size_t c = 0; c < k; ++c) {
            const double inv = 1.0 / static_cast<double>(sizes[c]);
            centroids[3 * c] *= inv;
            centroids[3 * c + 1] *= inv;
            centroids[3 * c + 2] *= inv;
        }

        res.wcss_history.push_back(assign_cost);
        if (!changed) break;
    }

    res.wcss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        res.wcss += sq_dist3(&pts[3 * i], &centroids[3 * res.assignment[i]]);
    }
    res.centroids.resize(k);
    for (std::size_t c = 0; c < k; ++c) {
        res.centroids[c] = {centroids[3 * c], centroids[3 * c + 1], centroids[3 * c + 2]};
    }
    return res;
}

} // namespace

KMeansResult k_means(const std::vector<FeaturePoint>& points, std::size_t k, std::uint64_t seed) {
    const std::size_t n = points.size();
    if (k == 0 || k > n) {
        throw std::invalid_argument("k_means: k must be in [1, " + std::to_string(n) + "]");
    }

    std::vector<double> pts(3 * n);
    for (std::size_t i = 0; i < n; ++i) {
        pts[3 * i] = points[i].norm[0];
        pts[3 * i + 1] = points[i].norm[1];
        pts[3 * i + 2] = points[i].norm[2];
    }

    // k = 1 has a closed form; multiple runs exist only to escape bad seeds.
    const int restarts = k == 1 ? 1 : 3;
    std::mt19937_64 rng(seed);
    KMeansResult best;
    for (int restart = 0; restart < restarts; ++restart) {
        KMeansResult run = lloyd_run(pts, n, k, rng);
        if (restart == 0 || run.wcss < best.wcss) best = std::move(run);
    }
    return best;
}

ClusterCountChoice choose_cluster_count(const std::vector<FeaturePoint>& points,
                                        double wcss_threshold, std::size_t k_max,
                                        std::uint64_t seed) {
    if (k_max == 0 || k_max > points.size()) {
        throw std::invalid_argument("choose_cluster_count: k_max must be in [1, |points|]");
    }
    ClusterCountChoice choice;
    choice.wcss_by_k.reserve(k_max);
    std::vector<KMeansResult> runs;
    runs.reserve(k_max);
    for (std::size_t k = 1; k <= k_max; ++k) {
        runs.push_back(k_means(points, k, seed));
        choice.wcss_by_k.push_back(runs.back().wcss);
    }
    choice.k = k_max;
    for (std::size_t k = 1; k < k_max; ++k) {
        if (choice.wcss_by_k[k - 1] - choice.wcss_by_k[k] < wcss_threshold) {
            choice.k = k;
            break;
        }
    }
    choice.clustering = std::move(runs[choice.k - 1]);
    return choice;
}

Alphabet build_alphabet(const std::vector<FeaturePoint>& points,
                        const std::vector<std::size_t>& assignment,
                        const std::vector<std::string>& trace_ids) {
    if (assignment.size() != points.size()) {
        throw std::invalid_argument("build_alphabet: assignment must cover all points");
    }

    auto letter_name = [](std::size_t index) {
        std::string name;
        do {
            name.insert(name.begin(), static_cast<char>('A' + index % 26));
            index = index / 26;
        } while (index-- > 0); // spreadsheet-style: A..Z, AA, AB, ...
        return name;
    };

    constexpr std::size_t kUnnamed = std::numeric_limits<std::size_t>::max();
    std::size_t cluster_count = 0;
    for (auto a : assignment) cluster_count = std::max(cluster_count, a + 1);
    std::vector<std::size_t> name_index(cluster_count, kUnnamed);
    std::size_t named = 0;
    for (std::size_t i = 0; i < points.size(); ++i) { // points are in trace order
        if (name_index[assignment[i]] == kUnnamed) name_index[assignment[i]] = named++;
    }

    Alphabet out;
    out.letters.resize(named);
    for (std::size_t c = 0; c < cluster_count; ++c) {
        if (name_index[c] == kUnnamed) continue;
        out.letters[name_index[c]].name = letter_name(name_index[c]);
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        Letter& L = out.letters[name_index[assignment[i]]];
        const auto& p = points[i];
        if (L.member_count == 0) {
            L.slope_range = Interval::point(p.slope);
            L.offset_range = Interval::point(p.offset);
            L.duration_range = Interval::point(p.duration);
        } else {
            L.slope_range.lo = std::min(L.slope_range.lo, p.slope);
            L.slope_range.hi = std::max(L.slope_range.hi, p.slope);
            L.offset_range.lo = std::min(L.offset_range.lo, p.offset);
            L.offset_range.hi = std::max(L.offset_range.hi, p.offset);
            L.duration_range.lo = std::min(L.duration_range.lo, p.duration);
            L.duration_range.hi = std::max(L.duration_range.hi, p.duration);
        }
        ++L.member_count;
    }

    for (std::size_t i = 0; i < points.size(); ++i) {
        const std::size_t ti = points[i].trace_index;
        if (out.words.size() <= ti) {
            out.words.resize(ti + 1);
            out.words[ti].trace_id =
                ti < trace_ids.size() ? trace_ids[ti] : std::to_string(ti);
        }
        out.words[ti].letters.push_back(out.letters[name_index[assignment[i]]].name);
    }
    return out;
}

} // namespace shapemine
