#include "shapemine/segmentation.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace shapemine {

namespace {

Segmentation backtrack(const Signal& sig, const PrefixSums& ps,
                       const std::vector<std::size_t>& parent) {
    Segmentation out;
    std::size_t j = sig.size() - 1;
    while (true) {
        out.cuts.push_back(j);
        if (j == 0) break;
        j = parent[j];
    }
    std::reverse(out.cuts.begin(), out.cuts.end());
    out.fits.reserve(out.cuts.size() - 1);
    for (std::size_t k = 0; k + 1 < out.cuts.size(); ++k) {
        out.fits.push_back(line_fit(sig, out.cuts[k], out.cuts[k + 1], ps));
    }
    return out;
}

} // namespace

Segmentation segment_min_count(const Signal& sig, const PrefixSums& ps, double max_mse) {
    const std::size_t n = sig.size();
    if (n < 2) throw std::invalid_argument("segment_min_count: need at least 2 samples");
    if (!(max_mse > 0.0)) throw std::invalid_argument("segment_min_count: max_mse must be > 0");

    constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
    // best value for a prefix ending (and cutting) at sample j:
    // (segment count, total mse) in lexicographic order.
    std::vector<std::size_t> count(n, kUnset);
    std::vector<double> total(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> parent(n, kUnset);
    count[0] = 0;
    total[0] = 0.0;

    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            if (count[i] == kUnset) continue;
            const double mse = line_fit(sig, i, j, ps).mse;
            if (mse > max_mse) continue;
            const std::size_t c = count[i] + 1;
            const double t = total[i] + mse;
            if (c < count[j] || (c == count[j] && t < total[j])) {
                count[j] = c;
                total[j] = t;
                parent[j] = i;
            }
        }
    }
    return backtrack(sig, ps, parent);
}

Segmentation segment_min_count(const Signal& sig, double max_mse) {
    PrefixSums ps(sig);
    return segment_min_count(sig, ps, max_mse);
}

Segmentation segment_fixed_count(const Signal& sig, const PrefixSums& ps, std::size_t count) {
    const std::size_t n = sig.size();
    if (count == 0) throw std::invalid_argument("segment_fixed_count: count must be >= 1");
    if (count + 1 > n) {
        throw std::invalid_argument("segment_fixed_count: " + std::to_string(count) +
                                    " segments need at least " + std::to_string(count + 1) +
                                    " samples, signal has " + std::to_string(n));
    }

    const double inf = std::numeric_limits<double>::infinity();
    constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
    // cost[k][j]: minimal over segmentations of [0..j] into k+1 segments of
    // the maximum per-segment mse.
    std::vector<std::vector<double>> cost(count, std::vector<double>(n, inf));
    std::vector<std::vector<std::size_t>> parent(count, std::vector<std::size_t>(n, kUnset));

    for (std::size_t j = 1; j < n; ++j) cost[0][j] = line_fit(sig, 0, j, ps).mse;
    for (std::size_t k = 1; k < count; ++k) {
        for (std::size_t j = k + 1; j < n; ++j) {
            for (std::size_t i = k; i < j; ++i) {
                if (cost[k - 1][i] == inf) continue;
                const double c = std::max(cost[k - 1][i], line_fit(sig, i, j, ps).mse);
                if (c < cost[k][j]) {
                    cost[k][j] = c;
                    parent[k][j] = i;
                }
            }
        }
    }

    Segmentation out;
    out.cuts.assign(count + 1, 0);
    out.cuts.back() = n - 1;
    for (std::size_t k = count - 1; k > 0; --k) {
        out.cuts[k] = parent[k][out.cuts[k + 1]];
    }
    out.fits.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        out.fits.push_back(line_fit(sig, out.cuts[k], out.cuts[k + 1], ps));
    }
    return out;
}

Segmentation segment_fixed_count(const Signal& sig, std::size_t count) {
    PrefixSums ps(sig);
    return segment_fixed_count(sig, ps, count);
}

} // namespace shapemine
