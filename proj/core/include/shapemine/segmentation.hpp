#pragma once

#include <cstddef>
#include <vector>

#include "shapemine/signal.hpp"

namespace shapemine {

// Piecewise-linear approximation of a signal. `cuts` holds sample indices
// c_0 = 0 < c_1 < ... < c_m = n-1; segment k spans the inclusive range
// [c_k, c_{k+1}], so consecutive segments share their boundary sample.
struct Segmentation {
    std::vector<std::size_t> cuts;
    std::vector<LineFit> fits; // one per segment, fits.size() + 1 == cuts.size()

    std::size_t segment_count() const { return fits.size(); }
};

// Minimum number of segments such that every segment's least-squares MSE is
// <= max_mse; among minimal-count segmentations, minimizes the total MSE.
// Dynamic program over cut positions, O(n^2) with O(1) fit queries.
// Always succeeds for signals of >= 2 samples (2-sample segments have MSE 0).
Segmentation segment_min_count(const Signal& sig, const PrefixSums& ps, double max_mse);
Segmentation segment_min_count(const Signal& sig, double max_mse);

// Exactly `count` segments minimizing the maximum per-segment MSE.
// O(n^2 * count). Requires count + 1 <= |sig|.
Segmentation segment_fixed_count(const Signal& sig, const PrefixSums& ps, std::size_t count);
Segmentation segment_fixed_count(const Signal& sig, std::size_t count);

} // namespace shapemine
