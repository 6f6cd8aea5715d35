#pragma once

#include <cmath>
#include <limits>

namespace shapemine {

// Closed interval [lo, hi]; either bound may be infinite.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double x) const { return lo <= x && x <= hi; }
    bool valid() const { return lo <= hi; }
    bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
    double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }

    static Interval everything() { return {}; }
    static Interval point(double x) { return {x, x}; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

} // namespace shapemine
