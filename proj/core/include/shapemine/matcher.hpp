#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "shapemine/interval.hpp"
#include "shapemine/lse.hpp"
#include "shapemine/signal.hpp"

namespace shapemine {

// Parses LSE concrete syntax:
//   shape := line(p,q,r) | shape + shape | shape . shape | (shape)*
//   cst   := p in [c1, c2] | cst and cst
//   lse   := shape | shape : cst
// Star binds tighter than ".", which binds tighter than "+". Throws
// ParseError with line/column on syntax errors and on intervals with
// c1 > c2. Repeated constraints on one parameter intersect.
Lse parse_lse(std::string_view text);

struct ConstrainedFit {
    double slope = 0.0;
    double offset = 0.0;
    double mse = 0.0;
};

// Least-squares line over the inclusive range [first, last] with (slope,
// offset) restricted to the given box. Solves the unconstrained problem
// first; when that falls outside the box, the minimum lies on an active
// bound, so the four edge-restricted 1-D minima (clamped) are evaluated —
// exact for this convex quadratic. An infeasible box yields mse = +inf.
ConstrainedFit constrained_line_fit(const Signal& sig, const PrefixSums& ps, std::size_t first,
                                    std::size_t last, const Interval& slope_box,
                                    const Interval& offset_box);

struct MatchSegment {
    std::size_t first = 0;
    std::size_t last = 0;
    std::string atom;
    double slope = 0.0;
    double offset = 0.0;
    double duration = 0.0;
    double mse = 0.0;
};

// Witness for a successful match: consecutive segments sharing boundary
// samples, spelling a word of the shape regex.
struct MatchResult {
    bool matched = false;
    std::vector<MatchSegment> segments;
};

// Decides whether `sig` is a nu-noisy match of `lse`: the signal must split
// into consecutive segments (neighbors share one boundary sample) spelling a
// word of the Glushkov automaton of the shape, where each segment admits
// in-box line parameters with MSE <= nu and a duration inside the atom's
// interval. Atoms whose duration interval contains 0 may match single-sample
// segments. Reachability DP over (sample index, automaton position).
MatchResult noisy_match(const Signal& sig, const Lse& lse, double nu);

} // namespace shapemine
