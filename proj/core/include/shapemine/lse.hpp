#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shapemine/interval.hpp"
#include "shapemine/regex.hpp"

namespace shapemine {

// One atomic line shape: the names of its slope/offset/duration parameters.
// The regex refers to atoms by `name`; constraints refer to the parameters.
struct LseAtom {
    std::string name;
    std::string slope_param;
    std::string offset_param;
    std::string duration_param;
};

// Linear shape expression: a regex over atoms plus interval constraints on
// the atom parameters. Parameters without a constraint are unbounded.
struct Lse {
    RegexPtr shape;
    std::vector<LseAtom> atoms;                              // unique names, render order
    std::vector<std::pair<std::string, Interval>> constraints; // parameter -> interval

    const LseAtom* find_atom(const std::string& name) const;
    std::optional<Interval> param_interval(const std::string& param) const;
};

// Concrete syntax: atoms expand to line(<slope>, <offset>, <duration>), the
// shape prints with ".", "+", "*" and parentheses (star > concat > union),
// constraints as "p in [lo, hi]" joined by "and". Numbers use 6 significant
// digits; interval bounds are rounded outward so every value inside the
// original interval stays inside the printed one.
std::string render_lse(const Lse& lse);

// Structural equality that ignores atom names: positions compare by their
// parameter-name triples, constraints as maps. This is the identity that
// survives a render/parse round trip.
bool lse_equivalent(const Lse& a, const Lse& b);

// Formats `x` with 6 significant digits. The directed variants round toward
// -inf / +inf on the 6-digit grid instead of to nearest.
std::string format_number(double x);
std::string format_number_down(double x);
std::string format_number_up(double x);

} // namespace shapemine
