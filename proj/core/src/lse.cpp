#include "shapemine/lse.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>

namespace shapemine {

const LseAtom* Lse::find_atom(const std::string& name) const {
    for (const auto& a : atoms) {
        if (a.name == name) return &a;
    }
    return nullptr;
}

std::optional<Interval> Lse::param_interval(const std::string& param) const {
    for (const auto& [name, iv] : constraints) {
        if (name == param) return iv;
    }
    return std::nullopt;
}

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

namespace {

// Nudges the 6-significant-digit representation of `x` one grid step in the
// requested direction when rounding moved it the wrong way.
std::string format_directed(double x, bool down) {
    std::string s = format_number(x);
    const double back = std::strtod(s.c_str(), nullptr);
    if (back == x || std::isinf(x)) return s;
    if ((down && back < x) || (!down && back > x)) return s;
    // Step by one unit in the 6th significant digit.
    const int exp10 = static_cast<int>(std::floor(std::log10(std::fabs(back == 0.0 ? x : back))));
    const double step = std::pow(10.0, exp10 - 5);
    return format_number(down ? back - step : back + step);
}

} // namespace

std::string format_number_down(double x) { return format_directed(x, true); }
std::string format_number_up(double x) { return format_directed(x, false); }

std::string render_lse(const Lse& lse) {
    auto atom_text = [&](const std::string& name) -> std::string {
        const LseAtom* atom = lse.find_atom(name);
        if (!atom) return name;
        return "line(" + atom->slope_param + ", " + atom->offset_param + ", " +
               atom->duration_param + ")";
    };
    std::string out = regex_to_string(lse.shape, atom_text);
    if (!lse.constraints.empty()) {
        out += " : ";
        bool first = true;
        for (const auto& [param, iv] : lse.constraints) {
            if (!first) out += " and ";
            first = false;
            out += param + " in [" + format_number_down(iv.lo) + ", " + format_number_up(iv.hi) + "]";
        }
    }
    return out;
}

namespace {

// Operands of a maximal chain of one associative operator, in print order.
void flatten(const RegexPtr& r, RegexNode::Kind op, std::vector<RegexPtr>& out) {
    if (r->kind == op) {
        flatten(r->left, op, out);
        flatten(r->right, op, out);
    } else {
        out.push_back(r);
    }
}

// Atom-name-independent comparison: symbols match when their parameter
// triples match. Union/concat chains compare flattened, since rendering
// does not record associativity.
bool shapes_equivalent(const Lse& a, const RegexPtr& ra, const Lse& b, const RegexPtr& rb) {
    if (ra->kind != rb->kind) return false;
    switch (ra->kind) {
        case RegexNode::Kind::Empty:
        case RegexNode::Kind::Epsilon:
            return true;
        case RegexNode::Kind::Symbol: {
            const LseAtom* aa = a.find_atom(ra->symbol);
            const LseAtom* ab = b.find_atom(rb->symbol);
            if (!aa || !ab) return aa == ab;
            return aa->slope_param == ab->slope_param && aa->offset_param == ab->offset_param &&
                   aa->duration_param == ab->duration_param;
        }
        case RegexNode::Kind::Star:
            return shapes_equivalent(a, ra->left, b, rb->left);
        case RegexNode::Kind::Union:
        case RegexNode::Kind::Concat: {
            std::vector<RegexPtr> fa, fb;
            flatten(ra, ra->kind, fa);
            flatten(rb, rb->kind, fb);
            if (fa.size() != fb.size()) return false;
            for (std::size_t i = 0; i < fa.size(); ++i) {
                if (!shapes_equivalent(a, fa[i], b, fb[i])) return false;
            }
            return true;
        }
    }
    return false;
}

} // namespace

bool lse_equivalent(const Lse& a, const Lse& b) {
    if (!shapes_equivalent(a, a.shape, b, b.shape)) return false;
    std::map<std::string, Interval> ca(a.constraints.begin(), a.constraints.end());
    std::map<std::string, Interval> cb(b.constraints.begin(), b.constraints.end());
    return ca == cb;
}

} // namespace shapemine
