#include "shapemine/regexgen.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace shapemine {

namespace {

using Kind = RegexNode::Kind;

// Union/concat/star with empty/epsilon absorption, to keep intermediate
// labels small during elimination.
RegexPtr fold_alt(const RegexPtr& l, const RegexPtr& r) {
    if (!l || l->kind == Kind::Empty) return r;
    if (!r || r->kind == Kind::Empty) return l;
    if (regex_equal(l, r)) return l;
    return re::alt(l, r);
}

RegexPtr fold_concat(const RegexPtr& l, const RegexPtr& r) {
    if (l->kind == Kind::Empty || r->kind == Kind::Empty) return re::empty();
    if (l->kind == Kind::Epsilon) return r;
    if (r->kind == Kind::Epsilon) return l;
    return re::concat(l, r);
}

RegexPtr fold_star(const RegexPtr& e) {
    if (e->kind == Kind::Empty || e->kind == Kind::Epsilon) return re::epsilon();
    if (e->kind == Kind::Star) return e;
    return re::star(e);
}

} // namespace

RegexPtr eliminate_states(const Dfa& dfa) {
    if (std::none_of(dfa.accepting.begin(), dfa.accepting.end(), [](bool b) { return b; })) {
        return re::empty();
    }

    // Generalized NFA over node ids; dfa states keep their ids, `source` and
    // `sink` are fresh. Absent edges are null.
    const std::size_t n = dfa.state_count();
    const std::size_t source = n, sink = n + 1;
    std::vector<std::vector<RegexPtr>> edge(n + 2, std::vector<RegexPtr>(n + 2));

    for (std::size_t s = 0; s < n; ++s) {
        for (const auto& [letter, target] : dfa.next[s]) {
            edge[s][target] = fold_alt(edge[s][target], re::symbol(letter));
        }
    }
    edge[source][dfa.initial] = re::epsilon();
    for (std::size_t s = 0; s < n; ++s) {
        if (dfa.accepting[s]) edge[s][sink] = re::epsilon();
    }

    std::vector<bool> alive(n, true);
    for (std::size_t round = 0; round < n; ++round) {
        // Next victim: minimal in-degree * out-degree (self-loops excluded),
        // ties broken by state id.
        std::size_t victim = n;
        std::size_t best = 0;
        for (std::size_t s = 0; s < n; ++s) {
            if (!alive[s]) continue;
            std::size_t in = 0, out = 0;
            for (std::size_t o = 0; o < n + 2; ++o) {
                if (o == s) continue;
                if (edge[o][s] && (o == source || o == sink || alive[o])) ++in;
                if (edge[s][o] && (o == source || o == sink || alive[o])) ++out;
            }
            const std::size_t score = in * out;
            if (victim == n || score < best) {
                victim = s;
                best = score;
            }
        }

        const RegexPtr loop = edge[victim][victim] ? fold_star(edge[victim][victim]) : re::epsilon();
        for (std::size_t p = 0; p < n + 2; ++p) {
            if (p == victim || !edge[p][victim]) continue;
            if (p < n && !alive[p]) continue;
            for (std::size_t q = 0; q < n + 2; ++q) {
                if (q == victim || !edge[victim][q]) continue;
                if (q < n && !alive[q]) continue;
                const RegexPtr detour =
                    fold_concat(edge[p][victim], fold_concat(loop, edge[victim][q]));
                edge[p][q] = fold_alt(edge[p][q], detour);
            }
        }
        alive[victim] = false;
    }

    return edge[source][sink] ? edge[source][sink] : re::empty();
}

Lse attach_constraints(const RegexPtr& shape, const std::vector<Letter>& alphabet) {
    std::map<std::string, const Letter*> by_name;
    for (const auto& letter : alphabet) by_name[letter.name] = &letter;

    Lse lse;
    lse.shape = shape;
    for (const auto& sym : regex_symbols(shape)) {
        const auto it = by_name.find(sym);
        if (it == by_name.end()) {
            throw std::invalid_argument("attach_constraints: unknown letter '" + sym + "'");
        }
        const Letter& L = *it->second;
        LseAtom atom{L.name, "a_" + L.name, "b_" + L.name, "d_" + L.name};
        lse.constraints.emplace_back(atom.slope_param, L.slope_range);
        lse.constraints.emplace_back(atom.offset_param, L.offset_range);
        lse.constraints.emplace_back(atom.duration_param, L.duration_range);
        lse.atoms.push_back(std::move(atom));
    }
    return lse;
}

} // namespace shapemine
