#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "shapemine/abstraction.hpp"

namespace shapemine {

// Deterministic finite automaton over letter names. Transitions are a partial
// map; at most one target per (state, letter).
struct Dfa {
    std::size_t initial = 0;
    std::vector<std::map<std::string, std::size_t>> next; // state -> letter -> state
    std::vector<bool> accepting;

    std::size_t state_count() const { return next.size(); }
    bool accepts(const std::vector<std::string>& word) const;

    nlohmann::ordered_json to_json() const;
    static Dfa from_json(const nlohmann::json& j);
    std::string to_dot() const;
};

// Prefix tree acceptor of the given words. A state is accepting iff some
// training word ends there; every other state counts as rejecting during
// merging (closed-world labeling).
Dfa build_prefix_tree(const std::vector<Word>& words);

// Blue-fringe state merging over a closed-world PTA. Red states start at the
// root; blue states (successors of red) are processed in breadth-first,
// letter-alphabetical order and tried against red states in discovery order
// using merge-and-fold with determinization. A merge is valid only when the
// fold never unifies an accepting state with a rejecting one and unifies at
// least one pair of accepting states; otherwise the blue state is promoted.
// The result accepts every training word and is renumbered in BFS order.
Dfa rpni_merge(const Dfa& pta);

} // namespace shapemine
