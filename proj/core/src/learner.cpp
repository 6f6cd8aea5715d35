#include "shapemine/learner.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace shapemine {

bool Dfa::accepts(const std::vector<std::string>& word) const {
    std::size_t state = initial;
    for (const auto& letter : word) {
        const auto it = next[state].find(letter);
        if (it == next[state].end()) return false;
        state = it->second;
    }
    return accepting[state];
}

nlohmann::ordered_json Dfa::to_json() const {
    nlohmann::ordered_json j;
    j["initial"] = initial;
    j["states"] = state_count();
    j["accepting"] = nlohmann::ordered_json::array();
    for (std::size_t s = 0; s < state_count(); ++s) {
        if (accepting[s]) j["accepting"].push_back(s);
    }
    j["transitions"] = nlohmann::ordered_json::array();
    for (std::size_t s = 0; s < state_count(); ++s) {
        for (const auto& [letter, target] : next[s]) {
            j["transitions"].push_back({{"from", s}, {"letter", letter}, {"to", target}});
        }
    }
    return j;
}

Dfa Dfa::from_json(const nlohmann::json& j) {
    Dfa d;
    d.initial = j.at("initial").get<std::size_t>();
    const auto states = j.at("states").get<std::size_t>();
    d.next.resize(states);
    d.accepting.assign(states, false);
    for (const auto& s : j.at("accepting")) d.accepting.at(s.get<std::size_t>()) = true;
    for (const auto& t : j.at("transitions")) {
        d.next.at(t.at("from").get<std::size_t>())[t.at("letter").get<std::string>()] =
            t.at("to").get<std::size_t>();
    }
    return d;
}

std::string Dfa::to_dot() const {
    std::ostringstream out;
    out << "digraph dfa {\n  rankdir=LR;\n  node [shape=circle];\n";
    out << "  start [shape=point];\n  start -> q" << initial << ";\n";
    for (std::size_t s = 0; s < state_count(); ++s) {
        if (accepting[s]) out << "  q" << s << " [shape=doublecircle];\n";
    }
    for (std::size_t s = 0; s < state_count(); ++s) {
        for (const auto& [letter, target] : next[s]) {
            out << "  q" << s << " -> q" << target << " [label=\"" << letter << "\"];\n";
        }
    }
    out << "}\n";
    return out.str();
}

Dfa build_prefix_tree(const std::vector<Word>& words) {
    if (words.empty()) throw std::invalid_argument("build_prefix_tree: no words");
    Dfa pta;
    pta.next.resize(1);
    pta.accepting.assign(1, false);
    for (const auto& word : words) {
        std::size_t state = 0;
        for (const auto& letter : word.letters) {
            const auto it = pta.next[state].find(letter);
            if (it != pta.next[state].end()) {
                state = it->second;
            } else {
                const std::size_t fresh = pta.state_count();
                pta.next[state][letter] = fresh;
                pta.next.emplace_back();
                pta.accepting.push_back(false);
                state = fresh;
            }
        }
        pta.accepting[state] = true;
    }
    return pta;
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct Merger {
    std::vector<std::map<std::string, std::size_t>> next;
    std::vector<bool> accepting;
    std::vector<bool> alive;

    // Folds state `s` (root of a tree region) into `t`. Fails when an
    // accepting state would be unified with a rejecting one; counts the
    // accept/accept unifications as merge evidence.
    bool fold(std::size_t t, std::size_t s, std::size_t& evidence) {
        if (accepting[t] != accepting[s]) return false;
        if (accepting[t]) ++evidence;
        alive[s] = false;
        for (const auto& [letter, target] : next[s]) {
            const auto it = next[t].find(letter);
            if (it == next[t].end()) {
                next[t][letter] = target;
            } else if (!fold(it->second, target, evidence)) {
                return false;
            }
        }
        return true;
    }
};

// BFS over alive states following letter-sorted edges; gives the canonical
// (breadth-first, letter-alphabetical) state order.
std::vector<std::size_t> bfs_order(const std::vector<std::map<std::string, std::size_t>>& next,
                                   std::size_t initial) {
    std::vector<bool> seen(next.size(), false);
    std::vector<std::size_t> order;
    std::deque<std::size_t> queue{initial};
    seen[initial] = true;
    while (!queue.empty()) {
        const std::size_t s = queue.front();
        queue.pop_front();
        order.push_back(s);
        for (const auto& [letter, target] : next[s]) {
            if (!seen[target]) {
                seen[target] = true;
                queue.push_back(target);
            }
        }
    }
    return order;
}

// Accepting words of a PTA (the training set), used for the soundness check.
void collect_words(const Dfa& pta, std::size_t state, std::vector<std::string>& prefix,
                   std::vector<std::vector<std::string>>& out) {
    if (pta.accepting[state]) out.push_back(prefix);
    for (const auto& [letter, target] : pta.next[state]) {
        prefix.push_back(letter);
        collect_words(pta, target, prefix, out);
        prefix.pop_back();
    }
}

} // namespace

Dfa rpni_merge(const Dfa& pta) {
    Merger m{pta.next, pta.accepting, std::vector<bool>(pta.state_count(), true)};
    const std::size_t root = pta.initial;
    std::vector<std::size_t> red{root};
    std::vector<bool> is_red(pta.state_count(), false);
    is_red[root] = true;

    while (true) {
        // First blue state in canonical order, with its unique parent edge.
        std::size_t blue = kNone, parent = kNone;
        std::string parent_letter;
        for (const std::size_t s : bfs_order(m.next, root)) {
            if (!is_red[s]) continue;
            for (const auto& [letter, target] : m.next[s]) {
                if (is_red[target]) continue;
                blue = target;
                parent = s;
                parent_letter = letter;
                break;
            }
            if (blue != kNone) break;
        }
        if (blue == kNone) break;

        bool merged = false;
        for (const std::size_t r : red) {
            Merger scratch = m;
            scratch.next[parent][parent_letter] = r;
            std::size_t evidence = 0;
            if (scratch.fold(r, blue, evidence) && evidence > 0) {
                m = std::move(scratch);
                merged = true;
                break;
            }
        }
        if (!merged) {
            red.push_back(blue);
            is_red[blue] = true;
        }
    }

    // Renumber the surviving states in BFS order.
    const auto order = bfs_order(m.next, root);
    std::vector<std::size_t> rank(pta.state_count(), kNone);
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
    Dfa out;
    out.initial = 0;
    out.next.resize(order.size());
    out.accepting.assign(order.size(), false);
    for (std::size_t i = 0; i < order.size(); ++i) {
        out.accepting[i] = m.accepting[order[i]];
        for (const auto& [letter, target] : m.next[order[i]]) {
            out.next[i][letter] = rank[target];
        }
    }

    std::vector<std::vector<std::string>> words;
    std::vector<std::string> prefix;
    collect_words(pta, pta.initial, prefix, words);
    for (const auto& w : words) {
        if (!out.accepts(w)) {
            throw std::logic_error("rpni_merge: merged automaton rejects a training word");
        }
    }
    return out;
}

} // namespace shapemine
