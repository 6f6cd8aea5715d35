#pragma once

#include <vector>

#include "shapemine/abstraction.hpp"
#include "shapemine/learner.hpp"
#include "shapemine/lse.hpp"
#include "shapemine/regex.hpp"

namespace shapemine {

// DFA -> regular expression by state elimination: fresh initial/final states
// are attached with epsilon transitions, then interior states are removed in
// ascending (in-degree * out-degree) order (ties by state id), rerouting
// paths through Concat/Star/Union labels. The result's language equals the
// automaton's; a DFA with no accepting state yields Empty.
RegexPtr eliminate_states(const Dfa& dfa);

// Pairs a regex over letter names with each letter's bounding-cube intervals,
// producing an LSE whose atom for letter X has parameters a_X, b_X, d_X.
// Throws std::invalid_argument when the regex mentions an unknown letter.
Lse attach_constraints(const RegexPtr& shape, const std::vector<Letter>& alphabet);

} // namespace shapemine
