#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace shapemine {

struct RegexNode;
using RegexPtr = std::shared_ptr<const RegexNode>;

// Immutable regular-expression AST over symbol names.
struct RegexNode {
    enum class Kind { Empty, Epsilon, Symbol, Union, Concat, Star };

    Kind kind;
    std::string symbol;    // Kind::Symbol only
    RegexPtr left, right;  // Union/Concat: both; Star: left only
};

namespace re {

RegexPtr empty();
RegexPtr epsilon();
RegexPtr symbol(std::string name);
RegexPtr alt(RegexPtr l, RegexPtr r);     // union
RegexPtr concat(RegexPtr l, RegexPtr r);
RegexPtr star(RegexPtr e);

} // namespace re

bool regex_equal(const RegexPtr& a, const RegexPtr& b);

// Symbols in order of first appearance (left to right).
std::vector<std::string> regex_symbols(const RegexPtr& r);

// Concrete syntax with precedence star > concat (".") > union ("+");
// symbols are printed through `print_symbol` (defaults to the raw name).
std::string regex_to_string(const RegexPtr& r,
                            const std::function<std::string(const std::string&)>& print_symbol = {});

nlohmann::ordered_json regex_to_json(const RegexPtr& r);

// Language-preserving rewrites applied to fixpoint:
//   X.eps = X, X+X = X, X+empty = X, X.empty = empty,
//   (X*)* = X*, eps + X.X* = X*, star(eps) = eps.
RegexPtr simplify(const RegexPtr& r);

} // namespace shapemine
