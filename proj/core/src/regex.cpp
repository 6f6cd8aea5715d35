#include "shapemine/regex.hpp"

#include <algorithm>

namespace shapemine {

namespace re {

namespace {
RegexPtr make(RegexNode::Kind kind, std::string sym = {}, RegexPtr l = nullptr, RegexPtr r = nullptr) {
    auto node = std::make_shared<RegexNode>();
    node->kind = kind;
    node->symbol = std::move(sym);
    node->left = std::move(l);
    node->right = std::move(r);
    return node;
}
} // namespace

RegexPtr empty() {
    static const RegexPtr e = make(RegexNode::Kind::Empty);
    return e;
}
RegexPtr epsilon() {
    static const RegexPtr e = make(RegexNode::Kind::Epsilon);
    return e;
}
RegexPtr symbol(std::string name) { return make(RegexNode::Kind::Symbol, std::move(name)); }
RegexPtr alt(RegexPtr l, RegexPtr r) {
    return make(RegexNode::Kind::Union, {}, std::move(l), std::move(r));
}
RegexPtr concat(RegexPtr l, RegexPtr r) {
    return make(RegexNode::Kind::Concat, {}, std::move(l), std::move(r));
}
RegexPtr star(RegexPtr e) { return make(RegexNode::Kind::Star, {}, std::move(e)); }

} // namespace re

bool regex_equal(const RegexPtr& a, const RegexPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case RegexNode::Kind::Empty:
        case RegexNode::Kind::Epsilon:
            return true;
        case RegexNode::Kind::Symbol:
            return a->symbol == b->symbol;
        case RegexNode::Kind::Star:
            return regex_equal(a->left, b->left);
        case RegexNode::Kind::Union:
        case RegexNode::Kind::Concat:
            return regex_equal(a->left, b->left) && regex_equal(a->right, b->right);
    }
    return false;
}

namespace {

void collect_symbols(const RegexPtr& r, std::vector<std::string>& out) {
    if (!r) return;
    if (r->kind == RegexNode::Kind::Symbol) {
        if (std::find(out.begin(), out.end(), r->symbol) == out.end()) out.push_back(r->symbol);
        return;
    }
    collect_symbols(r->left, out);
    collect_symbols(r->right, out);
}

// Precedence levels: union 0, concat 1, star 2, atom 3.
int precedence(const RegexPtr& r) {
    switch (r->kind) {
        case RegexNode::Kind::Union: return 0;
        case RegexNode::Kind::Concat: return 1;
        case RegexNode::Kind::Star: return 2;
        default: return 3;
    }
}

void print(const RegexPtr& r, const std::function<std::string(const std::string&)>& ps,
           std::string& out) {
    switch (r->kind) {
        case RegexNode::Kind::Empty:
            out += "empty";
            return;
        case RegexNode::Kind::Epsilon:
            out += "eps";
            return;
        case RegexNode::Kind::Symbol:
            out += ps ? ps(r->symbol) : r->symbol;
            return;
        case RegexNode::Kind::Star: {
            // Star operands are always parenthesized unless atomic.
            const bool parens = precedence(r->left) < 3;
            if (parens) out += "(";
            print(r->left, ps, out);
            if (parens) out += ")";
            out += "*";
            return;
        }
        case RegexNode::Kind::Union:
        case RegexNode::Kind::Concat: {
            const int prec = precedence(r);
            const char* op = r->kind == RegexNode::Kind::Union ? " + " : " . ";
            auto side = [&](const RegexPtr& child) {
                const bool parens = precedence(child) < prec;
                if (parens) out += "(";
                print(child, ps, out);
                if (parens) out += ")";
            };
            side(r->left);
            out += op;
            side(r->right);
            return;
        }
    }
}

} // namespace

std::vector<std::string> regex_symbols(const RegexPtr& r) {
    std::vector<std::string> out;
    collect_symbols(r, out);
    return out;
}

std::string regex_to_string(const RegexPtr& r,
                            const std::function<std::string(const std::string&)>& print_symbol) {
    std::string out;
    print(r, print_symbol, out);
    return out;
}

nlohmann::ordered_json regex_to_json(const RegexPtr& r) {
    nlohmann::ordered_json j;
    switch (r->kind) {
        case RegexNode::Kind::Empty:
            j["kind"] = "empty";
            break;
        case RegexNode::Kind::Epsilon:
            j["kind"] = "eps";
            break;
        case RegexNode::Kind::Symbol:
            j["kind"] = "symbol";
            j["name"] = r->symbol;
            break;
        case RegexNode::Kind::Star:
            j["kind"] = "star";
            j["of"] = regex_to_json(r->left);
            break;
        case RegexNode::Kind::Union:
            j["kind"] = "union";
            j["left"] = regex_to_json(r->left);
            j["right"] = regex_to_json(r->right);
            break;
        case RegexNode::Kind::Concat:
            j["kind"] = "concat";
            j["left"] = regex_to_json(r->left);
            j["right"] = regex_to_json(r->right);
            break;
    }
    return j;
}

namespace {

using Kind = RegexNode::Kind;

void flatten_union(const RegexPtr& r, std::vector<RegexPtr>& out) {
    if (r->kind == Kind::Union) {
        flatten_union(r->left, out);
        flatten_union(r->right, out);
    } else {
        out.push_back(r);
    }
}

RegexPtr simplify_once(const RegexPtr& r) {
    switch (r->kind) {
        case Kind::Empty:
        case Kind::Epsilon:
        case Kind::Symbol:
            return r;
        case Kind::Star: {
            const RegexPtr inner = simplify_once(r->left);
            if (inner->kind == Kind::Empty || inner->kind == Kind::Epsilon) return re::epsilon();
            if (inner->kind == Kind::Star) return inner; // (X*)* = X*
            return re::star(inner);
        }
        case Kind::Concat: {
            const RegexPtr l = simplify_once(r->left);
            const RegexPtr rr = simplify_once(r->right);
            if (l->kind == Kind::Empty || rr->kind == Kind::Empty) return re::empty();
            if (l->kind == Kind::Epsilon) return rr;
            if (rr->kind == Kind::Epsilon) return l;
            return re::concat(l, rr);
        }
        case Kind::Union: {
            std::vector<RegexPtr> alts;
            flatten_union(r, alts);
            for (auto& a : alts) a = simplify_once(a);

            std::vector<RegexPtr> kept;
            bool saw_epsilon = false;
            for (const auto& a : alts) {
                if (a->kind == Kind::Empty) continue; // X + empty = X
                if (a->kind == Kind::Epsilon) {
                    saw_epsilon = true;
                    continue;
                }
                bool dup = false;
                for (const auto& k : kept) {
                    if (regex_equal(a, k)) { // X + X = X
                        dup = true;
                        break;
                    }
                }
                if (!dup) kept.push_back(a);
            }
            // eps + X.X* = X*  (either orientation of the concatenation)
            if (saw_epsilon) {
                for (auto& k : kept) {
                    if (k->kind != Kind::Concat) continue;
                    const auto& l = k->left;
                    const auto& rr = k->right;
                    if (rr->kind == Kind::Star && regex_equal(l, rr->left)) {
                        k = rr;
                        saw_epsilon = false;
                        break;
                    }
                    if (l->kind == Kind::Star && regex_equal(rr, l->left)) {
                        k = l;
                        saw_epsilon = false;
                        break;
                    }
                }
            }
            // eps + X* = X*
            if (saw_epsilon) {
                for (const auto& k : kept) {
                    if (k->kind == Kind::Star) {
                        saw_epsilon = false;
                        break;
                    }
                }
            }

            if (kept.empty()) return saw_epsilon ? re::epsilon() : re::empty();
            RegexPtr acc = kept.front();
            for (std::size_t i = 1; i < kept.size(); ++i) acc = re::alt(acc, kept[i]);
            if (saw_epsilon) acc = re::alt(re::epsilon(), acc);
            return acc;
        }
    }
    return r;
}

} // namespace

RegexPtr simplify(const RegexPtr& r) {
    RegexPtr cur = r;
    for (int pass = 0; pass < 64; ++pass) {
        RegexPtr next = simplify_once(cur);
        if (regex_equal(next, cur)) return next;
        cur = next;
    }
    return cur;
}

} // namespace shapemine
