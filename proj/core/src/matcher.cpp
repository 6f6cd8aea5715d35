#include "shapemine/matcher.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>

#include "shapemine/errors.hpp"

namespace shapemine {

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Token {
    enum class Type { Line, Ident, Number, In, And, Eps, Empty,
                      LParen, RParen, LBracket, RBracket,
                      Comma, Colon, Plus, Dot, Star, End };
    Type type;
    std::string text;
    double value = 0.0;
    std::size_t line = 1, column = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_space();
        Token tok;
        tok.line = line_;
        tok.column = column_;
        if (pos_ >= text_.size()) {
            tok.type = Token::Type::End;
            return tok;
        }
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || is_number_start(c)) {
            return lex_number(tok);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
                ++end;
            }
            tok.text = std::string(text_.substr(pos_, end - pos_));
            advance(end - pos_);
            if (tok.text == "line") tok.type = Token::Type::Line;
            else if (tok.text == "in") tok.type = Token::Type::In;
            else if (tok.text == "and") tok.type = Token::Type::And;
            else if (tok.text == "eps") tok.type = Token::Type::Eps;
            else if (tok.text == "empty") tok.type = Token::Type::Empty;
            else tok.type = Token::Type::Ident;
            return tok;
        }
        switch (c) {
            case '(': tok.type = Token::Type::LParen; break;
            case ')': tok.type = Token::Type::RParen; break;
            case '[': tok.type = Token::Type::LBracket; break;
            case ']': tok.type = Token::Type::RBracket; break;
            case ',': tok.type = Token::Type::Comma; break;
            case ':': tok.type = Token::Type::Colon; break;
            case '+': tok.type = Token::Type::Plus; break;
            case '.': tok.type = Token::Type::Dot; break;
            case '*': tok.type = Token::Type::Star; break;
            default:
                throw ParseError("unexpected character '" + std::string(1, c) + "' at line " +
                                     std::to_string(line_) + ", column " + std::to_string(column_),
                                 line_, column_);
        }
        tok.text = std::string(1, c);
        advance(1);
        return tok;
    }

private:
    // '+', '-', '.' start a number only when digits follow; otherwise '+' is
    // the union operator and '.' is concatenation.
    bool is_number_start(char c) const {
        if (c != '+' && c != '-' && c != '.') return false;
        std::size_t p = pos_ + 1;
        if (c != '.' && p < text_.size() && text_[p] == '.') ++p;
        return p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]));
    }

    Token lex_number(Token tok) {
        const char* begin = text_.data() + pos_;
        char* end = nullptr;
        tok.value = std::strtod(begin, &end);
        tok.type = Token::Type::Number;
        tok.text.assign(begin, static_cast<std::size_t>(end - begin));
        advance(static_cast<std::size_t>(end - begin));
        return tok;
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            advance(1);
        }
    }

    void advance(std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) {
            if (text_[pos_] == '\n') {
                ++line_;
                column_ = 1;
            } else {
                ++column_;
            }
            ++pos_;
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1, column_ = 1;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) { shift(); }

    Lse parse() {
        Lse lse;
        lse.shape = parse_union(lse);
        if (cur_.type == Token::Type::Colon) {
            shift();
            parse_constraint(lse);
            while (cur_.type == Token::Type::And) {
                shift();
                parse_constraint(lse);
            }
        }
        expect(Token::Type::End, "end of input");
        return lse;
    }

private:
    RegexPtr parse_union(Lse& lse) {
        RegexPtr node = parse_concat(lse);
        while (cur_.type == Token::Type::Plus) {
            shift();
            node = re::alt(node, parse_concat(lse));
        }
        return node;
    }

    RegexPtr parse_concat(Lse& lse) {
        RegexPtr node = parse_star(lse);
        while (cur_.type == Token::Type::Dot) {
            shift();
            node = re::concat(node, parse_star(lse));
        }
        return node;
    }

    RegexPtr parse_star(Lse& lse) {
        RegexPtr node = parse_base(lse);
        while (cur_.type == Token::Type::Star) {
            shift();
            node = re::star(node);
        }
        return node;
    }

    RegexPtr parse_base(Lse& lse) {
        switch (cur_.type) {
            case Token::Type::Eps:
                shift();
                return re::epsilon();
            case Token::Type::Empty:
                shift();
                return re::empty();
            case Token::Type::LParen: {
                shift();
                RegexPtr inner = parse_union(lse);
                expect(Token::Type::RParen, "')'");
                return inner;
            }
            case Token::Type::Line: {
                shift();
                expect(Token::Type::LParen, "'('");
                const std::string pa = expect_ident();
                expect(Token::Type::Comma, "','");
                const std::string pb = expect_ident();
                expect(Token::Type::Comma, "','");
                const std::string pd = expect_ident();
                expect(Token::Type::RParen, "')'");
                return re::symbol(intern_atom(lse, pa, pb, pd));
            }
            default:
                fail("a shape (line(...), '(', eps or empty)");
        }
        return nullptr; // unreachable
    }

    // Atoms are identified by their parameter triple; repeated occurrences of
    // the same triple share one atom.
    std::string intern_atom(Lse& lse, const std::string& pa, const std::string& pb,
                            const std::string& pd) {
        for (const auto& atom : lse.atoms) {
            if (atom.slope_param == pa && atom.offset_param == pb && atom.duration_param == pd) {
                return atom.name;
            }
        }
        const std::string name = "line(" + pa + "," + pb + "," + pd + ")";
        lse.atoms.push_back({name, pa, pb, pd});
        return name;
    }

    void parse_constraint(Lse& lse) {
        const Token where = cur_;
        const std::string param = expect_ident();
        expect(Token::Type::In, "'in'");
        expect(Token::Type::LBracket, "'['");
        const double lo = expect_number();
        expect(Token::Type::Comma, "','");
        const double hi = expect_number();
        expect(Token::Type::RBracket, "']'");
        if (lo > hi) {
            throw ParseError("empty interval [" + format_number(lo) + ", " + format_number(hi) +
                                 "] for '" + param + "' at line " + std::to_string(where.line) +
                                 ", column " + std::to_string(where.column),
                             where.line, where.column);
        }
        for (auto& [name, iv] : lse.constraints) {
            if (name == param) { // conjunction: intersect
                iv.lo = std::max(iv.lo, lo);
                iv.hi = std::min(iv.hi, hi);
                return;
            }
        }
        lse.constraints.emplace_back(param, Interval{lo, hi});
    }

    std::string expect_ident() {
        if (cur_.type != Token::Type::Ident) fail("an identifier");
        std::string text = cur_.text;
        shift();
        return text;
    }

    double expect_number() {
        if (cur_.type != Token::Type::Number) fail("a number");
        const double v = cur_.value;
        shift();
        return v;
    }

    void expect(Token::Type type, const char* what) {
        if (cur_.type != type) fail(what);
        shift();
    }

    [[noreturn]] void fail(const char* expected) {
        const std::string got = cur_.type == Token::Type::End ? "end of input" : "'" + cur_.text + "'";
        throw ParseError("expected " + std::string(expected) + ", got " + got + " at line " +
                             std::to_string(cur_.line) + ", column " + std::to_string(cur_.column),
                         cur_.line, cur_.column);
    }

    void shift() { cur_ = lexer_.next(); }

    Lexer lexer_;
    Token cur_;
};

} // namespace

Lse parse_lse(std::string_view text) { return Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Box-constrained least squares
// ---------------------------------------------------------------------------

ConstrainedFit constrained_line_fit(const Signal& sig, const PrefixSums& ps, std::size_t first,
                                    std::size_t last, const Interval& slope_box,
                                    const Interval& offset_box) {
    if (first > last || last >= sig.size()) {
        throw std::invalid_argument("constrained_line_fit: invalid range");
    }
    if (!slope_box.valid() || !offset_box.valid()) {
        return {0.0, 0.0, std::numeric_limits<double>::infinity()};
    }

    if (first == last) {
        ConstrainedFit fit;
        fit.slope = slope_box.clamp(0.0);
        fit.offset = offset_box.clamp(sig[first].v);
        const double r = sig[first].v - fit.offset;
        fit.mse = r * r;
        return fit;
    }

    const auto s = ps.range(first, last);
    const double n = static_cast<double>(s.n);
    const double t0 = sig[first].t;
    const double st = s.t - n * t0;
    const double st2 = s.t2 - 2.0 * t0 * s.t + n * t0 * t0;
    const double stv = s.tv - t0 * s.v;

    const auto mse_at = [&](double a, double b) {
        const double sse = s.v2 - 2.0 * a * stv - 2.0 * b * s.v + a * a * st2 + 2.0 * a * b * st +
                           n * b * b;
        return std::max(sse, 0.0) / n;
    };

    const LineFit ols = line_fit(sig, first, last, ps);
    if (slope_box.contains(ols.slope) && offset_box.contains(ols.offset)) {
        return {ols.slope, ols.offset, ols.mse};
    }

    // The constrained optimum of a convex quadratic lies on an active bound:
    // evaluate each finite edge's 1-D minimum clamped into the box.
    ConstrainedFit best{0.0, 0.0, std::numeric_limits<double>::infinity()};
    const auto consider = [&](double a, double b) {
        const double m = mse_at(a, b);
        if (m < best.mse) best = {a, b, m};
    };
    for (const double a : {slope_box.lo, slope_box.hi}) {
        if (!std::isfinite(a)) continue;
        consider(a, offset_box.clamp((s.v - a * st) / n));
    }
    for (const double b : {offset_box.lo, offset_box.hi}) {
        if (!std::isfinite(b)) continue;
        consider(slope_box.clamp((stv - b * st) / st2), b);
    }
    if (!std::isfinite(best.mse)) {
        // Both boxes unbounded on the relevant sides; the OLS point was only
        // outside because one box is a half-line. Clamp it directly.
        consider(slope_box.clamp(ols.slope), offset_box.clamp(ols.offset));
    }
    return best;
}

// ---------------------------------------------------------------------------
// Glushkov position automaton and the cut-point DP
// ---------------------------------------------------------------------------

namespace {

struct PositionAutomaton {
    std::vector<std::string> atom_of_position; // 1-based positions; index 0 unused
    std::vector<std::set<std::size_t>> follow; // successors of each position
    std::set<std::size_t> first;
    std::set<std::size_t> last;
    bool nullable = false;
};

struct GlushkovBuild {
    PositionAutomaton aut;

    struct Part {
        bool nullable;
        std::set<std::size_t> first, last;
    };

    Part build(const RegexPtr& r) {
        switch (r->kind) {
            case RegexNode::Kind::Empty:
                return {false, {}, {}};
            case RegexNode::Kind::Epsilon:
                return {true, {}, {}};
            case RegexNode::Kind::Symbol: {
                aut.atom_of_position.push_back(r->symbol);
                aut.follow.emplace_back();
                const std::size_t p = aut.atom_of_position.size() - 1;
                return {false, {p}, {p}};
            }
            case RegexNode::Kind::Union: {
                Part l = build(r->left), rr = build(r->right);
                l.nullable = l.nullable || rr.nullable;
                l.first.insert(rr.first.begin(), rr.first.end());
                l.last.insert(rr.last.begin(), rr.last.end());
                return l;
            }
            case RegexNode::Kind::Concat: {
                Part l = build(r->left), rr = build(r->right);
                for (const auto p : l.last) {
                    aut.follow[p].insert(rr.first.begin(), rr.first.end());
                }
                Part out;
                out.nullable = l.nullable && rr.nullable;
                out.first = l.first;
                if (l.nullable) out.first.insert(rr.first.begin(), rr.first.end());
                out.last = rr.last;
                if (rr.nullable) out.last.insert(l.last.begin(), l.last.end());
                return out;
            }
            case RegexNode::Kind::Star: {
                Part e = build(r->left);
                for (const auto p : e.last) {
                    aut.follow[p].insert(e.first.begin(), e.first.end());
                }
                e.nullable = true;
                return e;
            }
        }
        return {false, {}, {}};
    }
};

PositionAutomaton build_positions(const RegexPtr& shape) {
    GlushkovBuild g;
    g.aut.atom_of_position.push_back(""); // position 0 = start marker
    g.aut.follow.emplace_back();
    const auto top = g.build(shape);
    g.aut.first = top.first;
    g.aut.last = top.last;
    g.aut.nullable = top.nullable;
    return g.aut;
}

struct AtomBox {
    Interval slope, offset, duration;
};

} // namespace

MatchResult noisy_match(const Signal& sig, const Lse& lse, double nu) {
    if (nu < 0.0) throw std::invalid_argument("noisy_match: nu must be >= 0");
    if (sig.empty()) throw std::invalid_argument("noisy_match: empty signal");

    const PositionAutomaton aut = build_positions(lse.shape);
    const std::size_t positions = aut.atom_of_position.size(); // includes start
    const std::size_t n = sig.size();
    const PrefixSums ps(sig);

    // Boxes per distinct atom, from the constraint table.
    std::vector<AtomBox> box_of_atom;
    std::vector<std::size_t> atom_id_of_position(positions, 0);
    {
        std::map<std::string, std::size_t> atom_ids;
        for (std::size_t p = 1; p < positions; ++p) {
            const std::string& atom_name = aut.atom_of_position[p];
            auto it = atom_ids.find(atom_name);
            if (it == atom_ids.end()) {
                const LseAtom* atom = lse.find_atom(atom_name);
                if (!atom) {
                    throw std::invalid_argument("noisy_match: atom '" + atom_name +
                                                "' has no definition");
                }
                AtomBox b;
                if (auto iv = lse.param_interval(atom->slope_param)) b.slope = *iv;
                if (auto iv = lse.param_interval(atom->offset_param)) b.offset = *iv;
                if (auto iv = lse.param_interval(atom->duration_param)) b.duration = *iv;
                it = atom_ids.emplace(atom_name, box_of_atom.size()).first;
                box_of_atom.push_back(b);
            }
            atom_id_of_position[p] = it->second;
        }
    }
    const std::size_t atom_count = box_of_atom.size();

    // Feasible segment ends for (start sample, atom), computed lazily. The
    // duration interval bounds the scan window.
    std::vector<std::optional<std::vector<std::size_t>>> feasible(n * std::max<std::size_t>(atom_count, 1));
    const auto feasible_ends = [&](std::size_t i, std::size_t atom_id) -> const std::vector<std::size_t>& {
        auto& slot = feasible[i * atom_count + atom_id];
        if (!slot) {
            std::vector<std::size_t> ends;
            const AtomBox& b = box_of_atom[atom_id];
            for (std::size_t j = i; j < n; ++j) {
                const double duration = sig[j].t - sig[i].t;
                if (duration > b.duration.hi) break;
                if (!b.duration.contains(duration)) continue;
                if (constrained_line_fit(sig, ps, i, j, b.slope, b.offset).mse <= nu) {
                    ends.push_back(j);
                }
            }
            slot = std::move(ends);
        }
        return *slot;
    };

    // Reachability over (boundary sample, position); position 0 is the start
    // state. Edges never decrease the boundary index.
    const auto state_id = [&](std::size_t i, std::size_t p) { return i * positions + p; };
    std::vector<bool> reached(n * positions, false);
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> parent(n * positions, kNone);

    std::deque<std::size_t> queue;
    reached[state_id(0, 0)] = true;
    queue.push_back(state_id(0, 0));
    while (!queue.empty()) {
        const std::size_t id = queue.front();
        queue.pop_front();
        const std::size_t i = id / positions;
        const std::size_t p = id % positions;
        const auto& successors = p == 0 ? aut.first : aut.follow[p];
        for (const std::size_t q : successors) {
            for (const std::size_t j : feasible_ends(i, atom_id_of_position[q])) {
                const std::size_t next = state_id(j, q);
                if (!reached[next]) {
                    reached[next] = true;
                    parent[next] = id;
                    queue.push_back(next);
                }
            }
        }
    }

    MatchResult result;
    std::size_t goal = kNone;
    for (const std::size_t p : aut.last) {
        if (reached[state_id(n - 1, p)]) {
            goal = state_id(n - 1, p);
            break;
        }
    }
    if (goal == kNone) return result;

    result.matched = true;
    std::vector<std::size_t> path{goal};
    while (parent[path.back()] != kNone) path.push_back(parent[path.back()]);
    std::reverse(path.begin(), path.end());
    for (std::size_t step = 1; step < path.size(); ++step) {
        const std::size_t i = path[step - 1] / positions;
        const std::size_t j = path[step] / positions;
        const std::size_t q = path[step] % positions;
        const AtomBox& b = box_of_atom[atom_id_of_position[q]];
        const ConstrainedFit fit = constrained_line_fit(sig, ps, i, j, b.slope, b.offset);
        result.segments.push_back({i, j, aut.atom_of_position[q], fit.slope, fit.offset,
                                   sig[j].t - sig[i].t, fit.mse});
    }
    return result;
}

} // namespace shapemine
