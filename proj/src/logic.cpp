#include "stratmc/logic.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace stratmc {

const char* fragment_name(FragmentTag t) {
    switch (t) {
        case FragmentTag::PROPOSITIONAL: return "propositional";
        case FragmentTag::LTL: return "ltl";
        case FragmentTag::ATL0: return "atl0";
        case FragmentTag::ATL: return "atl";
        case FragmentTag::ATL0_STAR: return "atl0*";
        case FragmentTag::ATL_STAR: return "atl*";
    }
    return "?";
}

namespace {
using Node = Formula::Node;
std::shared_ptr<const Node> make(FKind k, std::shared_ptr<const Node> a = nullptr,
                                 std::shared_ptr<const Node> b = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}
}  // namespace

Formula Formula::tru() {
    static const Formula t{make(FKind::True)};
    return t;
}
Formula Formula::fls() { return neg(tru()); }
Formula Formula::prop(const std::string& name) {
    auto n = std::make_shared<Node>();
    n->kind = FKind::Prop;
    n->name = name;
    return Formula(std::move(n));
}
Formula Formula::neg(Formula f) { return Formula(make(FKind::Not, f.n_)); }
Formula Formula::f_or(Formula l, Formula r) { return Formula(make(FKind::Or, l.n_, r.n_)); }
Formula Formula::f_and(Formula l, Formula r) { return neg(f_or(neg(l), neg(r))); }
Formula Formula::imp(Formula l, Formula r) { return f_or(neg(l), r); }
Formula Formula::next(Formula f) { return Formula(make(FKind::Next, f.n_)); }
Formula Formula::until(Formula l, Formula r) { return Formula(make(FKind::Until, l.n_, r.n_)); }
Formula Formula::eventually(Formula f) { return until(tru(), f); }
Formula Formula::always(Formula f) { return neg(until(tru(), neg(f))); }
Formula Formula::coalition(std::vector<int> players, Formula body) {
    std::sort(players.begin(), players.end());
    players.erase(std::unique(players.begin(), players.end()), players.end());
    auto n = std::make_shared<Node>();
    n->kind = FKind::Coalition;
    n->players = std::move(players);
    n->a = body.n_;
    return Formula(std::move(n));
}

bool Formula::operator==(const Formula& other) const {
    const Node *x = n_.get(), *y = other.n_.get();
    if (x == y) return true;
    if (!x || !y || x->kind != y->kind) return false;
    switch (x->kind) {
        case FKind::True: return true;
        case FKind::Prop: return x->name == y->name;
        case FKind::Not:
        case FKind::Next: return Formula(x->a) == Formula(y->a);
        case FKind::Or:
        case FKind::Until:
            return Formula(x->a) == Formula(y->a) && Formula(x->b) == Formula(y->b);
        case FKind::Coalition:
            return x->players == y->players && Formula(x->a) == Formula(y->a);
    }
    return false;
}

std::optional<Formula> Formula::match_eventually() const {
    if (kind() == FKind::Until && left().kind() == FKind::True) return right();
    return std::nullopt;
}

std::optional<Formula> Formula::match_always() const {
    if (kind() != FKind::Not) return std::nullopt;
    Formula u = body();
    if (u.kind() != FKind::Until || u.left().kind() != FKind::True) return std::nullopt;
    if (u.right().kind() != FKind::Not) return std::nullopt;
    return u.right().body();
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct FTok {
    enum Kind { Ident, Int, Bang, Amp, Bar, Arrow, LPar, RPar, CoalOpen, CoalClose, Comma, End };
    Kind kind;
    std::string text;
    int col;
};

std::vector<FTok> lex_formula(const std::string& s) {
    std::vector<FTok> out;
    size_t i = 0;
    auto push = [&](FTok::Kind k, std::string t, size_t at) {
        out.push_back({k, std::move(t), static_cast<int>(at) + 1});
    };
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '!') { push(FTok::Bang, "!", i); ++i; continue; }
        if (c == '&') { push(FTok::Amp, "&", i); ++i; continue; }
        if (c == '|') { push(FTok::Bar, "|", i); ++i; continue; }
        if (c == '(') { push(FTok::LPar, "(", i); ++i; continue; }
        if (c == ')') { push(FTok::RPar, ")", i); ++i; continue; }
        if (c == ',') { push(FTok::Comma, ",", i); ++i; continue; }
        if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
            push(FTok::Arrow, "->", i);
            i += 2;
            continue;
        }
        if (c == '<' && i + 1 < s.size() && s[i + 1] == '<') {
            push(FTok::CoalOpen, "<<", i);
            i += 2;
            continue;
        }
        if (c == '>' && i + 1 < s.size() && s[i + 1] == '>') {
            push(FTok::CoalClose, ">>", i);
            i += 2;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            push(FTok::Int, s.substr(i, j - i), i);
            i = j;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '@') {
            size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) ||
                                    s[j] == '_' || s[j] == '@'))
                ++j;
            push(FTok::Ident, s.substr(i, j - i), i);
            i = j;
            continue;
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "'", 1,
                         static_cast<int>(i) + 1);
    }
    push(FTok::End, "", s.size());
    return out;
}

class FormulaParser {
public:
    explicit FormulaParser(const std::string& text) : toks_(lex_formula(text)) {}

    Formula parse() {
        if (peek().kind == FTok::End) throw err("empty formula");
        Formula f = parse_imp();
        if (peek().kind != FTok::End) throw err("unexpected token '" + peek().text + "'");
        return f;
    }

private:
    const FTok& peek() const { return toks_[pos_]; }
    const FTok& take() { return toks_[pos_++]; }
    ParseError err(const std::string& msg) const { return ParseError(msg, 1, peek().col); }

    Formula parse_imp() {
        Formula l = parse_or();
        if (peek().kind == FTok::Arrow) {
            take();
            return Formula::imp(l, parse_imp());  // right-associative
        }
        return l;
    }
    Formula parse_or() {
        Formula f = parse_and();
        while (peek().kind == FTok::Bar) {
            take();
            f = Formula::f_or(f, parse_and());
        }
        return f;
    }
    Formula parse_and() {
        Formula f = parse_unary();
        while (peek().kind == FTok::Amp) {
            take();
            f = Formula::f_and(f, parse_unary());
        }
        return f;
    }
    Formula parse_unary() {
        const FTok& t = peek();
        if (t.kind == FTok::Bang) {
            take();
            return Formula::neg(parse_unary());
        }
        if (t.kind == FTok::Ident && t.text.size() == 1 &&
            (t.text == "X" || t.text == "G" || t.text == "F")) {
            char op = t.text[0];
            take();
            Formula arg = parse_unary();
            if (op == 'X') return Formula::next(arg);
            if (op == 'G') return Formula::always(arg);
            return Formula::eventually(arg);
        }
        if (t.kind == FTok::CoalOpen) {
            take();
            std::vector<int> players;
            if (peek().kind != FTok::CoalClose) {
                while (true) {
                    if (peek().kind != FTok::Int)
                        throw err("expected player index in coalition");
                    players.push_back(std::stoi(take().text));
                    if (players.back() < 1) throw err("player indices start at 1");
                    if (peek().kind == FTok::Comma) {
                        take();
                        continue;
                    }
                    break;
                }
            }
            if (peek().kind != FTok::CoalClose) throw err("expected '>>'");
            take();
            return Formula::coalition(std::move(players), parse_unary());
        }
        return parse_atom();
    }
    Formula parse_atom() {
        const FTok& t = peek();
        if (t.kind == FTok::LPar) {
            take();
            Formula f = parse_imp();
            if (peek().kind == FTok::Ident && peek().text == "U") {
                take();
                Formula g = parse_imp();
                if (peek().kind != FTok::RPar) throw err("expected ')' after until");
                take();
                return Formula::until(f, g);
            }
            if (peek().kind != FTok::RPar) throw err("expected ')'");
            take();
            return f;
        }
        if (t.kind == FTok::Ident || t.kind == FTok::Int) {
            std::string name = take().text;
            if (name == "true") return Formula::tru();
            if (name == "false") return Formula::fls();
            if (name == "U" || name == "X" || name == "G" || name == "F")
                throw ParseError("'" + name + "' is a reserved operator", 1, t.col);
            if (name[0] == '@')
                throw ParseError("propositions starting with '@' are reserved", 1, t.col);
            return Formula::prop(name);
        }
        throw err(t.kind == FTok::End ? "unexpected end of formula"
                                      : "unexpected token '" + t.text + "'");
    }

    std::vector<FTok> toks_;
    size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(const std::string& text) { return FormulaParser(text).parse(); }

// ---------------------------------------------------------------------------
// Printer

namespace {

// Precedence levels for printing: 0 atoms (incl. parenthesized U), 1 unary
// prefixes, 2 &, 3 |, 4 ->.
void print_rec(std::ostringstream& os, const Formula& f, int level);

// a & b  ≡  ¬(¬a ∨ ¬b)
bool match_and(const Formula& f, Formula& l, Formula& r) {
    if (f.kind() != FKind::Not) return false;
    Formula o = f.body();
    if (o.kind() != FKind::Or || o.left().kind() != FKind::Not ||
        o.right().kind() != FKind::Not)
        return false;
    l = o.left().body();
    r = o.right().body();
    return true;
}

void print_rec(std::ostringstream& os, const Formula& f, int level) {
    // false ≡ ¬⊤
    if (f.kind() == FKind::Not && f.body().kind() == FKind::True) {
        os << "false";
        return;
    }
    if (auto g = f.match_always()) {
        if (1 > level) {
            os << "(G ";
            print_rec(os, *g, 1);
            os << ")";
        } else {
            os << "G ";
            print_rec(os, *g, 1);
        }
        return;
    }
    Formula l, r;
    if (match_and(f, l, r)) {
        if (2 > level) os << "(";
        print_rec(os, l, 2);
        os << " & ";
        print_rec(os, r, 1);
        if (2 > level) os << ")";
        return;
    }
    switch (f.kind()) {
        case FKind::True: os << "true"; return;
        case FKind::Prop: os << f.prop_name(); return;
        case FKind::Not:
            if (1 > level) os << "(";
            os << "!";
            print_rec(os, f.body(), 1);
            if (1 > level) os << ")";
            return;
        case FKind::Next:
            if (1 > level) os << "(";
            os << "X ";
            print_rec(os, f.body(), 1);
            if (1 > level) os << ")";
            return;
        case FKind::Or:
            if (3 > level) os << "(";
            print_rec(os, f.left(), 3);
            os << " | ";
            print_rec(os, f.right(), 2);
            if (3 > level) os << ")";
            return;
        case FKind::Until:
            if (auto g = f.match_eventually()) {
                if (1 > level) os << "(";
                os << "F ";
                print_rec(os, *g, 1);
                if (1 > level) os << ")";
                return;
            }
            os << "(";
            print_rec(os, f.left(), 4);
            os << " U ";
            print_rec(os, f.right(), 4);
            os << ")";
            return;
        case FKind::Coalition: {
            if (1 > level) os << "(";
            os << "<<";
            const auto& ps = f.players();
            for (size_t i = 0; i < ps.size(); ++i) os << (i ? "," : "") << ps[i];
            os << ">> ";
            print_rec(os, f.body(), 1);
            if (1 > level) os << ")";
            return;
        }
    }
}

}  // namespace

std::string to_string(const Formula& f) {
    std::ostringstream os;
    print_rec(os, f, 4);
    return os.str();
}

// ---------------------------------------------------------------------------
// Classification

bool is_propositional(const Formula& f) {
    switch (f.kind()) {
        case FKind::True:
        case FKind::Prop: return true;
        case FKind::Not: return is_propositional(f.body());
        case FKind::Or: return is_propositional(f.left()) && is_propositional(f.right());
        default: return false;
    }
}

bool quantifier_free(const Formula& f) {
    switch (f.kind()) {
        case FKind::True:
        case FKind::Prop: return true;
        case FKind::Not:
        case FKind::Next: return quantifier_free(f.body());
        case FKind::Or:
        case FKind::Until: return quantifier_free(f.left()) && quantifier_free(f.right());
        case FKind::Coalition: return false;
    }
    return false;
}

bool is_state_formula(const Formula& f) {
    switch (f.kind()) {
        case FKind::True:
        case FKind::Prop:
        case FKind::Coalition: return true;
        case FKind::Not: return is_state_formula(f.body());
        case FKind::Or: return is_state_formula(f.left()) && is_state_formula(f.right());
        case FKind::Next:
        case FKind::Until: return false;
    }
    return false;
}

namespace {

// Is f a state formula of ATL: boolean combinations of propositions and
// ⟨⟨A⟩⟩Xφ / ⟨⟨A⟩⟩Gφ / ⟨⟨A⟩⟩(φ₁Uφ₂) over ATL state formulas.
bool is_atl_state(const Formula& f) {
    switch (f.kind()) {
        case FKind::True:
        case FKind::Prop: return true;
        case FKind::Not: return is_atl_state(f.body());
        case FKind::Or: return is_atl_state(f.left()) && is_atl_state(f.right());
        case FKind::Next:
        case FKind::Until: return false;  // bare path formula
        case FKind::Coalition: {
            Formula b = f.body();
            if (auto g = b.match_always()) return is_atl_state(*g);
            if (b.kind() == FKind::Next) return is_atl_state(b.body());
            if (b.kind() == FKind::Until)
                return is_atl_state(b.left()) && is_atl_state(b.right());
            return false;
        }
    }
    return false;
}

}  // namespace

FragmentTag classify(const Formula& f) {
    if (is_propositional(f)) return FragmentTag::PROPOSITIONAL;
    if (quantifier_free(f)) return FragmentTag::LTL;
    if (f.kind() == FKind::Coalition && quantifier_free(f.body())) {
        Formula b = f.body();
        if (auto g = b.match_always()) {
            if (is_propositional(*g)) return FragmentTag::ATL0;
        } else if (b.kind() == FKind::Next) {
            if (is_propositional(b.body())) return FragmentTag::ATL0;
        } else if (b.kind() == FKind::Until) {
            if (is_propositional(b.left()) && is_propositional(b.right()))
                return FragmentTag::ATL0;
        }
        return FragmentTag::ATL0_STAR;
    }
    if (is_atl_state(f)) return FragmentTag::ATL;
    return FragmentTag::ATL_STAR;
}

// ---------------------------------------------------------------------------
// Structural operations

namespace {

void collect_strategic(const Formula& f, std::vector<Formula>& out) {
    switch (f.kind()) {
        case FKind::True:
        case FKind::Prop: return;
        case FKind::Not:
        case FKind::Next: collect_strategic(f.body(), out); return;
        case FKind::Or:
        case FKind::Until:
            collect_strategic(f.left(), out);
            collect_strategic(f.right(), out);
            return;
        case FKind::Coalition:
            collect_strategic(f.body(), out);
            for (const auto& g : out)
                if (g == f) return;
            out.push_back(f);
            return;
    }
}

}  // namespace

std::vector<Formula> strategic_subformulas(const Formula& f) {
    std::vector<Formula> out;
    collect_strategic(f, out);
    return out;
}

bool contains_prop(const Formula& f, const std::string& name) {
    switch (f.kind()) {
        case FKind::True: return false;
        case FKind::Prop: return f.prop_name() == name;
        case FKind::Not:
        case FKind::Next:
        case FKind::Coalition: return contains_prop(f.body(), name);
        case FKind::Or:
        case FKind::Until:
            return contains_prop(f.left(), name) || contains_prop(f.right(), name);
    }
    return false;
}

namespace {

Formula substitute_rec(const Formula& f, const Formula& target, const Formula& repl,
                       bool& hit) {
    if (f == target) {
        hit = true;
        return repl;
    }
    switch (f.kind()) {
        case FKind::True:
        case FKind::Prop: return f;
        case FKind::Not: return Formula::neg(substitute_rec(f.body(), target, repl, hit));
        case FKind::Next: return Formula::next(substitute_rec(f.body(), target, repl, hit));
        case FKind::Or:
            return Formula::f_or(substitute_rec(f.left(), target, repl, hit),
                                 substitute_rec(f.right(), target, repl, hit));
        case FKind::Until:
            return Formula::until(substitute_rec(f.left(), target, repl, hit),
                                  substitute_rec(f.right(), target, repl, hit));
        case FKind::Coalition:
            return Formula::coalition(f.players(),
                                      substitute_rec(f.body(), target, repl, hit));
    }
    return f;
}

}  // namespace

Formula substitute(const Formula& f, const Formula& target, const std::string& prop) {
    if (contains_prop(f, prop))
        throw std::invalid_argument("proposition " + prop + " already occurs in formula");
    bool hit = false;
    Formula out = substitute_rec(f, target, Formula::prop(prop), hit);
    if (!hit) throw std::invalid_argument("substitution target does not occur in formula");
    return out;
}

namespace {

void collect_props(const Formula& f, std::set<std::string>& out) {
    switch (f.kind()) {
        case FKind::True: return;
        case FKind::Prop: out.insert(f.prop_name()); return;
        case FKind::Not:
        case FKind::Next:
        case FKind::Coalition: collect_props(f.body(), out); return;
        case FKind::Or:
        case FKind::Until:
            collect_props(f.left(), out);
            collect_props(f.right(), out);
            return;
    }
}

}  // namespace

std::vector<std::string> props_of(const Formula& f) {
    std::set<std::string> s;
    collect_props(f, s);
    return {s.begin(), s.end()};
}

bool eval_prop(const Formula& f, const std::function<bool(const std::string&)>& truth) {
    switch (f.kind()) {
        case FKind::True: return true;
        case FKind::Prop: return truth(f.prop_name());
        case FKind::Not: return !eval_prop(f.body(), truth);
        case FKind::Or: return eval_prop(f.left(), truth) || eval_prop(f.right(), truth);
        default:
            throw std::invalid_argument("eval_prop: formula is not propositional: " +
                                        to_string(f));
    }
}

}  // namespace stratmc
