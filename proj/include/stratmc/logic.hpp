#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stratmc/common.hpp"

namespace stratmc {

// Formula AST.  The core connectives are truth, propositions, negation,
// disjunction, next, until, and the coalition quantifier; conjunction,
// implication, F and G are desugared at parse time (Fφ ≡ ⊤ U φ,
// Gφ ≡ ¬(⊤ U ¬φ)) and recovered as print/classification patterns.
enum class FKind { True, Prop, Not, Or, Next, Until, Coalition };

enum class FragmentTag { PROPOSITIONAL, LTL, ATL0, ATL, ATL0_STAR, ATL_STAR };

const char* fragment_name(FragmentTag t);

class Formula {
public:
    struct Node {
        FKind kind;
        std::string name;                    // Prop
        std::vector<int> players;            // Coalition; sorted, unique, 1-based
        std::shared_ptr<const Node> a, b;    // children (a only for unary)
    };

    Formula() = default;  // empty handle; only assign over it

    static Formula tru();
    static Formula fls();  // ¬⊤
    static Formula prop(const std::string& name);
    static Formula neg(Formula f);
    static Formula f_or(Formula l, Formula r);
    static Formula f_and(Formula l, Formula r);   // ¬(¬l ∨ ¬r)
    static Formula imp(Formula l, Formula r);     // ¬l ∨ r
    static Formula next(Formula f);
    static Formula until(Formula l, Formula r);
    static Formula eventually(Formula f);         // ⊤ U f
    static Formula always(Formula f);             // ¬(⊤ U ¬f)
    static Formula coalition(std::vector<int> players, Formula body);

    FKind kind() const { return n_->kind; }
    const std::string& prop_name() const { return n_->name; }
    const std::vector<int>& players() const { return n_->players; }
    Formula left() const { return Formula(n_->a); }
    Formula right() const { return Formula(n_->b); }
    Formula body() const { return Formula(n_->a); }  // Not / Next / Coalition

    bool operator==(const Formula& other) const;
    bool operator!=(const Formula& other) const { return !(*this == other); }

    // Sugar patterns (on the desugared AST).
    std::optional<Formula> match_eventually() const;  // ⊤ U x  →  x
    std::optional<Formula> match_always() const;      // ¬(⊤ U ¬x)  →  x

    explicit operator bool() const { return static_cast<bool>(n_); }

private:
    explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
    std::shared_ptr<const Node> n_;
};

// Parses the ASCII formula grammar: identifiers; `true`/`false`; `!` `&` `|`
// `->`; `X f`, `G f`, `F f`, `(f U g)` (U always explicitly parenthesized);
// `<<i,j,...>>` coalitions with `<<>>` for the empty coalition.  Precedence:
// ! and the unary temporal/coalition prefixes bind tighter than `&`, then
// `|`, then `->` (right-associative).  Propositions starting with `@` are
// reserved for internal use and rejected here.
Formula parse_formula(const std::string& text);

// Prints a formula the parser maps back to the identical AST.
std::string to_string(const Formula& f);

// Least fragment containing f.  ATL0/ATL0_STAR mean a single coalition
// quantifier at the root over an LTL body; ATL0 additionally requires the
// body to be Xφ₁, Gφ₁, or φ₁Uφ₂ with propositional operands.
FragmentTag classify(const Formula& f);

bool is_propositional(const Formula& f);
bool quantifier_free(const Formula& f);  // PROPOSITIONAL or LTL

// True iff f denotes a state property: boolean structure over propositions
// and coalition-quantified subformulas, with no bare temporal operator.
bool is_state_formula(const Formula& f);

// All ⟨⟨·⟩⟩-rooted subformulas, innermost first (post-order, left to right),
// without syntactic duplicates.
std::vector<Formula> strategic_subformulas(const Formula& f);

// Replaces every occurrence of target (syntactic equality) with the
// proposition prop.  Throws std::invalid_argument if prop already occurs in
// f or target does not occur.
Formula substitute(const Formula& f, const Formula& target, const std::string& prop);

// Proposition names occurring in f, sorted, unique.
std::vector<std::string> props_of(const Formula& f);

bool contains_prop(const Formula& f, const std::string& name);

// Evaluates a propositional formula; throws std::invalid_argument on
// temporal or coalition nodes.
bool eval_prop(const Formula& f, const std::function<bool(const std::string&)>& truth);

}  // namespace stratmc
