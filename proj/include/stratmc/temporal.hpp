#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stratmc/logic.hpp"
#include "stratmc/product.hpp"

namespace stratmc {

// Universal path objective discharged on a product system.  The cheap
// shapes carry propositional operands evaluated against the labeling; the
// LTL variant covers arbitrary quantifier-free bodies.
enum class ObjKind { NEXT, GLOBALLY, UNTIL, LTL };

struct Objective {
    ObjKind kind;
    Formula arg1;  // NEXT goal / GLOBALLY safe / UNTIL maintain / LTL body
    Formula arg2;  // UNTIL goal, unused otherwise

    static Objective next(Formula goal);
    static Objective globally(Formula safe);
    static Objective until(Formula maintain, Formula goal);
    static Objective ltl(Formula body);
};

// Shape-matches a quantifier-free path body into NEXT/GLOBALLY/UNTIL when
// the operands are propositional, else wraps it as LTL.
Objective objective_from_body(const Formula& body);

// Edge-labeled Büchi automaton over assignments of `props` (bit i of a
// letter = truth of props[i]).  State 0 is the sole initial state and has
// no incoming edges; it consumes the first letter of the word.
struct BuchiAutomaton {
    std::vector<std::string> props;
    int num_states = 0;
    std::vector<std::vector<std::vector<int>>> delta;  // [state][letter] -> sorted targets
    std::vector<char> accepting;
};

// Tableau construction: accepts exactly the infinite assignment sequences
// satisfying f.  Throws std::invalid_argument on strategic quantifiers.
BuchiAutomaton ltl_to_buchi(const Formula& f);

// Per-product-state result of the universal path property for the
// NEXT/GLOBALLY/UNTIL shapes (PTIME labeling).  Throws std::invalid_argument
// on an LTL objective or an unknown proposition.
std::vector<char> check_universal_objective(const ProductSystem& ps, const Labeling& lab,
                                            const Objective& obj);

// For each initial product state: true iff no path from it satisfies !f.
// Realized as emptiness of ps x ltl_to_buchi(!f).
std::map<int, bool> check_universal_ltl(const ProductSystem& ps, const Labeling& lab,
                                        const Formula& f);

// Accepting lasso of ps x b: stem then cycle of (product state, automaton
// state) pairs.  The cycle's first pair is re-entered after its last pair;
// some pair on the cycle has an accepting automaton state.
struct Lasso {
    std::vector<std::pair<int, int>> stem;
    std::vector<std::pair<int, int>> cycle;
};

// Nested depth-first search from the product's initial states, visiting
// product successors in state order and automaton successors in state
// order; the returned witness is deterministic.
std::optional<Lasso> exists_lasso(const ProductSystem& ps, const Labeling& lab,
                                  const BuchiAutomaton& b);

// Restriction of exists_lasso to a single initial product state.
std::optional<Lasso> exists_lasso_from(const ProductSystem& ps, const Labeling& lab,
                                       const BuchiAutomaton& b, int initial);

// Game-state projection: `lasso: s0 s1 [ s2 s3 ]`.
std::string format_lasso(const ProductSystem& ps, const Lasso& l);

}  // namespace stratmc
