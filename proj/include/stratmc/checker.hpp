#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stratmc/common.hpp"
#include "stratmc/game_model.hpp"
#include "stratmc/logic.hpp"
#include "stratmc/product.hpp"
#include "stratmc/search.hpp"
#include "stratmc/strategy.hpp"

namespace stratmc {

// How coalition members observe the model: Auto follows the model
// (partitioned models are treated as incomplete information), the explicit
// stances override it.  Requesting Complete on a partitioned model is an
// error; requesting Incomplete on an unpartitioned model is allowed and
// only disables complete-information shortcuts.
enum class InfoMode { Auto, Complete, Incomplete };

// Strategy class quantified over: memoryless transducers, transducers with
// at most k memory states, finite-memory transducers of unbounded size
// (decided by iterative deepening up to a cap, Unknown beyond it), or
// perfect recall (decidable only in specific cases; see check_quantified).
enum class MemoryMode { Memoryless, Bounded, Finite, PerfectRecall };

struct SemanticsSpec {
    InfoMode info = InfoMode::Auto;
    MemoryMode memory = MemoryMode::Bounded;
    int k = 1;          // memory bound when memory == Bounded
    int cap = 0;        // deepening cap when memory == Finite (0 = unset)
    int k_ceiling = 8;  // largest memory bound any query may request
    SearchEngine engine = SearchEngine::Auto;
    // Complete-information one-shot queries (X/G/U with propositional
    // operands) have memoryless winners whenever they have winners at all,
    // so Bounded checks with k > 1 may search k = 1 and pad the witness.
    bool collapse_shortcut = true;
};

// The information stance actually applied to this model.  Throws
// std::invalid_argument for Complete on a partitioned model.
bool resolved_incomplete(const GameModel& m, const SemanticsSpec& sem);

// Short display name, e.g. "Ir", "iF_2", "IF", "iR" (capital I = complete
// information; r / F_k / F / R = memory class).
std::string semantics_name(const GameModel& m, const SemanticsSpec& sem);

enum class VerdictKind { Holds, Fails, Unknown };

const char* verdict_name(VerdictKind k);

struct Verdict {
    VerdictKind kind = VerdictKind::Fails;
    StateId state = -1;
    // Winning profile for the innermost quantifier when one was
    // constructed; absent for Fails, Unknown, and fixpoint-based results.
    std::optional<StrategyProfile> witness;
    // Holds with witness: largest memory actually reachable in any member
    // machine.  Unknown: the exhausted deepening cap.  Otherwise 0.
    int memory_used = 0;
    // Strategy profiles examined (saturating); not part of equality.
    unsigned long long examined = 0;

    bool holds() const { return kind == VerdictKind::Holds; }

    friend bool operator==(const Verdict& a, const Verdict& b) {
        return a.kind == b.kind && a.state == b.state && a.witness == b.witness &&
               a.memory_used == b.memory_used;
    }
    friend bool operator!=(const Verdict& a, const Verdict& b) { return !(a == b); }
};

// Decides a state formula at every state of the model.  Strategic
// subformulas are resolved innermost first, each one replaced by a fresh
// proposition holding where the quantifier succeeds; three-valued logic
// propagates Unknown results outward.  Coalition players are the formula's
// 1-based player numbers.  Throws std::invalid_argument for unknown
// players or propositions, path formulas at top level, or out-of-range
// bounds, and UnsupportedSemantics where no decision procedure exists
// (see check_quantified).
std::map<StateId, Verdict> evaluate(const GameModel& m, const Formula& f,
                                    const SemanticsSpec& sem);

// Decides one quantifier: can `coalition` (1-based player numbers) enforce
// the quantifier-free path formula `body` from state s under the given
// semantics?  Under incomplete information the strategy must win from every
// state any member confuses with s.  The Labeling overload lets callers
// thread auxiliary propositions (evaluate uses it for inner quantifier
// results).
//
// Decidability: Memoryless and Bounded always decide.  Finite decides up
// to sem.cap (conclusive for complete-information one-shot bodies, else
// Unknown when the cap is exhausted; cap 0 throws — UnsupportedSemantics
// under incomplete information where the problem is undecidable,
// std::invalid_argument otherwise).  PerfectRecall decides complete-
// information one-shot bodies by fixpoint, and LTL bodies for the empty and
// the full coalition; incomplete-information perfect recall throws
// UnsupportedSemantics, and proper coalitions with LTL bodies fall back to
// deepening when sem.cap is set.
Verdict check_quantified(const GameModel& m, StateId s, const std::vector<int>& coalition,
                         const Formula& body, const SemanticsSpec& sem, const Labeling& lab);
Verdict check_quantified(const GameModel& m, StateId s, const std::vector<int>& coalition,
                         const Formula& body, const SemanticsSpec& sem);

// Sound and complete perfect-recall decision for complete-information
// models and formulas built from propositions, boolean connectives, and
// coalition quantifiers over X / G / U with such operands (arbitrarily
// nested): the classic controllable-predecessor fixpoint, evaluated
// bottom-up.  Returns the sorted satisfying states.  Throws
// std::invalid_argument on partitioned models or formulas outside that
// shape.  For those formulas the verdict coincides with every finite-memory
// semantics, which the test suite exercises as an oracle.
std::vector<StateId> check_atl_fixpoint_complete(const GameModel& m, const Formula& f,
                                                 const Labeling& lab);
std::vector<StateId> check_atl_fixpoint_complete(const GameModel& m, const Formula& f);

// Iterative deepening over the memory bound k = 1..cap for one quantifier.
// Holds as soon as some bound admits a winning profile; Fails early for
// complete-information one-shot bodies (memoryless winners suffice there);
// otherwise Unknown with memory_used = cap.  examined accumulates over all
// bounds tried.
Verdict check_finite_memory_deepening(const GameModel& m, StateId s,
                                      const std::vector<int>& coalition, const Formula& body,
                                      int cap, const SemanticsSpec& sem, const Labeling& lab);
Verdict check_finite_memory_deepening(const GameModel& m, StateId s,
                                      const std::vector<int>& coalition, const Formula& body,
                                      int cap, const SemanticsSpec& sem);

}  // namespace stratmc
