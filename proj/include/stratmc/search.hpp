#pragma once

#include <vector>

#include "stratmc/game_model.hpp"
#include "stratmc/product.hpp"
#include "stratmc/strategy.hpp"
#include "stratmc/temporal.hpp"

namespace stratmc {

// Strategy-profile search engines.  All engines decide the same predicate —
// "the universal path objective holds from every start under this profile".
// Serial, Parallel and LexDfs walk the canonical enumeration stream and
// return the stream-first winning profile, so their observable behavior is
// identical:
//   Serial    walks the stream in order (reference implementation);
//   Parallel  checks OpenMP-sized waves with a minimum-index reduction;
//   LexDfs    assigns one member at a time in stream order, discarding
//             whole suffix subtrees via sound relaxations.
// CellDfs decides the same predicate without touching the stream: it
// assigns individual transducer cells (output / memory update) only when a
// start-reachable product state first needs them, bounds fresh memory
// targets canonically, and backtracks on forced violations.  Verdicts agree
// with the stream engines; its witness is the first winner in assignment
// order (canonicalized), not necessarily the stream-first one.
//   Auto      picks Parallel for small streams, else CellDfs.
enum class SearchEngine { Serial, Parallel, LexDfs, CellDfs, Auto };

struct SearchOutcome {
    bool found = false;
    StrategyProfile witness;          // canonical, memory padded to k
    unsigned long long examined = 0;  // full-profile checks (CellDfs: closed regions)
};

// The per-profile predicate all engines share (exposed for tests): builds
// the product for the profile over the starts and checks the objective at
// every initial state.
bool profile_wins(const GameModel& m, const CoalitionTable& table, const StrategyProfile& profile,
                  const std::vector<StateId>& starts, const Labeling& lab, const Objective& obj);

// First winning k-memory profile for the coalition (0-based player ids,
// ascending), or not-found.  Throws std::invalid_argument on an empty start
// set, k < 1, or an out-of-range player.
SearchOutcome find_winning_profile(const GameModel& m, const std::vector<PlayerId>& coalition,
                                   int k, const std::vector<StateId>& starts, const Labeling& lab,
                                   const Objective& obj,
                                   SearchEngine engine = SearchEngine::Auto);

// Stream size above which Auto switches from Parallel to CellDfs.
inline constexpr unsigned long long kOnDemandThreshold = 50'000ULL;

}  // namespace stratmc
