#pragma once

#include <map>
#include <string>
#include <vector>

#include "stratmc/game_model.hpp"
#include "stratmc/strategy.hpp"

namespace stratmc {

// Game-state labeling extended with fresh propositions introduced by the
// bottom-up evaluation driver.  Lookup falls back to the model's labels.
struct Labeling {
    const GameModel* model = nullptr;
    std::map<std::string, std::vector<char>> extra;  // prop -> per-state truth

    explicit Labeling(const GameModel& m) : model(&m) {}
    bool truth(StateId s, const std::string& prop) const {
        if (auto it = extra.find(prop); it != extra.end()) return it->second[s] != 0;
        auto p = model->prop_index(prop);
        return p.has_value() && model->has_prop(s, *p);
    }
    void add(const std::string& prop, std::vector<char> per_state) {
        extra[prop] = std::move(per_state);
    }
};

// Model-level successor sets indexed by coalition action choices; shared by
// every product built for the same (model, coalition) pair.  Successor sets
// absorb the opponents' choices: succ(s, acts) is the set of states some
// opponent completion reaches.
class CoalitionTable {
public:
    CoalitionTable(const GameModel& m, std::vector<PlayerId> coalition);  // 0-based members

    const GameModel& model() const { return *model_; }
    const std::vector<PlayerId>& coalition() const { return coalition_; }

    // acts: one action per member, ascending member order; must be legal.
    const std::vector<StateId>& successors(StateId s, const std::vector<ActionId>& acts) const;

    // Number of legal coalition action tuples at s and tuple access, in
    // lexicographic member-major order (used by the fixpoint checker).
    int num_tuples(StateId s) const { return static_cast<int>(succ_[s].size()); }
    const std::vector<StateId>& successors_by_tuple(StateId s, int tuple_idx) const {
        return succ_[s][tuple_idx];
    }
    std::vector<ActionId> tuple_actions(StateId s, int tuple_idx) const;

private:
    int flat_index(StateId s, const std::vector<ActionId>& acts) const;

    const GameModel* model_;
    std::vector<PlayerId> coalition_;
    std::vector<std::vector<std::vector<StateId>>> succ_;  // [s][flat tuple] -> targets
};

// The synchronized system whose paths from an initial state are exactly the
// coalition's strategy outcomes: states are (game state, memory per member),
// edges follow the profile's outputs with opponents unrestricted, and
// labels project to the game state.  Restricted to states reachable from
// the initial set; all queried start states share one system.
struct ProductSystem {
    const GameModel* model = nullptr;
    std::vector<StateId> state_of;            // product -> game state
    std::vector<std::vector<int>> memory_of;  // product -> memory tuple
    std::vector<std::vector<int>> adj;        // sorted forward adjacency
    std::vector<StateId> starts;              // queried game start states
    std::vector<int> initials;                // product ids, parallel to starts

    int num_states() const { return static_cast<int>(state_of.size()); }
};

// Builds the product for the profile (members ascending by owner) from the
// given start states.  The table must be built for the same model and the
// profile's coalition.  Throws std::invalid_argument on empty starts or a
// profile/partition mismatch.
ProductSystem build_product(const GameModel& m, const StrategyProfile& profile,
                            const std::vector<StateId>& starts, const CoalitionTable& table);

// Convenience overload constructing a throwaway table.
ProductSystem build_product(const GameModel& m, const StrategyProfile& profile,
                            const std::vector<StateId>& starts);

// Compares, per start state and up to the given depth (number of states in
// a prefix), the game-state projections of product paths against a
// brute-force simulation that enumerates every opponent action sequence and
// queries the strategies through apply_strategy directly.
bool outcome_correspondence_check(const GameModel& m, const StrategyProfile& profile,
                                  const ProductSystem& ps, int depth);

// Debug dump: `pstate <game-state> <m1,...,mr>` per product state (id =
// line order), then `pedge <from> -> <to>` per edge.
std::string dump_product(const ProductSystem& ps);

}  // namespace stratmc
