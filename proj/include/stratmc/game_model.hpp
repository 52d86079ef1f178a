#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stratmc/common.hpp"

namespace stratmc {

// A joint move: one action per player, indexed by player (0-based).
using Move = std::vector<ActionId>;

// One block of a player's observation partition.  Classes are numbered in
// order of their smallest member's declaration index; the printable label of
// a class is the name of that smallest member.
struct ObservationClass {
    PlayerId player = 0;
    ClassId id = 0;
    std::vector<StateId> members;  // ascending by declaration index
};

// Concurrent game model: states with atomic propositions, n players, a legal
// action set per (state, player), a transition function defined on exactly
// the legal joint moves, and an observation partition per player (identity
// when unspecified, i.e. complete information).
//
// Instances are built via GameModelBuilder or parse_model().  Structural
// well-formedness that is not enforced at build time is reported by
// validate(); parse_model() runs validate() and throws on violations.
class GameModel {
public:
    int num_states() const { return static_cast<int>(state_names_.size()); }
    int num_players() const { return num_players_; }
    int num_actions() const { return static_cast<int>(action_names_.size()); }
    int num_props() const { return static_cast<int>(prop_names_.size()); }

    const std::string& state_name(StateId s) const { return state_names_[s]; }
    const std::string& action_name(ActionId a) const { return action_names_[a]; }
    const std::string& prop_name(PropId p) const { return prop_names_[p]; }
    std::optional<StateId> state_index(const std::string& name) const;
    std::optional<ActionId> action_index(const std::string& name) const;
    std::optional<PropId> prop_index(const std::string& name) const;

    // Propositions holding at s, ascending by declaration index.
    const std::vector<PropId>& props_of(StateId s) const { return labels_[s]; }
    bool has_prop(StateId s, PropId p) const;

    // Legal actions for player j at s, ascending by declaration index.
    const std::vector<ActionId>& legal(StateId s, PlayerId j) const {
        return legal_[s * num_players_ + j];
    }

    // Successor under a joint move; nullopt when the move is not legal at s.
    std::optional<StateId> successor(StateId s, const Move& mv) const;

    // All (move, target) pairs from s, moves in lexicographic action-index
    // order.  Its size equals the product of the players' legal-set sizes
    // whenever the transition function is total at s.
    std::vector<std::pair<Move, StateId>> successors(StateId s) const;

    // Observation interface.  Partitions exist for every player; complete
    // information is represented by identity partitions.
    int num_classes(PlayerId j) const { return static_cast<int>(classes_[j].size()); }
    ClassId class_of(PlayerId j, StateId s) const { return class_of_[j][s]; }
    const ObservationClass& observation_class(PlayerId j, ClassId c) const {
        return classes_[j][c];
    }
    // Stable printable label: name of the class's first-declared member.
    const std::string& class_label(PlayerId j, ClassId c) const {
        return state_names_[classes_[j][c].members.front()];
    }
    bool identity_partition(PlayerId j) const;
    bool complete_information() const;

    // Legal set shared by all members of a class (meaningful only when the
    // model passes validation; reads the first member's set).
    const std::vector<ActionId>& legal_for_class(PlayerId j, ClassId c) const {
        return legal(classes_[j][c].members.front(), j);
    }

    // Structural violations, empty when well-formed: non-empty legal sets,
    // transition totality on legal moves and absence of other transitions,
    // partition coverage, and action-uniformity of observation classes.
    std::vector<std::string> validate() const;

    // Canonical text form; parse_model(serialize()) reproduces the model.
    std::string serialize() const;

    bool operator==(const GameModel& other) const;

private:
    friend class GameModelBuilder;

    int num_players_ = 0;
    std::vector<std::string> state_names_;
    std::vector<std::string> action_names_;
    std::vector<std::string> prop_names_;
    std::vector<std::vector<PropId>> labels_;             // per state, sorted
    std::vector<std::vector<ActionId>> legal_;            // [s*n + j], sorted
    std::vector<std::map<Move, StateId>> trans_;          // per state
    std::vector<std::vector<ClassId>> class_of_;          // [j][s]
    std::vector<std::vector<ObservationClass>> classes_;  // [j][c]
    std::vector<bool> explicit_obs_;                      // partition given, per player
};

// Incremental construction for generators and tests.  References to
// undeclared names throw ParseError immediately; semantic invariants
// (totality, uniformity, coverage) are left to GameModel::validate().
class GameModelBuilder {
public:
    explicit GameModelBuilder(int num_players);

    GameModelBuilder& action(const std::string& name);
    GameModelBuilder& state(const std::string& name,
                            const std::vector<std::string>& props = {});
    // player is 1-based, matching the text format.
    GameModelBuilder& legal(const std::string& state, int player,
                            const std::vector<std::string>& actions);
    GameModelBuilder& trans(const std::string& from,
                            const std::vector<std::string>& move,
                            const std::string& to);
    // Full partition for one player, blocks of state names.
    GameModelBuilder& obs(int player, const std::vector<std::vector<std::string>>& blocks);

    // Finalizes partitions (identity for players without obs) and returns
    // the model.  Does not run validate().
    GameModel build();

private:
    StateId need_state(const std::string& name) const;
    ActionId need_action(const std::string& name) const;

    GameModel m_;
    std::vector<std::vector<std::vector<StateId>>> obs_blocks_;  // per player
};

// Parses the model text format and validates the result.  Throws ParseError
// carrying a line number on syntax errors, undeclared references, duplicate
// or illegal transitions, and on any validate() violation.
GameModel parse_model(const std::string& text);

inline std::string serialize_model(const GameModel& m) { return m.serialize(); }

}  // namespace stratmc
