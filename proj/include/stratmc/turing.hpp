#pragma once

// Deterministic one-tape Turing machines and their translation into
// three-player imperfect-information games.
//
// The translated game ("simulation game") is the stress fixture for the
// bounded-memory search.  Players 1 and 2 jointly try to keep the play away
// from the failure proposition p while player 3 schedules a surprise audit.
// Until the audit both partners must idle; when it fires they must spell out
// tape configurations of the machine, and the game graph cross-checks their
// answers against the machine's step relation.  A finite-memory winning
// profile for {1,2} exists exactly when the machine's run from the empty
// tape eventually repeats a configuration, so deepening search finds the win
// when the repeat is short and honestly reports Unknown otherwise.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stratmc/game_model.hpp"
#include "stratmc/strategy.hpp"

namespace stratmc {

enum class TapeMove : char { Left = 'L', Right = 'R' };

struct TmRule {
    std::string next_state;
    std::string write;  // always a real alphabet symbol, never the blank
    TapeMove move = TapeMove::Right;

    bool operator==(const TmRule&) const = default;
};

// One-tape deterministic Turing machine.  The blank is scanned whenever the
// head sits past the written region, but no rule may write it back, so the
// written part of the tape is always a contiguous prefix.  Accepting states
// are run-terminal: the simulator treats their configurations as fixed
// points, which keeps "the machine halted" expressible as a repeating
// configuration.  delta may be partial; a lookup miss during simulation is
// an error, and the game translation turns it into an immediate audit
// failure.
struct TuringMachine {
    std::vector<std::string> states;  // declaration order, non-empty
    std::string initial;
    std::set<std::string> accepting;    // may be empty
    std::vector<std::string> alphabet;  // writable symbols; blank excluded
    std::string blank;
    std::map<std::pair<std::string, std::string>, TmRule> delta;  // (state, read) -> rule

    bool is_accepting(const std::string& q) const { return accepting.count(q) > 0; }
};

// Machine configuration: the written tape prefix (no blanks inside), the
// head position within 0..tape.size(), and the control state.  head ==
// tape.size() means the head scans the first blank cell after the written
// region.
struct Configuration {
    std::vector<std::string> tape;
    int head = 0;
    std::string state;

    bool operator==(const Configuration&) const = default;
};

// Parses the textual machine format:
//
//   tm
//   states q0 q1 ...
//   initial q0
//   accept q1 ...            (the name list may be empty)
//   alphabet 0 1 ...
//   blank B
//   delta q a -> q' a' L|R   (one line per rule; a may be the blank)
//
// Blank lines and lines starting with '#' are ignored; the non-delta
// sections may appear in any order but exactly once each (a missing accept
// line means no accepting states).  Throws ParseError with a line number on
// malformed lines, unknown names, an empty state list, names shared between
// states and alphabet, a blank listed in the alphabet, rules that write the
// blank, and duplicate rules for the same (state, symbol) pair.
TuringMachine tm_parse(const std::string& text);

// The empty-tape starting configuration.
Configuration tm_initial_configuration(const TuringMachine& tm);

// One simulation step.  Accepting configurations are fixed points.  Throws
// std::invalid_argument when the machine asks for a left move at cell 0,
// when no rule covers the scanned (state, symbol) pair, or when the
// configuration is malformed for this machine.
Configuration tm_step(const TuringMachine& tm, const Configuration& c);

// Spelling of a configuration as played inside the simulation game: the
// written cells left to right, with the control state inserted immediately
// before the scanned cell (at the end when the head scans the blank past the
// written region).  tm_initial_configuration spells as just the initial
// state.
std::vector<std::string> configuration_symbols(const Configuration& c);

// Builds the simulation game for a machine.
//
// Players 1 and 2 share the action alphabet {a} ∪ tape symbols ∪ control
// states, player 3 picks audit schedules with {n1, n2, n3}.  Player 1 and 2
// each see exactly three observation classes: the start state s0, the audit
// announcement, and everything else; the announcement is visible at most
// once per play.  Player 3 observes everything.  The failure state carries
// the only labelled proposition p, and every off-protocol joint move falls
// into it.
//
// Protocol: both partners idle on a until their announcement arrives.
// Player 3 may announce to both after round 1 (then each must spell the
// starting configuration and idle), announce to both after any later round
// (then they must play identical symbol streams), or announce to player 1
// one round before player 2 (then player 2's stream must spell the
// step-successor of the configuration player 1 spells, checked cell by cell
// while player 1 runs one symbol ahead).  Spelled configurations end by
// returning to a; accepting configurations expect themselves as successor.
//
// Throws std::invalid_argument when a machine name collides with one of the
// reserved actions a/n1/n2/n3 or when the machine is structurally unusable
// (no states, unknown initial or accepting names, rules writing the blank).
GameModel tm_to_icgm(const TuringMachine& tm);

// Replays a {1,2} profile of the simulation game against the schedule that
// keeps the game in the delay loop and announces to player 1 after
// `reveal_round` rounds (>= 1).  Returns the `horizon` action names player 1
// emits from the announcement state onward; for a winning profile this must
// spell the reveal_round-th run configuration followed by idling.  The
// profile must hold the machines for players 1 and 2 in that order.
std::vector<std::string> replay_player1_symbols(const GameModel& game,
                                                const StrategyProfile& profile,
                                                int reveal_round, int horizon);

}  // namespace stratmc
