#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stratmc/game_model.hpp"

namespace stratmc {

// Deterministic finite-state transducer strategy.  Memory states are
// 0..k-1 with initial memory 0; the input alphabet is the owner's
// observation classes; next (memory update) and out (action choice) are
// row-major tables indexed m*C + c.  The action chosen after observing
// history h is out[run_memory(d, h minus last), last(h)]: the output map
// reads the memory state computed from the strictly earlier observations.
struct Dfst {
    PlayerId owner = 0;  // 0-based
    int k = 1;
    int num_classes = 0;
    std::vector<int> next;
    std::vector<ActionId> out;

    int next_of(int m, ClassId c) const { return next[m * num_classes + c]; }
    ActionId out_of(int m, ClassId c) const { return out[m * num_classes + c]; }

    bool operator==(const Dfst& other) const = default;
};

// Coalition profile: one Dfst per member, ascending by owner index.
using StrategyProfile = std::vector<Dfst>;

// Folds the memory-update table over the inputs; empty input returns the
// initial memory 0.
int run_memory(const Dfst& d, const std::vector<ClassId>& inputs);

// Action after observation history h (non-empty).
ActionId apply_strategy(const Dfst& d, const std::vector<ClassId>& h);

// Structural sanity of a Dfst against a model: table sizes, memory targets
// in range, outputs legal for the class.
std::vector<std::string> dfst_violations(const Dfst& d, const GameModel& m);

// Renames memory states into breadth-first reachability order from memory 0
// (inputs scanned in class order), drops unreachable states, and — when
// fixed_size is given — pads back to that size with inert states
// (self-looping, outputting the first legal action of each class).
// apply_strategy is pointwise unchanged.  Requires model for pad outputs.
Dfst canonicalize(const Dfst& d, const GameModel& m,
                  std::optional<int> fixed_size = std::nullopt);

// Number of memory states reachable from memory 0.
int reachable_memory(const Dfst& d);

// --- canonical enumeration -------------------------------------------------

// Counts / unranks breadth-first-canonical memory-update tables with exactly
// r reachable states over C input classes: scanning cells row-major, a value
// may exceed the largest state seen so far by at most one, every row's state
// must have been seen before the row starts, and all r states occur.
std::uint64_t canonical_structure_count(int r, int C);
std::vector<int> canonical_structure_at(int r, int C, std::uint64_t idx);

// Deterministic stream of all canonical k-memory Dfsts for one player:
// strata of reachable size r = 1..k in ascending order (padded to k), within
// a stratum lexicographic over (output table, update table) with cells
// row-major, outputs in declared-action order, update values ascending.
class DfstStream {
public:
    DfstStream(const GameModel& m, PlayerId owner, int k);

    std::uint64_t size() const { return size_; }     // saturating
    bool saturated() const { return saturated_; }
    Dfst get(std::uint64_t idx) const;

    int k() const { return k_; }
    int classes() const { return classes_; }
    const std::vector<std::vector<ActionId>>& legal_by_class() const { return legal_; }
    // Index of the stratum boundaries: stratum r spans
    // [stratum_begin(r), stratum_begin(r+1)).
    std::uint64_t stratum_begin(int r) const { return begin_[r - 1]; }

private:
    const GameModel* model_;
    PlayerId owner_;
    int k_;
    int classes_;
    std::vector<std::vector<ActionId>> legal_;
    std::vector<std::uint64_t> g_count_, t_count_, begin_;  // per stratum r=1..k
    std::uint64_t size_ = 0;
    bool saturated_ = false;
};

// Cartesian product of the members' streams, varying the last member
// fastest.  Members ascend by player index.  The empty coalition yields the
// single empty profile.
class ProfileStream {
public:
    ProfileStream(const GameModel& m, const std::vector<PlayerId>& coalition, int k);

    std::uint64_t size() const { return size_; }     // saturating
    bool saturated() const { return saturated_; }
    StrategyProfile get(std::uint64_t idx) const;
    const std::vector<DfstStream>& members() const { return members_; }

private:
    std::vector<DfstStream> members_;
    std::uint64_t size_ = 1;
    bool saturated_ = false;
};

// Deterministic enumeration entry point for a coalition's k-memory profiles.
inline ProfileStream enumerate_profiles(const GameModel& m, const std::vector<PlayerId>& coalition,
                                        int k) {
    return ProfileStream(m, coalition, k);
}

// Witness text format:
//   dfst player=<j> k=<n>
//   m<i> <class-id> -> m<i'> / <action>
// with one line per (memory, class) cell, memory-major, classes in declared
// order; <class-id> is the class's first-declared member state.
std::string format_dfst(const Dfst& d, const GameModel& m);
std::string format_profile(const StrategyProfile& p, const GameModel& m);

// Parses one `dfst` block (as produced by format_dfst); validates outputs
// against the model.  Throws ParseError on malformed input.
Dfst parse_dfst(const std::string& text, const GameModel& m);
// Parses a concatenation of dfst blocks.
StrategyProfile parse_profile(const std::string& text, const GameModel& m);

}  // namespace stratmc
