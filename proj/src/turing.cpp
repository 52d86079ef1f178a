#include "stratmc/turing.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "stratmc/common.hpp"

namespace stratmc {

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> toks;
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

void check_name_charset(const std::string& name, int lineno) {
    if (name.find_first_of("(),#") != std::string::npos)
        throw ParseError("name '" + name + "' contains a character reserved by the model text format",
                         lineno);
}

}  // namespace

TuringMachine tm_parse(const std::string& text) {
    TuringMachine tm;
    bool saw_header = false, saw_states = false, saw_initial = false, saw_accept = false,
         saw_alphabet = false, saw_blank = false;
    int initial_line = 0, accept_line = 0, blank_line = 0, alphabet_line = 0;
    std::vector<std::string> accept_names;
    struct RuleLine {
        int lineno;
        std::vector<std::string> toks;
    };
    std::vector<RuleLine> rule_lines;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = tokens_of(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (!saw_header) {
            if (toks.size() != 1 || toks[0] != "tm")
                throw ParseError("expected 'tm' header", lineno);
            saw_header = true;
            continue;
        }
        const std::string& head = toks[0];
        if (head == "states") {
            if (saw_states) throw ParseError("duplicate states line", lineno);
            saw_states = true;
            if (toks.size() < 2) throw ParseError("empty state set", lineno);
            for (std::size_t i = 1; i < toks.size(); ++i) {
                check_name_charset(toks[i], lineno);
                if (std::find(tm.states.begin(), tm.states.end(), toks[i]) != tm.states.end())
                    throw ParseError("duplicate state name '" + toks[i] + "'", lineno);
                tm.states.push_back(toks[i]);
            }
        } else if (head == "initial") {
            if (saw_initial) throw ParseError("duplicate initial line", lineno);
            saw_initial = true;
            if (toks.size() != 2) throw ParseError("initial takes exactly one state name", lineno);
            tm.initial = toks[1];
            initial_line = lineno;
        } else if (head == "accept") {
            if (saw_accept) throw ParseError("duplicate accept line", lineno);
            saw_accept = true;
            accept_names.assign(toks.begin() + 1, toks.end());
            accept_line = lineno;
        } else if (head == "alphabet") {
            if (saw_alphabet) throw ParseError("duplicate alphabet line", lineno);
            saw_alphabet = true;
            alphabet_line = lineno;
            for (std::size_t i = 1; i < toks.size(); ++i) {
                check_name_charset(toks[i], lineno);
                if (std::find(tm.alphabet.begin(), tm.alphabet.end(), toks[i]) != tm.alphabet.end())
                    throw ParseError("duplicate alphabet symbol '" + toks[i] + "'", lineno);
                tm.alphabet.push_back(toks[i]);
            }
        } else if (head == "blank") {
            if (saw_blank) throw ParseError("duplicate blank line", lineno);
            saw_blank = true;
            if (toks.size() != 2) throw ParseError("blank takes exactly one symbol name", lineno);
            tm.blank = toks[1];
            blank_line = lineno;
        } else if (head == "delta") {
            rule_lines.push_back({lineno, std::move(toks)});
        } else {
            throw ParseError("unknown directive '" + head + "'", lineno);
        }
    }

    if (!saw_header) throw ParseError("expected 'tm' header");
    if (!saw_states) throw ParseError("missing states line");
    if (!saw_initial) throw ParseError("missing initial line");
    if (!saw_alphabet) throw ParseError("missing alphabet line");
    if (!saw_blank) throw ParseError("missing blank line");

    auto is_state = [&](const std::string& n) {
        return std::find(tm.states.begin(), tm.states.end(), n) != tm.states.end();
    };
    auto is_symbol = [&](const std::string& n) {
        return std::find(tm.alphabet.begin(), tm.alphabet.end(), n) != tm.alphabet.end();
    };

    if (!is_state(tm.initial))
        throw ParseError("initial state '" + tm.initial + "' is not declared", initial_line);
    for (const auto& q : accept_names) {
        if (!is_state(q))
            throw ParseError("accepting state '" + q + "' is not declared", accept_line);
        tm.accepting.insert(q);
    }
    if (is_symbol(tm.blank))
        throw ParseError("the blank symbol may not be part of the alphabet", blank_line);
    for (const auto& s : tm.alphabet)
        if (is_state(s))
            throw ParseError("'" + s + "' is declared as both a state and a tape symbol",
                             alphabet_line);

    for (const auto& rl : rule_lines) {
        const auto& toks = rl.toks;
        if (toks.size() != 7 || toks[3] != "->")
            throw ParseError("malformed delta line; expected: delta q a -> q' a' L|R", rl.lineno);
        const std::string& q = toks[1];
        const std::string& read = toks[2];
        const std::string& q2 = toks[4];
        const std::string& write = toks[5];
        const std::string& dir = toks[6];
        if (!is_state(q)) throw ParseError("unknown state '" + q + "' in delta", rl.lineno);
        if (read != tm.blank && !is_symbol(read))
            throw ParseError("unknown symbol '" + read + "' in delta", rl.lineno);
        if (!is_state(q2)) throw ParseError("unknown state '" + q2 + "' in delta", rl.lineno);
        if (write == tm.blank) throw ParseError("rule writes the blank symbol", rl.lineno);
        if (!is_symbol(write))
            throw ParseError("unknown symbol '" + write + "' in delta", rl.lineno);
        if (dir != "L" && dir != "R")
            throw ParseError("direction must be L or R, got '" + dir + "'", rl.lineno);
        TmRule rule{q2, write, dir == "L" ? TapeMove::Left : TapeMove::Right};
        if (!tm.delta.emplace(std::make_pair(q, read), rule).second)
            throw ParseError("duplicate rule for (" + q + ", " + read + ")", rl.lineno);
    }
    return tm;
}

Configuration tm_initial_configuration(const TuringMachine& tm) {
    return Configuration{{}, 0, tm.initial};
}

Configuration tm_step(const TuringMachine& tm, const Configuration& c) {
    if (std::find(tm.states.begin(), tm.states.end(), c.state) == tm.states.end())
        throw std::invalid_argument("unknown control state '" + c.state + "'");
    const int len = static_cast<int>(c.tape.size());
    if (c.head < 0 || c.head > len)
        throw std::invalid_argument("head position " + std::to_string(c.head) +
                                    " outside the written region");
    for (const auto& cell : c.tape)
        if (std::find(tm.alphabet.begin(), tm.alphabet.end(), cell) == tm.alphabet.end())
            throw std::invalid_argument("tape cell holds '" + cell +
                                        "', which is not an alphabet symbol");
    if (tm.is_accepting(c.state)) return c;  // accepting configurations are fixed points

    const std::string read = c.head < len ? c.tape[c.head] : tm.blank;
    auto it = tm.delta.find({c.state, read});
    if (it == tm.delta.end())
        throw std::invalid_argument("no rule for (" + c.state + ", " + read + ")");
    const TmRule& r = it->second;

    Configuration n = c;
    if (c.head == len)
        n.tape.push_back(r.write);
    else
        n.tape[c.head] = r.write;
    n.state = r.next_state;
    if (r.move == TapeMove::Right) {
        n.head = c.head + 1;
    } else {
        if (c.head == 0) throw std::invalid_argument("left move at tape cell 0");
        n.head = c.head - 1;
    }
    return n;
}

std::vector<std::string> configuration_symbols(const Configuration& c) {
    std::vector<std::string> out;
    out.reserve(c.tape.size() + 1);
    for (int i = 0; i < c.head; ++i) out.push_back(c.tape[i]);
    out.push_back(c.state);
    for (int i = c.head; i < static_cast<int>(c.tape.size()); ++i) out.push_back(c.tape[i]);
    return out;
}

namespace {

// Symbolic state of the simulation game while it is being unfolded.  The
// payload slots a0/b0/c0 hold machine names; their meaning depends on kind.
struct GadgetState {
    enum Kind {
        Start,      // s0: both partners idle, audit pending
        Delay,      // delay loop before a later audit
        BothNow,    // announced to both after round 1
        IdleInit,   // starting configuration spelled; idle forever
        BothLater,  // announced to both after a later round
        Echo,       // identical-stream check
        P1First,    // announced to player 1; player 2 still waiting
        CopyFirst,  // player 2's announcement round; player 1 opened with tape symbol a0
        Copy,       // copy phase; previous player-1 symbol is a0
        HeadFirst,  // player 2's announcement round; player 1 opened with control state a0
        Head,       // player 1 just spelled control state a0; right-move window
        Succ,       // player 2 owes the successor control state a0
        Left,       // left-move window: control a0, claimed successor b0, held symbol c0
        Write,      // player 2 owes the freshly written symbol a0
        Idle,       // both configurations spelled; idle forever
        Fail        // off-protocol; carries the proposition p
    };

    Kind kind = Start;
    std::string a0, b0, c0;

    auto key() const { return std::tie(kind, a0, b0, c0); }
    bool operator<(const GadgetState& o) const { return key() < o.key(); }
};

std::string gadget_name(const GadgetState& g) {
    switch (g.kind) {
        case GadgetState::Start: return "s0";
        case GadgetState::Delay: return "delay";
        case GadgetState::BothNow: return "both_now";
        case GadgetState::IdleInit: return "idle_init";
        case GadgetState::BothLater: return "both_later";
        case GadgetState::Echo: return "echo";
        case GadgetState::P1First: return "p1_first";
        case GadgetState::CopyFirst: return "v1_copy:" + g.a0;
        case GadgetState::Copy: return "v_copy:" + g.a0;
        case GadgetState::HeadFirst: return "v1_head:" + g.a0;
        case GadgetState::Head: return "v_head:" + g.a0;
        case GadgetState::Succ: return "v_succ:" + g.a0;
        case GadgetState::Left: return "v_left:" + g.a0 + ":" + g.b0 + ":" + g.c0;
        case GadgetState::Write: return "v_write:" + g.a0;
        case GadgetState::Idle: return "v_idle";
        case GadgetState::Fail: return "fail";
    }
    return "?";
}

struct GadgetCtx {
    const TuringMachine& tm;
    std::set<std::string> sym;
    std::set<std::string> ctl;

    bool is_sym(const std::string& s) const { return sym.count(s) > 0; }
    bool is_ctl(const std::string& s) const { return ctl.count(s) > 0; }
    const TmRule* rule(const std::string& q, const std::string& read) const {
        auto it = tm.delta.find({q, read});
        return it == tm.delta.end() ? nullptr : &it->second;
    }
};

GadgetState fail_state() { return GadgetState{GadgetState::Fail, "", "", ""}; }

// Continuation after player 2 settles an owed symbol: player 1's current
// symbol decides whether the copy phase resumes, both streams wind down, or
// the spelling is malformed (a second control state).
GadgetState resume_copy(const GadgetCtx& cx, const std::string& x) {
    if (x == "a") return GadgetState{GadgetState::Idle, "", "", ""};
    if (cx.is_sym(x)) return GadgetState{GadgetState::Copy, x, "", ""};
    return fail_state();
}

// Deterministic verifier transition on the joint symbols (x from player 1,
// y from player 2); player 3's choice is irrelevant here.  Player 1 runs one
// symbol ahead of player 2, so a check that needs the symbol under the head
// can wait one round for it: a right-move window resolves as soon as the
// scanned symbol arrives, while a left-move window buffers player 2's
// claimed successor state until then.
GadgetState verifier_next(const GadgetCtx& cx, const GadgetState& g, const std::string& x,
                          const std::string& y) {
    using K = GadgetState;
    switch (g.kind) {
        case K::BothNow:
            // Announced in round 1: the run so far is the one-symbol starting
            // configuration, and both partners must spell it, then idle.
            return (x == cx.tm.initial && y == cx.tm.initial)
                       ? GadgetState{K::IdleInit, "", "", ""}
                       : fail_state();
        case K::IdleInit:
            return (x == "a" && y == "a") ? GadgetState{K::IdleInit, "", "", ""} : fail_state();
        case K::BothLater:
        case K::Echo:
            // Announced simultaneously: the streams must be identical.
            return (x == y) ? GadgetState{K::Echo, "", "", ""} : fail_state();
        case K::P1First:
            if (y != "a") return fail_state();  // player 2 has not been announced yet
            if (cx.is_sym(x)) return GadgetState{K::CopyFirst, x, "", ""};
            if (cx.is_ctl(x)) return GadgetState{K::HeadFirst, x, "", ""};
            return fail_state();  // player 1 must open its configuration
        case K::CopyFirst:
        case K::Copy:
            if (y == g.a0) {
                // Player 2 copied the held symbol; classify the next
                // player-1 symbol.
                if (x == "a") return GadgetState{K::Idle, "", "", ""};
                if (cx.is_sym(x)) return GadgetState{K::Copy, x, "", ""};
                return GadgetState{K::Head, x, "", ""};
            }
            if (cx.is_ctl(x) && cx.is_ctl(y))
                // Left-move window: player 2 already owes the successor
                // state one cell early; buffer it until the scanned symbol
                // arrives next round.
                return GadgetState{K::Left, x, y, g.a0};
            return fail_state();
        case K::HeadFirst:
        case K::Head: {
            const std::string& q = g.a0;
            if (cx.tm.is_accepting(q)) {
                // Accepting configurations repeat verbatim: player 2 echoes
                // the control state and the copy phase resumes.
                return (y == q) ? resume_copy(cx, x) : fail_state();
            }
            if (cx.is_ctl(x)) return fail_state();  // two control states in one spelling
            const TmRule* r = cx.rule(q, x == "a" ? cx.tm.blank : x);
            if (r == nullptr || r->move != TapeMove::Right) return fail_state();
            return (y == r->write) ? GadgetState{K::Succ, r->next_state, "", ""} : fail_state();
        }
        case K::Succ:
            return (y == g.a0) ? resume_copy(cx, x) : fail_state();
        case K::Left: {
            if (cx.is_ctl(x)) return fail_state();
            const TmRule* r = cx.rule(g.a0, x == "a" ? cx.tm.blank : x);
            if (r == nullptr || r->move != TapeMove::Left) return fail_state();
            return (r->next_state == g.b0 && y == g.c0)
                       ? GadgetState{K::Write, r->write, "", ""}
                       : fail_state();
        }
        case K::Write:
            return (y == g.a0) ? resume_copy(cx, x) : fail_state();
        case K::Idle:
            return (x == "a" && y == "a") ? GadgetState{K::Idle, "", "", ""} : fail_state();
        case K::Start:
        case K::Delay:
        case K::Fail:
            break;
    }
    return fail_state();
}

}  // namespace

GameModel tm_to_icgm(const TuringMachine& tm) {
    if (tm.states.empty()) throw std::invalid_argument("machine has no states");
    auto is_state = [&](const std::string& n) {
        return std::find(tm.states.begin(), tm.states.end(), n) != tm.states.end();
    };
    auto is_symbol = [&](const std::string& n) {
        return std::find(tm.alphabet.begin(), tm.alphabet.end(), n) != tm.alphabet.end();
    };
    if (!is_state(tm.initial))
        throw std::invalid_argument("initial state '" + tm.initial + "' is not declared");
    for (const auto& q : tm.accepting)
        if (!is_state(q))
            throw std::invalid_argument("accepting state '" + q + "' is not declared");
    if (is_symbol(tm.blank))
        throw std::invalid_argument("the blank symbol may not be part of the alphabet");
    const std::set<std::string> reserved = {"a", "n1", "n2", "n3"};
    for (const auto& n : tm.states)
        if (reserved.count(n) || is_symbol(n))
            throw std::invalid_argument("machine name '" + n +
                                        "' collides with a reserved action or a tape symbol");
    for (const auto& n : tm.alphabet)
        if (reserved.count(n))
            throw std::invalid_argument("machine name '" + n + "' collides with a reserved action");
    for (const auto& [key, rule] : tm.delta) {
        if (!is_state(key.first) || !is_state(rule.next_state))
            throw std::invalid_argument("delta rule uses an undeclared state");
        if (key.second != tm.blank && !is_symbol(key.second))
            throw std::invalid_argument("delta rule scans an undeclared symbol");
        if (rule.write == tm.blank) throw std::invalid_argument("rule writes the blank symbol");
        if (!is_symbol(rule.write))
            throw std::invalid_argument("delta rule writes an undeclared symbol");
    }

    GadgetCtx cx{tm,
                 std::set<std::string>(tm.alphabet.begin(), tm.alphabet.end()),
                 std::set<std::string>(tm.states.begin(), tm.states.end())};

    std::vector<std::string> a12 = {"a"};
    a12.insert(a12.end(), tm.alphabet.begin(), tm.alphabet.end());
    a12.insert(a12.end(), tm.states.begin(), tm.states.end());

    // Breadth-first unfolding from the start state; only reachable verifier
    // states are materialized.
    std::map<GadgetState, int> index;
    std::vector<GadgetState> order;
    auto intern = [&](const GadgetState& g) {
        auto [it, fresh] = index.try_emplace(g, static_cast<int>(order.size()));
        if (fresh) order.push_back(g);
        return it->second;
    };
    struct Edge {
        int from;
        std::string x, y, n;
        int to;
    };
    std::vector<Edge> edges;
    intern(GadgetState{GadgetState::Start, "", "", ""});
    for (std::size_t i = 0; i < order.size(); ++i) {
        const GadgetState g = order[i];  // copy: order may grow below
        const int from = static_cast<int>(i);
        for (const std::string& x : a12) {
            for (const std::string& y : a12) {
                if (g.kind == GadgetState::Start || g.kind == GadgetState::Delay) {
                    if (x == "a" && y == "a") {
                        const GadgetState both =
                            g.kind == GadgetState::Start
                                ? GadgetState{GadgetState::BothNow, "", "", ""}
                                : GadgetState{GadgetState::BothLater, "", "", ""};
                        edges.push_back({from, x, y, "n1", intern(both)});
                        edges.push_back(
                            {from, x, y, "n2", intern(GadgetState{GadgetState::Delay, "", "", ""})});
                        edges.push_back(
                            {from, x, y, "n3",
                             intern(GadgetState{GadgetState::P1First, "", "", ""})});
                    } else {
                        const int to = intern(fail_state());
                        for (const char* n : {"n1", "n2", "n3"})
                            edges.push_back({from, x, y, n, to});
                    }
                } else {
                    const int to = intern(verifier_next(cx, g, x, y));
                    for (const char* n : {"n1", "n2", "n3"}) edges.push_back({from, x, y, n, to});
                }
            }
        }
    }

    GameModelBuilder b(3);
    b.action("a");
    for (const auto& s : tm.alphabet) b.action(s);
    for (const auto& q : tm.states) b.action(q);
    b.action("n1").action("n2").action("n3");

    std::vector<std::string> names(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        names[i] = gadget_name(order[i]);
        b.state(names[i], order[i].kind == GadgetState::Fail ? std::vector<std::string>{"p"}
                                                             : std::vector<std::string>{});
    }
    const std::vector<std::string> p3_actions = {"n1", "n2", "n3"};
    for (const auto& n : names) b.legal(n, 1, a12).legal(n, 2, a12).legal(n, 3, p3_actions);
    for (const auto& e : edges) b.trans(names[e.from], {e.x, e.y, e.n}, names[e.to]);

    // Observation partitions: start / announcement / everything else, per
    // partner; player 3 keeps the default identity partition.
    std::vector<std::string> p1_ann, p2_ann, p1_rest, p2_rest;
    for (std::size_t i = 0; i < order.size(); ++i) {
        switch (order[i].kind) {
            case GadgetState::Start:
                break;
            case GadgetState::BothNow:
            case GadgetState::BothLater:
                p1_ann.push_back(names[i]);
                p2_ann.push_back(names[i]);
                break;
            case GadgetState::P1First:
                p1_ann.push_back(names[i]);
                p2_rest.push_back(names[i]);
                break;
            case GadgetState::CopyFirst:
            case GadgetState::HeadFirst:
                p1_rest.push_back(names[i]);
                p2_ann.push_back(names[i]);
                break;
            default:
                p1_rest.push_back(names[i]);
                p2_rest.push_back(names[i]);
                break;
        }
    }
    b.obs(1, {{"s0"}, p1_ann, p1_rest});
    b.obs(2, {{"s0"}, p2_ann, p2_rest});
    return b.build();
}

std::vector<std::string> replay_player1_symbols(const GameModel& game,
                                                const StrategyProfile& profile,
                                                int reveal_round, int horizon) {
    if (reveal_round < 1) throw std::invalid_argument("reveal_round must be >= 1");
    if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
    if (profile.size() != 2 || profile[0].owner != 0 || profile[1].owner != 1)
        throw std::invalid_argument("profile must hold the machines of players 1 and 2 in order");
    auto sid = [&](const std::string& n) {
        auto i = game.state_index(n);
        if (!i) throw std::invalid_argument("not a simulation game: missing state " + n);
        return *i;
    };
    auto aid = [&](const std::string& n) {
        auto i = game.action_index(n);
        if (!i) throw std::invalid_argument("not a simulation game: missing action " + n);
        return *i;
    };
    const StateId start = sid("s0"), delay = sid("delay"), reveal = sid("p1_first");
    const ActionId n1 = aid("n1"), n2 = aid("n2"), n3 = aid("n3");

    std::vector<std::string> out;
    StateId cur = start;
    int mem[2] = {0, 0};
    bool revealed = false;
    for (int t = 0; static_cast<int>(out.size()) < horizon; ++t) {
        if (t > reveal_round + horizon + 4)
            throw std::runtime_error("replay left the audit path before the announcement");
        if (cur == reveal) revealed = true;
        Move mv(3);
        for (int j = 0; j < 2; ++j) {
            const ClassId c = game.class_of(j, cur);
            mv[j] = profile[j].out_of(mem[j], c);
            mem[j] = profile[j].next_of(mem[j], c);
        }
        if (cur == start)
            mv[2] = reveal_round == 1 ? n3 : n2;
        else if (cur == delay)
            mv[2] = t + 1 == reveal_round ? n3 : n2;
        else
            mv[2] = n1;
        if (revealed) out.push_back(game.action_name(mv[0]));
        auto nxt = game.successor(cur, mv);
        if (!nxt) throw std::runtime_error("illegal joint move during replay");
        cur = *nxt;
    }
    return out;
}

}  // namespace stratmc
