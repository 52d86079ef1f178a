#include "stratmc/checker.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

#include "stratmc/temporal.hpp"

namespace stratmc {

namespace {

// Formula coalitions number players from 1; the engine from 0.
std::vector<PlayerId> to_engine_players(const GameModel& m, const std::vector<int>& coalition) {
    std::vector<PlayerId> out;
    out.reserve(coalition.size());
    for (int p : coalition) {
        if (p < 1 || p > m.num_players())
            throw std::invalid_argument("unknown player " + std::to_string(p) + " in coalition");
        out.push_back(p - 1);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool known_prop(const GameModel& m, const Labeling& lab, const std::string& name) {
    return m.prop_index(name).has_value() || lab.extra.count(name) != 0;
}

// Under incomplete information a strategy cannot act differently on states
// its owner confuses with s, so it must win from every such state.
std::vector<StateId> start_closure(const GameModel& m, StateId s,
                                   const std::vector<PlayerId>& co0, bool incomplete) {
    if (!incomplete || co0.empty()) return {s};
    std::set<StateId> acc;
    for (PlayerId j : co0) {
        const ObservationClass& oc = m.observation_class(j, m.class_of(j, s));
        acc.insert(oc.members.begin(), oc.members.end());
    }
    return std::vector<StateId>(acc.begin(), acc.end());
}

// Packages a search result; witnesses are canonicalized and padded to the
// queried memory bound so they replay under that bound directly.
Verdict package_search(const GameModel& m, StateId s, const SearchOutcome& res, int pad_to) {
    Verdict v;
    v.state = s;
    v.examined = res.examined;
    if (!res.found) return v;  // Fails
    v.kind = VerdictKind::Holds;
    StrategyProfile w;
    for (const Dfst& d : res.witness) {
        Dfst cd = canonicalize(d, m, pad_to);
        v.memory_used = std::max(v.memory_used, reachable_memory(cd));
        w.push_back(std::move(cd));
    }
    v.witness = std::move(w);
    return v;
}

// Independent memoryless searcher: one action per (member, observation
// class), walked as a mixed-radix odometer — members ascending, classes
// ascending within a member, last digit fastest, action values in
// legal-declaration order.  This is exactly the enumeration order of the
// k = 1 profile stream, so verdicts and witnesses can be compared against
// the bounded engines as an oracle.
Verdict run_memoryless(const GameModel& m, StateId s, const std::vector<PlayerId>& co0,
                       const std::vector<StateId>& starts, const Labeling& lab,
                       const Objective& obj) {
    Verdict v;
    v.state = s;
    CoalitionTable table(m, co0);
    const int r = static_cast<int>(co0.size());
    struct Digit {
        int member;
        ClassId cls;
        int base;
    };
    std::vector<Digit> digits;
    for (int j = 0; j < r; ++j)
        for (ClassId c = 0; c < m.num_classes(co0[j]); ++c)
            digits.push_back({j, c, static_cast<int>(m.legal_for_class(co0[j], c).size())});
    StrategyProfile prof;
    for (int j = 0; j < r; ++j) {
        Dfst d;
        d.owner = co0[j];
        d.k = 1;
        d.num_classes = m.num_classes(co0[j]);
        d.next.assign(d.num_classes, 0);
        d.out.assign(d.num_classes, 0);
        prof.push_back(std::move(d));
    }
    std::vector<int> val(digits.size(), 0);
    while (true) {
        for (size_t t = 0; t < digits.size(); ++t)
            prof[digits[t].member].out[digits[t].cls] =
                m.legal_for_class(co0[digits[t].member], digits[t].cls)[val[t]];
        v.examined = sat_add(v.examined, 1);
        if (profile_wins(m, table, prof, starts, lab, obj)) {
            v.kind = VerdictKind::Holds;
            StrategyProfile w;
            for (const Dfst& d : prof) {
                Dfst cd = canonicalize(d, m, 1);
                v.memory_used = std::max(v.memory_used, reachable_memory(cd));
                w.push_back(std::move(cd));
            }
            v.witness = std::move(w);
            return v;
        }
        int t = static_cast<int>(digits.size()) - 1;
        while (t >= 0 && ++val[t] == digits[t].base) val[t--] = 0;
        if (t < 0) break;
    }
    return v;  // Fails
}

Verdict run_bounded(const GameModel& m, StateId s, const std::vector<PlayerId>& co0,
                    const std::vector<StateId>& starts, const Labeling& lab,
                    const Objective& obj, bool incomplete, bool one_shot,
                    const SemanticsSpec& sem) {
    if (sem.k < 1 || sem.k > sem.k_ceiling)
        throw std::invalid_argument("memory bound k must be between 1 and the ceiling " +
                                    std::to_string(sem.k_ceiling));
    if (!incomplete && one_shot && sem.k > 1 && sem.collapse_shortcut) {
        // One-shot complete-information goals are positionally determined:
        // some memoryless profile wins iff any k-memory profile does.
        SearchOutcome res = find_winning_profile(m, co0, 1, starts, lab, obj, sem.engine);
        return package_search(m, s, res, sem.k);
    }
    SearchOutcome res = find_winning_profile(m, co0, sem.k, starts, lab, obj, sem.engine);
    return package_search(m, s, res, sem.k);
}

// Propositional truth per state.
std::vector<char> sat_prop(const GameModel& m, const Labeling& lab, const Formula& f) {
    std::vector<char> out(m.num_states());
    for (StateId s = 0; s < m.num_states(); ++s)
        out[s] = eval_prop(f, [&](const std::string& n) { return lab.truth(s, n); }) ? 1 : 0;
    return out;
}

// States where some coalition action tuple forces every successor into
// `target` (controllable predecessor).
std::vector<char> pre_force(const CoalitionTable& table, const std::vector<char>& target) {
    const GameModel& m = table.model();
    std::vector<char> out(m.num_states(), 0);
    for (StateId s = 0; s < m.num_states(); ++s)
        for (int t = 0; t < table.num_tuples(s); ++t) {
            const std::vector<StateId>& succ = table.successors_by_tuple(s, t);
            if (std::all_of(succ.begin(), succ.end(),
                            [&](StateId x) { return target[x] != 0; })) {
                out[s] = 1;
                break;
            }
        }
    return out;
}

// Satisfying states of a nested single-step coalition formula by the
// controllable-predecessor fixpoints.
std::vector<char> sat_set(const GameModel& m, const Labeling& lab, const Formula& f) {
    const int n = m.num_states();
    switch (f.kind()) {
        case FKind::True: return std::vector<char>(n, 1);
        case FKind::Prop: {
            if (!known_prop(m, lab, f.prop_name()))
                throw std::invalid_argument("unknown proposition " + f.prop_name());
            std::vector<char> out(n);
            for (StateId s = 0; s < n; ++s) out[s] = lab.truth(s, f.prop_name()) ? 1 : 0;
            return out;
        }
        case FKind::Not: {
            std::vector<char> b = sat_set(m, lab, f.body());
            for (char& x : b) x = x ? 0 : 1;
            return b;
        }
        case FKind::Or: {
            std::vector<char> l = sat_set(m, lab, f.left());
            std::vector<char> r = sat_set(m, lab, f.right());
            for (int i = 0; i < n; ++i) l[i] = (l[i] || r[i]) ? 1 : 0;
            return l;
        }
        case FKind::Coalition: {
            std::vector<PlayerId> co0 = to_engine_players(m, f.players());
            CoalitionTable table(m, co0);
            const Formula body = f.body();
            if (auto inner = body.match_always()) {
                // greatest fixpoint: Z = [[phi]] ∩ Pre(Z)
                std::vector<char> phi = sat_set(m, lab, *inner);
                std::vector<char> z = phi;
                while (true) {
                    std::vector<char> pre = pre_force(table, z);
                    std::vector<char> z2(n);
                    for (int i = 0; i < n; ++i) z2[i] = (phi[i] && pre[i]) ? 1 : 0;
                    if (z2 == z) return z;
                    z = std::move(z2);
                }
            }
            if (body.kind() == FKind::Next) return pre_force(table, sat_set(m, lab, body.body()));
            if (body.kind() == FKind::Until) {
                // least fixpoint: Z = [[psi]] ∪ ([[phi]] ∩ Pre(Z))
                std::vector<char> phi = sat_set(m, lab, body.left());
                std::vector<char> psi = sat_set(m, lab, body.right());
                std::vector<char> z = psi;
                while (true) {
                    std::vector<char> pre = pre_force(table, z);
                    std::vector<char> z2(n);
                    for (int i = 0; i < n; ++i) z2[i] = (psi[i] || (phi[i] && pre[i])) ? 1 : 0;
                    if (z2 == z) return z;
                    z = std::move(z2);
                }
            }
            throw std::invalid_argument("fixpoint checker: coalition body must be X, G, or U");
        }
        case FKind::Next:
        case FKind::Until: break;
    }
    throw std::invalid_argument(
        "fixpoint checker: bare temporal operator outside a coalition quantifier");
}

// Perfect recall where it is decidable; see the header for the case split.
Verdict run_perfect_recall(const GameModel& m, StateId s, const std::vector<int>& coalition,
                           const std::vector<PlayerId>& co0, const Formula& body,
                           const Objective& obj, bool incomplete, bool one_shot,
                           const SemanticsSpec& sem, const Labeling& lab) {
    Verdict v;
    v.state = s;
    if (incomplete)
        throw UnsupportedSemantics(
            "semantics iR (incomplete information, perfect recall) is undecidable; no checking "
            "procedure is available");
    if (one_shot) {
        CoalitionTable table(m, co0);
        std::vector<char> res;
        switch (obj.kind) {
            case ObjKind::NEXT: res = pre_force(table, sat_prop(m, lab, obj.arg1)); break;
            case ObjKind::GLOBALLY: {
                std::vector<char> phi = sat_prop(m, lab, obj.arg1);
                res = phi;
                while (true) {
                    std::vector<char> pre = pre_force(table, res);
                    std::vector<char> z2(m.num_states());
                    for (int i = 0; i < m.num_states(); ++i) z2[i] = (phi[i] && pre[i]) ? 1 : 0;
                    if (z2 == res) break;
                    res = std::move(z2);
                }
                break;
            }
            case ObjKind::UNTIL: {
                std::vector<char> phi = sat_prop(m, lab, obj.arg1);
                std::vector<char> psi = sat_prop(m, lab, obj.arg2);
                res = psi;
                while (true) {
                    std::vector<char> pre = pre_force(table, res);
                    std::vector<char> z2(m.num_states());
                    for (int i = 0; i < m.num_states(); ++i)
                        z2[i] = (psi[i] || (phi[i] && pre[i])) ? 1 : 0;
                    if (z2 == res) break;
                    res = std::move(z2);
                }
                break;
            }
            case ObjKind::LTL: throw std::logic_error("one-shot dispatch on LTL objective");
        }
        v.kind = res[s] ? VerdictKind::Holds : VerdictKind::Fails;
        return v;
    }
    if (co0.empty()) {
        // No strategic power: the body must hold on every path.
        CoalitionTable table(m, co0);
        if (profile_wins(m, table, StrategyProfile{}, {s}, lab, obj)) {
            v.kind = VerdictKind::Holds;
            v.witness = StrategyProfile{};
        }
        return v;
    }
    if (static_cast<int>(co0.size()) == m.num_players()) {
        // Everyone cooperates: the body must hold on some path, i.e. an
        // accepting lasso of the unrestricted product exists.  The lasso
        // itself converts into a finite-memory witness profile (memory =
        // one state per lasso position).
        ProductSystem ps = build_product(m, StrategyProfile{}, {s});
        BuchiAutomaton b = ltl_to_buchi(body);
        std::optional<Lasso> lasso = exists_lasso(ps, lab, b);
        if (!lasso) return v;  // Fails
        std::vector<std::pair<int, int>> pos = lasso->stem;
        pos.insert(pos.end(), lasso->cycle.begin(), lasso->cycle.end());
        const int L = static_cast<int>(pos.size());
        const int back = static_cast<int>(lasso->stem.size());
        std::vector<StateId> g(L);
        for (int i = 0; i < L; ++i) g[i] = ps.state_of[pos[i].first];
        std::vector<Move> mv(L);
        for (int i = 0; i < L; ++i) {
            const StateId target = g[i + 1 < L ? i + 1 : back];
            for (const auto& [move, succ] : m.successors(g[i]))
                if (succ == target) {
                    mv[i] = move;
                    break;
                }
        }
        StrategyProfile prof;
        for (PlayerId j = 0; j < m.num_players(); ++j) {
            Dfst d;
            d.owner = j;
            d.k = L;
            d.num_classes = m.num_classes(j);
            d.next.resize(static_cast<size_t>(L) * d.num_classes);
            d.out.resize(static_cast<size_t>(L) * d.num_classes);
            for (int mm = 0; mm < L; ++mm)
                for (ClassId c = 0; c < d.num_classes; ++c) {
                    d.next[mm * d.num_classes + c] = mm;
                    d.out[mm * d.num_classes + c] = m.legal_for_class(j, c)[0];
                }
            for (int i = 0; i < L; ++i) {
                const ClassId c = m.class_of(j, g[i]);
                d.next[i * d.num_classes + c] = i + 1 < L ? i + 1 : back;
                d.out[i * d.num_classes + c] = mv[i][j];
            }
            Dfst cd = canonicalize(d, m, L);
            v.memory_used = std::max(v.memory_used, reachable_memory(cd));
            prof.push_back(std::move(cd));
        }
        v.kind = VerdictKind::Holds;
        v.witness = std::move(prof);
        return v;
    }
    if (sem.cap > 0)
        return check_finite_memory_deepening(m, s, coalition, body, sem.cap, sem, lab);
    throw UnsupportedSemantics(
        "semantics IR with a general path body is decided for the empty and the full coalition "
        "only; set a deepening cap for a Holds-or-Unknown fallback on proper coalitions");
}

void validate_quantified_inputs(const GameModel& m, StateId s, const Formula& body,
                                const Labeling& lab) {
    if (s < 0 || s >= m.num_states())
        throw std::invalid_argument("state out of range");
    if (!body || !quantifier_free(body))
        throw std::invalid_argument(
            "quantified body must be quantifier-free; resolve inner quantifiers first "
            "(evaluate does this)");
    for (const std::string& name : props_of(body))
        if (!known_prop(m, lab, name))
            throw std::invalid_argument("unknown proposition " + name);
}

// Three-valued propositional evaluation: 0 false, 1 true, 2 unknown.
int eval3(const Formula& f, StateId s, const std::map<std::string, std::vector<int>>& tri,
          const Labeling& lab) {
    switch (f.kind()) {
        case FKind::True: return 1;
        case FKind::Prop: {
            if (auto it = tri.find(f.prop_name()); it != tri.end()) return it->second[s];
            return lab.truth(s, f.prop_name()) ? 1 : 0;
        }
        case FKind::Not: {
            const int b = eval3(f.body(), s, tri, lab);
            return b == 2 ? 2 : 1 - b;
        }
        case FKind::Or: {
            const int l = eval3(f.left(), s, tri, lab);
            const int r = eval3(f.right(), s, tri, lab);
            if (l == 1 || r == 1) return 1;
            if (l == 2 || r == 2) return 2;
            return 0;
        }
        case FKind::Coalition:
        case FKind::Next:
        case FKind::Until: break;
    }
    throw std::logic_error("three-valued evaluation reached a non-propositional node");
}

}  // namespace

bool resolved_incomplete(const GameModel& m, const SemanticsSpec& sem) {
    switch (sem.info) {
        case InfoMode::Auto: return !m.complete_information();
        case InfoMode::Complete:
            if (!m.complete_information())
                throw std::invalid_argument(
                    "complete-information semantics requested on a model with observation "
                    "partitions");
            return false;
        case InfoMode::Incomplete: return true;
    }
    return true;
}

std::string semantics_name(const GameModel& m, const SemanticsSpec& sem) {
    std::string out = resolved_incomplete(m, sem) ? "i" : "I";
    switch (sem.memory) {
        case MemoryMode::Memoryless: out += "r"; break;
        case MemoryMode::Bounded: out += "F_" + std::to_string(sem.k); break;
        case MemoryMode::Finite: out += "F"; break;
        case MemoryMode::PerfectRecall: out += "R"; break;
    }
    return out;
}

const char* verdict_name(VerdictKind k) {
    switch (k) {
        case VerdictKind::Holds: return "Holds";
        case VerdictKind::Fails: return "Fails";
        case VerdictKind::Unknown: return "Unknown";
    }
    return "?";
}

Verdict check_quantified(const GameModel& m, StateId s, const std::vector<int>& coalition,
                         const Formula& body, const SemanticsSpec& sem, const Labeling& lab) {
    validate_quantified_inputs(m, s, body, lab);
    const std::vector<PlayerId> co0 = to_engine_players(m, coalition);
    const bool incomplete = resolved_incomplete(m, sem);
    const Objective obj = objective_from_body(body);
    const bool one_shot = obj.kind != ObjKind::LTL;
    const std::vector<StateId> starts = start_closure(m, s, co0, incomplete);
    switch (sem.memory) {
        case MemoryMode::Memoryless: return run_memoryless(m, s, co0, starts, lab, obj);
        case MemoryMode::Bounded:
            return run_bounded(m, s, co0, starts, lab, obj, incomplete, one_shot, sem);
        case MemoryMode::Finite:
            if (sem.cap <= 0) {
                if (incomplete)
                    throw UnsupportedSemantics(
                        "semantics " + semantics_name(m, sem) +
                        ": unbounded finite-memory satisfaction is undecidable in general; set a "
                        "deepening cap to obtain Holds-or-Unknown answers");
                throw std::invalid_argument("finite-memory semantics requires a deepening cap");
            }
            return check_finite_memory_deepening(m, s, coalition, body, sem.cap, sem, lab);
        case MemoryMode::PerfectRecall:
            return run_perfect_recall(m, s, coalition, co0, body, obj, incomplete, one_shot, sem,
                                      lab);
    }
    throw std::logic_error("unreachable memory mode");
}

Verdict check_quantified(const GameModel& m, StateId s, const std::vector<int>& coalition,
                         const Formula& body, const SemanticsSpec& sem) {
    Labeling lab(m);
    return check_quantified(m, s, coalition, body, sem, lab);
}

std::vector<StateId> check_atl_fixpoint_complete(const GameModel& m, const Formula& f,
                                                 const Labeling& lab) {
    if (!m.complete_information())
        throw std::invalid_argument("fixpoint checker requires a complete-information model");
    if (!f) throw std::invalid_argument("empty formula");
    const FragmentTag tag = classify(f);
    if (tag != FragmentTag::PROPOSITIONAL && tag != FragmentTag::ATL0 && tag != FragmentTag::ATL)
        throw std::invalid_argument(
            std::string("fixpoint checker expects nested single-step coalition formulas; got ") +
            fragment_name(tag));
    std::vector<char> res = sat_set(m, lab, f);
    std::vector<StateId> out;
    for (StateId s = 0; s < m.num_states(); ++s)
        if (res[s]) out.push_back(s);
    return out;
}

std::vector<StateId> check_atl_fixpoint_complete(const GameModel& m, const Formula& f) {
    Labeling lab(m);
    return check_atl_fixpoint_complete(m, f, lab);
}

Verdict check_finite_memory_deepening(const GameModel& m, StateId s,
                                      const std::vector<int>& coalition, const Formula& body,
                                      int cap, const SemanticsSpec& sem, const Labeling& lab) {
    if (cap < 1 || cap > sem.k_ceiling)
        throw std::invalid_argument("deepening cap must be between 1 and the ceiling " +
                                    std::to_string(sem.k_ceiling));
    validate_quantified_inputs(m, s, body, lab);
    const std::vector<PlayerId> co0 = to_engine_players(m, coalition);
    const bool incomplete = resolved_incomplete(m, sem);
    const Objective obj = objective_from_body(body);
    const bool one_shot = obj.kind != ObjKind::LTL;
    // Positionally determined goals make the k = 1 round conclusive.
    const bool conclusive = !incomplete && one_shot;
    const std::vector<StateId> starts = start_closure(m, s, co0, incomplete);
    Verdict v;
    v.state = s;
    for (int k = 1; k <= cap; ++k) {
        SearchOutcome res = find_winning_profile(m, co0, k, starts, lab, obj, sem.engine);
        v.examined = sat_add(v.examined, res.examined);
        if (res.found) {
            Verdict hit = package_search(m, s, res, k);
            hit.examined = v.examined;
            return hit;
        }
        if (conclusive) return v;  // Fails
    }
    v.kind = VerdictKind::Unknown;
    v.memory_used = cap;
    return v;
}

Verdict check_finite_memory_deepening(const GameModel& m, StateId s,
                                      const std::vector<int>& coalition, const Formula& body,
                                      int cap, const SemanticsSpec& sem) {
    Labeling lab(m);
    return check_finite_memory_deepening(m, s, coalition, body, cap, sem, lab);
}

std::map<StateId, Verdict> evaluate(const GameModel& m, const Formula& f,
                                    const SemanticsSpec& sem) {
    if (!f) throw std::invalid_argument("empty formula");
    for (const std::string& name : props_of(f))
        if (!m.prop_index(name).has_value())
            throw std::invalid_argument("unknown proposition " + name);
    for (const Formula& g : strategic_subformulas(f)) to_engine_players(m, g.players());
    if (!is_state_formula(f))
        throw std::invalid_argument(
            "top-level formula must be a state formula; wrap bare temporal operators in a "
            "coalition quantifier");
    resolved_incomplete(m, sem);  // reject impossible info stances up front

    const int n = m.num_states();
    Labeling lab(m);
    Formula cur = f;
    std::map<std::string, std::vector<int>> tri;  // auxiliary prop -> three-valued column
    std::set<std::string> tainted;                // auxiliary props with Unknown entries
    std::vector<unsigned long long> examined(n, 0);
    std::map<StateId, Verdict> last;
    std::string last_name;
    int round = 0;

    while (true) {
        std::vector<Formula> subs = strategic_subformulas(cur);
        if (subs.empty()) break;
        const Formula g = subs.front();  // innermost: its body is quantifier-free
        ++round;
        std::string name = "@q" + std::to_string(round);
        while (m.prop_index(name).has_value() || lab.extra.count(name)) name += "_";
        bool body_tainted = false;
        for (const std::string& pn : props_of(g.body()))
            if (tainted.count(pn)) body_tainted = true;
        std::map<StateId, Verdict> verdicts;
        std::vector<int> col(n, 0);
        std::vector<char> holds01(n, 0);
        bool any_unknown = false;
        for (StateId s = 0; s < n; ++s) {
            Verdict v;
            if (body_tainted) {
                // The body mentions results we could not decide; deciding
                // this quantifier could require searching over unknown
                // labels, so give it up wholesale.
                v.kind = VerdictKind::Unknown;
                v.state = s;
            } else {
                v = check_quantified(m, s, g.players(), g.body(), sem, lab);
            }
            examined[s] = sat_add(examined[s], v.examined);
            col[s] = v.kind == VerdictKind::Holds ? 1 : v.kind == VerdictKind::Fails ? 0 : 2;
            holds01[s] = v.kind == VerdictKind::Holds ? 1 : 0;
            any_unknown = any_unknown || v.kind == VerdictKind::Unknown;
            verdicts.emplace(s, std::move(v));
        }
        if (any_unknown) tainted.insert(name);
        tri[name] = std::move(col);
        lab.add(name, std::move(holds01));
        cur = substitute(cur, g, name);
        last = std::move(verdicts);
        last_name = name;
    }

    std::map<StateId, Verdict> out;
    if (!last_name.empty() && cur == Formula::prop(last_name)) {
        // The formula was headed by its outermost quantifier: keep the
        // quantifier verdicts (witnesses included), with cumulative counts.
        for (auto& [s, v] : last) {
            v.examined = examined[s];
            out.emplace(s, std::move(v));
        }
        return out;
    }
    for (StateId s = 0; s < n; ++s) {
        const int r3 = eval3(cur, s, tri, lab);
        Verdict v;
        v.state = s;
        v.kind = r3 == 1   ? VerdictKind::Holds
                 : r3 == 0 ? VerdictKind::Fails
                           : VerdictKind::Unknown;
        v.examined = examined[s];
        out.emplace(s, v);
    }
    return out;
}

}  // namespace stratmc
