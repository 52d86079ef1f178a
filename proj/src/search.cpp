#include "stratmc/search.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>

namespace stratmc {

namespace {

// The objective's path body as a formula (for Büchi-based checks).
Formula body_of(const Objective& obj) {
    switch (obj.kind) {
        case ObjKind::NEXT: return Formula::next(obj.arg1);
        case ObjKind::GLOBALLY: return Formula::always(obj.arg1);
        case ObjKind::UNTIL: return Formula::until(obj.arg1, obj.arg2);
        case ObjKind::LTL: return obj.arg1;
    }
    throw std::logic_error("unreachable objective kind");
}

struct Query {
    const GameModel* m;
    std::vector<PlayerId> coalition;  // sorted, unique
    int k;
    std::vector<StateId> starts;
    const Labeling* lab;
    const Objective* obj;
    CoalitionTable table;       // for the full coalition
    BuchiAutomaton neg_buchi;   // accepts exactly the body-violating words

    Query(const GameModel& model, std::vector<PlayerId> coal, int kk,
          std::vector<StateId> startset, const Labeling& labeling, const Objective& objective)
        : m(&model),
          coalition(std::move(coal)),
          k(kk),
          starts(std::move(startset)),
          lab(&labeling),
          obj(&objective),
          table(model, coalition),
          neg_buchi(ltl_to_buchi(Formula::neg(body_of(objective)))) {}

    bool universal_on(const ProductSystem& ps) const {
        if (obj->kind == ObjKind::LTL) {
            std::set<int> inits(ps.initials.begin(), ps.initials.end());
            for (int q0 : inits)
                if (exists_lasso_from(ps, *lab, neg_buchi, q0).has_value()) return false;
            return true;
        }
        std::vector<char> res = check_universal_objective(ps, *lab, *obj);
        return std::all_of(ps.initials.begin(), ps.initials.end(),
                           [&](int q0) { return res[q0] != 0; });
    }

    bool wins(const StrategyProfile& profile) const {
        return universal_on(build_product(*m, profile, starts, table));
    }
};

// Product over (game state, fixed-member memories) keeping only edges that
// are reachable no matter what the remaining coalition members play: any
// violating path here survives in every completion of the prefix.
ProductSystem build_forced_product(const Query& q, const StrategyProfile& fixed) {
    const GameModel& m = *q.m;
    const int d = static_cast<int>(fixed.size());
    const int r = static_cast<int>(q.coalition.size());

    ProductSystem ps;
    ps.model = &m;
    ps.starts = q.starts;
    std::map<std::pair<StateId, std::vector<int>>, int> id_of;
    auto intern = [&](StateId s, std::vector<int> mem) {
        auto key = std::make_pair(s, std::move(mem));
        auto [it, fresh] = id_of.try_emplace(key, static_cast<int>(ps.state_of.size()));
        if (fresh) {
            ps.state_of.push_back(key.first);
            ps.memory_of.push_back(key.second);
            ps.adj.emplace_back();
        }
        return it->second;
    };

    std::vector<int> queue;
    std::vector<int> zero(d, 0);
    for (StateId s : q.starts) {
        int before = static_cast<int>(ps.state_of.size());
        int id = intern(s, zero);
        ps.initials.push_back(id);
        if (id == before) queue.push_back(id);
    }
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        int node = queue[qi];
        StateId s = ps.state_of[node];
        const std::vector<int>& mem = ps.memory_of[node];
        std::vector<ActionId> acts(r);
        std::vector<int> mem2(d);
        for (int j = 0; j < d; ++j) {
            ClassId c = m.class_of(fixed[j].owner, s);
            acts[j] = fixed[j].out_of(mem[j], c);
            mem2[j] = fixed[j].next_of(mem[j], c);
        }
        // Intersect successor sets over every free-member action tuple.
        std::vector<StateId> inter;
        std::vector<int> digit(r - d, 0);
        bool first = true;
        while (true) {
            for (int j = d; j < r; ++j)
                acts[j] = m.legal(s, q.coalition[j])[digit[j - d]];
            const std::vector<StateId>& succ = q.table.successors(s, acts);
            if (first) {
                inter = succ;
                first = false;
            } else {
                std::vector<StateId> keep;
                std::set_intersection(inter.begin(), inter.end(), succ.begin(), succ.end(),
                                      std::back_inserter(keep));
                inter = std::move(keep);
            }
            if (inter.empty()) break;
            int j = r - d - 1;
            while (j >= 0 &&
                   ++digit[j] ==
                       static_cast<int>(m.legal(s, q.coalition[d + j]).size()))
                digit[j--] = 0;
            if (j < 0) break;
        }
        std::set<int> targets;
        for (StateId t : inter) {
            int before = static_cast<int>(ps.state_of.size());
            int id = intern(t, mem2);
            if (id == before) queue.push_back(id);
            targets.insert(id);
        }
        ps.adj[node].assign(targets.begin(), targets.end());
    }
    return ps;
}

SearchOutcome run_serial(const Query& q, const ProfileStream& stream) {
    SearchOutcome out;
    for (std::uint64_t idx = 0; idx < stream.size(); ++idx) {
        StrategyProfile p = stream.get(idx);
        out.examined = sat_add(out.examined, 1);
        if (q.wins(p)) {
            out.found = true;
            out.witness = std::move(p);
            return out;
        }
    }
    return out;
}

SearchOutcome run_parallel(const Query& q, const ProfileStream& stream) {
    const std::uint64_t total = stream.size();
    const std::uint64_t wave = 4096;
    SearchOutcome out;
    for (std::uint64_t base = 0; base < total; base += wave) {
        const long long lo = static_cast<long long>(base);
        const long long hi = static_cast<long long>(std::min(total, base + wave));
        unsigned long long best = ULLONG_MAX;
        unsigned long long examined = 0;
#pragma omp parallel for schedule(dynamic, 16) reduction(min : best) reduction(+ : examined)
        for (long long i = lo; i < hi; ++i) {
            StrategyProfile p = stream.get(static_cast<std::uint64_t>(i));
            ++examined;
            if (q.wins(p) && static_cast<unsigned long long>(i) < best)
                best = static_cast<unsigned long long>(i);
        }
        out.examined = sat_add(out.examined, examined);
        if (best != ULLONG_MAX) {
            out.found = true;
            out.witness = stream.get(best);
            return out;
        }
    }
    return out;
}

struct LexDfs {
    const Query& q;
    const std::vector<DfstStream>& streams;
    std::vector<CoalitionTable> prefix_tables;  // per depth: owners < depth
    StrategyProfile fixed;
    SearchOutcome out;

    LexDfs(const Query& query, const std::vector<DfstStream>& member_streams)
        : q(query), streams(member_streams) {
        const int r = static_cast<int>(q.coalition.size());
        for (int d = 0; d < r; ++d)
            prefix_tables.emplace_back(
                *q.m, std::vector<PlayerId>(q.coalition.begin(), q.coalition.begin() + d));
    }

    std::optional<StrategyProfile> rec(int depth) {
        const int r = static_cast<int>(q.coalition.size());
        if (depth == r) {
            out.examined = sat_add(out.examined, 1);
            if (q.wins(fixed)) return fixed;
            return std::nullopt;
        }
        // No completion can win: a violating lasso survives every choice of
        // the remaining members.
        ProductSystem forced = build_forced_product(q, fixed);
        if (exists_lasso(forced, *q.lab, q.neg_buchi).has_value()) return std::nullopt;
        // Every completion wins: the objective holds even with the remaining
        // members absorbed adversarially.  Take the stream-first completion.
        ProductSystem adv = build_product(*q.m, fixed, q.starts, prefix_tables[depth]);
        if (q.universal_on(adv)) {
            StrategyProfile w = fixed;
            for (int j = depth; j < r; ++j) w.push_back(streams[j].get(0));
            return w;
        }
        for (std::uint64_t idx = 0; idx < streams[depth].size(); ++idx) {
            fixed.push_back(streams[depth].get(idx));
            auto res = rec(depth + 1);
            fixed.pop_back();
            if (res) return res;
        }
        return std::nullopt;
    }
};

// On-demand cell-assignment search.  Rather than enumerating whole
// profiles, it grows a partial profile one transducer cell at a time,
// driven by the product states actually reachable from the start set:
// processing a product state first fills its members' (memory, class)
// cells — output before memory update, actions in legal-declaration
// order, memory targets capped at one past the member's largest target in
// use (so every winning profile is met up to memory relabeling) — then
// expands its successors under full opponent branching.  Once the region
// is transition-closed it coincides with the reachable product of every
// completion, so the objective can be decided there.  Committed regions
// that already force a violation are discarded wholesale: a freshly
// discovered unsafe state under GLOBALLY, an initial row breaking the goal
// under NEXT, a committed path blocking the until (no goal state yet and a
// state satisfying neither operand) under UNTIL, or a violating lasso
// confined to committed edges otherwise.
struct CellSearch {
    const Query& q;
    const GameModel& m;
    const int r;        // coalition size
    const int k;
    const bool safety;  // GLOBALLY: prune the moment an unsafe state appears

    std::vector<int> classes;               // per member
    std::vector<std::vector<int>> out_tab;  // per member, k*classes, -1 = unset
    std::vector<std::vector<int>> nxt_tab;  // per member, k*classes, -1 = unset
    std::vector<int> maxused;               // per member: largest target in use
    std::vector<char> safe;                 // per game state (GLOBALLY only)
    std::vector<char> goal;                 // per game state (NEXT: arg1 truth)
    std::vector<char> maintain_, reach_;    // per game state (UNTIL operands)

    // Region: product states in discovery order; adj rows exist only for
    // already-expanded states (a prefix of the discovery order).
    std::vector<StateId> state_of;
    std::vector<std::vector<int>> memory_of;
    std::vector<std::vector<int>> adj;
    std::map<std::pair<StateId, std::vector<int>>, int> id_of;
    std::vector<int> initials;
    size_t num_initial_ids = 0;

    SearchOutcome out;

    explicit CellSearch(const Query& query)
        : q(query),
          m(*query.m),
          r(static_cast<int>(query.coalition.size())),
          k(query.k),
          safety(query.obj->kind == ObjKind::GLOBALLY) {
        for (PlayerId j : q.coalition) {
            classes.push_back(m.num_classes(j));
            out_tab.emplace_back(static_cast<size_t>(k) * m.num_classes(j), -1);
            nxt_tab.emplace_back(static_cast<size_t>(k) * m.num_classes(j), -1);
            maxused.push_back(0);
        }
        auto truth_table = [&](const Formula& f) {
            std::vector<char> t(m.num_states());
            for (StateId s = 0; s < m.num_states(); ++s)
                t[s] = eval_prop(f, [&](const std::string& n) { return q.lab->truth(s, n); })
                           ? 1
                           : 0;
            return t;
        };
        if (safety) safe = truth_table(q.obj->arg1);
        if (q.obj->kind == ObjKind::NEXT) goal = truth_table(q.obj->arg1);
        if (q.obj->kind == ObjKind::UNTIL) {
            maintain_ = truth_table(q.obj->arg1);
            reach_ = truth_table(q.obj->arg2);
        }
    }

    // Returns the product id; fresh is set when the state was not known.
    int intern(StateId s, const std::vector<int>& mem, bool& fresh) {
        auto [it, inserted] = id_of.emplace(std::make_pair(s, mem), 0);
        fresh = inserted;
        if (inserted) {
            it->second = static_cast<int>(state_of.size());
            state_of.push_back(s);
            memory_of.push_back(mem);
        }
        return it->second;
    }

    struct Mark {
        size_t nstates, nadj;
        int save_maxused;
    };

    void rollback_region(size_t nstates, size_t nadj) {
        for (size_t id = nstates; id < state_of.size(); ++id)
            id_of.erase(std::make_pair(state_of[id], memory_of[id]));
        state_of.resize(nstates);
        memory_of.resize(nstates);
        adj.resize(nadj);
    }

    // The region as a product system; states not yet expanded are dead ends
    // (they only shorten the set of paths, so violating lassos found here
    // survive in every completion).
    ProductSystem region_view() const {
        ProductSystem ps;
        ps.model = &m;
        ps.state_of = state_of;
        ps.memory_of = memory_of;
        ps.adj = adj;
        ps.adj.resize(state_of.size());
        ps.starts = q.starts;
        ps.initials = initials;
        return ps;
    }

    // All cells of state i are assigned and every earlier state is
    // expanded; add i's successor row.  False if a fresh successor breaks
    // the safety invariant, or if a successor of an initial breaks the NEXT
    // goal.  saw_known reports an edge into an already-interned state — the
    // only kind that can close a cycle.
    bool expand(size_t i, bool& saw_known) {
        const StateId s = state_of[i];
        const std::vector<int> mem = memory_of[i];  // copy: vectors may grow
        const bool from_initial = i < num_initial_ids;
        std::vector<ActionId> acts(r);
        std::vector<int> mem2(r);
        for (int j = 0; j < r; ++j) {
            const int cell = mem[j] * classes[j] + m.class_of(q.coalition[j], s);
            acts[j] = out_tab[j][cell];
            mem2[j] = nxt_tab[j][cell];
        }
        std::vector<int> row;
        for (StateId s2 : q.table.successors(s, acts)) {
            bool fresh = false;
            int id = intern(s2, mem2, fresh);
            if (fresh && safety && !safe[s2]) return false;
            if (from_initial && !goal.empty() && !goal[s2]) return false;
            if (!fresh) saw_known = true;
            row.push_back(id);
        }
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        adj.push_back(std::move(row));
        return true;
    }

    // A committed path from an initial that never meets the reach operand
    // and arrives at a state satisfying neither operand blocks the until in
    // every completion of the region.
    bool until_blocked() const {
        std::vector<char> pend(state_of.size(), 0);
        std::vector<int> work;
        for (int id : initials)
            if (!pend[id]) {
                pend[id] = 1;
                work.push_back(id);
            }
        while (!work.empty()) {
            const int u = work.back();
            work.pop_back();
            const StateId s = state_of[u];
            if (reach_[s]) continue;         // this path is already satisfied
            if (!maintain_[s]) return true;  // neither operand: blocked
            if (static_cast<size_t>(u) >= adj.size()) continue;  // not expanded
            for (int v : adj[u])
                if (!pend[v]) {
                    pend[v] = 1;
                    work.push_back(v);
                }
        }
        return false;
    }

    bool closure_win() {
        out.examined = sat_add(out.examined, 1);
        if (!q.universal_on(region_view())) return false;
        StrategyProfile prof;
        for (int j = 0; j < r; ++j) {
            Dfst d;
            d.owner = q.coalition[j];
            d.k = k;
            d.num_classes = classes[j];
            d.next.resize(static_cast<size_t>(k) * classes[j]);
            d.out.resize(static_cast<size_t>(k) * classes[j]);
            for (int mm = 0; mm < k; ++mm)
                for (ClassId c = 0; c < classes[j]; ++c) {
                    const int cell = mm * classes[j] + c;
                    d.out[cell] = out_tab[j][cell] >= 0
                                      ? out_tab[j][cell]
                                      : m.legal_for_class(q.coalition[j], c)[0];
                    d.next[cell] = nxt_tab[j][cell] >= 0 ? nxt_tab[j][cell] : mm;
                }
            prof.push_back(canonicalize(d, m, k));
        }
        out.found = true;
        out.witness = std::move(prof);
        return true;
    }

    // Process product state i: branch on its first unset cell, or expand
    // and move on.  True once a winner has been recorded.
    bool solve(size_t i) {
        if (i == state_of.size()) return closure_win();
        const StateId s = state_of[i];
        const std::vector<int> mem = memory_of[i];  // copy: vectors may grow
        for (int j = 0; j < r; ++j) {
            const ClassId c = m.class_of(q.coalition[j], s);
            const int cell = mem[j] * classes[j] + c;
            if (out_tab[j][cell] < 0) {
                for (ActionId a : m.legal_for_class(q.coalition[j], c)) {
                    out_tab[j][cell] = a;
                    if (solve(i)) return true;
                    out_tab[j][cell] = -1;
                }
                return false;
            }
            if (nxt_tab[j][cell] < 0) {
                const int hi = std::min(maxused[j] + 1, k - 1);
                for (int v = 0; v <= hi; ++v) {
                    const int save = maxused[j];
                    nxt_tab[j][cell] = v;
                    maxused[j] = std::max(maxused[j], v);
                    const bool won = solve(i);
                    maxused[j] = save;
                    if (won) return true;
                    nxt_tab[j][cell] = -1;
                }
                return false;
            }
        }
        const size_t nstates = state_of.size(), nadj = adj.size();
        bool saw_known = false;
        if (expand(i, saw_known)) {
            // A committed until block, or a violating lasso within the
            // committed edges (one can only have formed if a cycle just
            // closed), survives in every completion.
            bool pruned = !maintain_.empty() && until_blocked();
            pruned = pruned || (!safety && saw_known &&
                                exists_lasso(region_view(), *q.lab, q.neg_buchi).has_value());
            if (!pruned && solve(i + 1)) return true;
        }
        rollback_region(nstates, nadj);
        return false;
    }

    SearchOutcome run() {
        for (StateId s : q.starts) {
            bool fresh = false;
            int id = intern(s, std::vector<int>(r, 0), fresh);
            if (fresh && safety && !safe[s]) return out;  // no profile can win
            initials.push_back(id);
        }
        num_initial_ids = state_of.size();
        if (!maintain_.empty() && until_blocked()) return out;  // blocked at step 0
        solve(0);
        return out;
    }
};

}  // namespace

bool profile_wins(const GameModel& m, const CoalitionTable& table, const StrategyProfile& profile,
                  const std::vector<StateId>& starts, const Labeling& lab, const Objective& obj) {
    ProductSystem ps = build_product(m, profile, starts, table);
    if (obj.kind == ObjKind::LTL) {
        BuchiAutomaton neg = ltl_to_buchi(Formula::neg(obj.arg1));
        std::set<int> inits(ps.initials.begin(), ps.initials.end());
        for (int q0 : inits)
            if (exists_lasso_from(ps, lab, neg, q0).has_value()) return false;
        return true;
    }
    std::vector<char> res = check_universal_objective(ps, lab, obj);
    return std::all_of(ps.initials.begin(), ps.initials.end(),
                       [&](int q0) { return res[q0] != 0; });
}

SearchOutcome find_winning_profile(const GameModel& m, const std::vector<PlayerId>& coalition,
                                   int k, const std::vector<StateId>& starts, const Labeling& lab,
                                   const Objective& obj, SearchEngine engine) {
    if (starts.empty()) throw std::invalid_argument("profile search: empty start set");
    if (k < 1) throw std::invalid_argument("profile search: memory bound must be at least 1");
    std::vector<PlayerId> coal = coalition;
    std::sort(coal.begin(), coal.end());
    coal.erase(std::unique(coal.begin(), coal.end()), coal.end());
    for (PlayerId j : coal)
        if (j < 0 || j >= m.num_players())
            throw std::invalid_argument("profile search: player out of range");
    for (StateId s : starts)
        if (s < 0 || s >= m.num_states())
            throw std::invalid_argument("profile search: start state out of range");

    Query q(m, coal, k, starts, lab, obj);
    ProfileStream stream = enumerate_profiles(m, coal, k);
    if (engine == SearchEngine::Auto)
        engine = (stream.saturated() || stream.size() > kOnDemandThreshold)
                     ? SearchEngine::CellDfs
                     : SearchEngine::Parallel;
    switch (engine) {
        case SearchEngine::Serial: return run_serial(q, stream);
        case SearchEngine::Parallel: return run_parallel(q, stream);
        case SearchEngine::LexDfs: {
            LexDfs dfs(q, stream.members());
            auto res = dfs.rec(0);
            SearchOutcome out = dfs.out;
            if (res) {
                out.found = true;
                out.witness = *res;
            }
            return out;
        }
        case SearchEngine::CellDfs:
        default: return CellSearch(q).run();
    }
}

}  // namespace stratmc
