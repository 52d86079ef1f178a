#include "stratmc/temporal.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <tuple>

namespace stratmc {

namespace {

void require_propositional(const Formula& f, const char* what) {
    if (!is_propositional(f))
        throw std::invalid_argument(std::string(what) + " operand must be propositional");
}

void require_known_props(const Labeling& lab, const Formula& f) {
    for (const auto& name : props_of(f))
        if (!lab.extra.count(name) && !lab.model->prop_index(name))
            throw std::invalid_argument("unknown proposition " + name);
}

bool eval_at(const Labeling& lab, StateId s, const Formula& f) {
    return eval_prop(f, [&](const std::string& name) { return lab.truth(s, name); });
}

}  // namespace

Objective Objective::next(Formula goal) {
    require_propositional(goal, "NEXT");
    return {ObjKind::NEXT, std::move(goal), Formula()};
}

Objective Objective::globally(Formula safe) {
    require_propositional(safe, "GLOBALLY");
    return {ObjKind::GLOBALLY, std::move(safe), Formula()};
}

Objective Objective::until(Formula maintain, Formula goal) {
    require_propositional(maintain, "UNTIL");
    require_propositional(goal, "UNTIL");
    return {ObjKind::UNTIL, std::move(maintain), std::move(goal)};
}

Objective Objective::ltl(Formula body) {
    if (!quantifier_free(body))
        throw std::invalid_argument("path objective contains a strategic quantifier");
    return {ObjKind::LTL, std::move(body), Formula()};
}

Objective objective_from_body(const Formula& body) {
    if (!quantifier_free(body))
        throw std::invalid_argument("path objective contains a strategic quantifier");
    if (body.kind() == FKind::Next && is_propositional(body.body()))
        return Objective::next(body.body());
    if (auto inner = body.match_always(); inner && is_propositional(*inner))
        return Objective::globally(*inner);
    if (body.kind() == FKind::Until && is_propositional(body.left()) &&
        is_propositional(body.right()))
        return Objective::until(body.left(), body.right());
    return Objective::ltl(body);
}

std::vector<char> check_universal_objective(const ProductSystem& ps, const Labeling& lab,
                                            const Objective& obj) {
    if (obj.kind == ObjKind::LTL)
        throw std::invalid_argument("LTL objectives are handled by check_universal_ltl");
    require_known_props(lab, obj.arg1);
    if (obj.kind == ObjKind::UNTIL) require_known_props(lab, obj.arg2);

    const int n = ps.num_states();
    auto eval_all = [&](const Formula& f) {
        std::vector<char> v(n);
        for (int q = 0; q < n; ++q) v[q] = eval_at(lab, ps.state_of[q], f);
        return v;
    };

    std::vector<char> res(n, 0);
    switch (obj.kind) {
        case ObjKind::NEXT: {
            std::vector<char> goal = eval_all(obj.arg1);
            for (int q = 0; q < n; ++q)
                res[q] = std::all_of(ps.adj[q].begin(), ps.adj[q].end(),
                                     [&](int t) { return goal[t]; });
            break;
        }
        case ObjKind::GLOBALLY: {
            // Greatest fixpoint: start from the safe states, peel off any
            // state with an escaping successor.
            res = eval_all(obj.arg1);
            bool changed = true;
            while (changed) {
                changed = false;
                for (int q = 0; q < n; ++q) {
                    if (!res[q]) continue;
                    for (int t : ps.adj[q])
                        if (!res[t]) {
                            res[q] = 0;
                            changed = true;
                            break;
                        }
                }
            }
            break;
        }
        case ObjKind::UNTIL: {
            // Least fixpoint of AU: goal states, plus maintain states all of
            // whose successors are already in.  Totality of the adjacency
            // rules out finite maximal paths.
            std::vector<char> maintain = eval_all(obj.arg1);
            res = eval_all(obj.arg2);
            bool changed = true;
            while (changed) {
                changed = false;
                for (int q = 0; q < n; ++q) {
                    if (res[q] || !maintain[q]) continue;
                    if (std::all_of(ps.adj[q].begin(), ps.adj[q].end(),
                                    [&](int t) { return res[t]; })) {
                        res[q] = 1;
                        changed = true;
                    }
                }
            }
            break;
        }
        case ObjKind::LTL: break;  // unreachable
    }
    return res;
}

// ---------------------------------------------------------------------------
// Tableau construction (negation normal form + on-the-fly node expansion,
// generalized acceptance degeneralized with a counter).

namespace {

enum class NK { TT, FF, AP, NAP, AND, OR, X, U, R };

struct NnfNode {
    NK k;
    int prop = -1;  // AP/NAP: index into the sorted prop list
    int l = -1, r = -1;
};

struct NnfTable {
    std::vector<NnfNode> nodes;
    std::map<std::tuple<int, int, int, int>, int> memo;

    int intern(NK k, int prop, int l, int r) {
        auto key = std::make_tuple(static_cast<int>(k), prop, l, r);
        auto [it, fresh] = memo.try_emplace(key, static_cast<int>(nodes.size()));
        if (fresh) nodes.push_back({k, prop, l, r});
        return it->second;
    }
};

int to_nnf(const Formula& f, bool neg, NnfTable& t, const std::vector<std::string>& props) {
    switch (f.kind()) {
        case FKind::True:
            return t.intern(neg ? NK::FF : NK::TT, -1, -1, -1);
        case FKind::Prop: {
            int p = static_cast<int>(std::lower_bound(props.begin(), props.end(), f.prop_name()) -
                                     props.begin());
            return t.intern(neg ? NK::NAP : NK::AP, p, -1, -1);
        }
        case FKind::Not:
            return to_nnf(f.body(), !neg, t, props);
        case FKind::Or: {
            int l = to_nnf(f.left(), neg, t, props);
            int r = to_nnf(f.right(), neg, t, props);
            return t.intern(neg ? NK::AND : NK::OR, -1, l, r);
        }
        case FKind::Next:
            return t.intern(NK::X, -1, to_nnf(f.body(), neg, t, props), -1);
        case FKind::Until: {
            int l = to_nnf(f.left(), neg, t, props);
            int r = to_nnf(f.right(), neg, t, props);
            return t.intern(neg ? NK::R : NK::U, -1, l, r);
        }
        case FKind::Coalition:
            throw std::invalid_argument("strategic quantifier in a path-only context");
    }
    throw std::logic_error("unreachable formula kind");
}

struct GNode {
    std::set<int> incoming;  // done-node ids; -1 marks "initial"
    std::set<int> old, nxt;
};

struct Expanding {
    std::set<int> incoming, neu, old, nxt;
};

struct Tableau {
    NnfTable& t;
    std::vector<GNode> done;
    std::map<std::pair<std::set<int>, std::set<int>>, int> index;  // (old, nxt) -> id

    explicit Tableau(NnfTable& table) : t(table) {}

    void expand(Expanding q) {
        if (q.neu.empty()) {
            auto key = std::make_pair(q.old, q.nxt);
            if (auto it = index.find(key); it != index.end()) {
                done[it->second].incoming.insert(q.incoming.begin(), q.incoming.end());
                return;
            }
            int id = static_cast<int>(done.size());
            done.push_back({q.incoming, q.old, q.nxt});
            index.emplace(key, id);
            Expanding nx;
            nx.incoming = {id};
            nx.neu = q.nxt;
            expand(std::move(nx));
            return;
        }
        int fid = *q.neu.begin();
        q.neu.erase(q.neu.begin());
        if (q.old.count(fid)) {
            expand(std::move(q));
            return;
        }
        const NnfNode n = t.nodes[fid];
        switch (n.k) {
            case NK::TT:
                expand(std::move(q));
                return;
            case NK::FF:
                return;  // contradiction, drop this node
            case NK::AP:
            case NK::NAP: {
                int dual = t.intern(n.k == NK::AP ? NK::NAP : NK::AP, n.prop, -1, -1);
                if (q.old.count(dual)) return;
                q.old.insert(fid);
                expand(std::move(q));
                return;
            }
            case NK::AND:
                q.old.insert(fid);
                q.neu.insert(n.l);
                q.neu.insert(n.r);
                expand(std::move(q));
                return;
            case NK::OR: {
                Expanding q2 = q;
                q.old.insert(fid);
                q.neu.insert(n.l);
                q2.old.insert(fid);
                q2.neu.insert(n.r);
                expand(std::move(q));
                expand(std::move(q2));
                return;
            }
            case NK::X:
                q.old.insert(fid);
                q.nxt.insert(n.l);
                expand(std::move(q));
                return;
            case NK::U: {
                // l U r  =  r | (l & X(l U r))
                Expanding q2 = q;
                q.old.insert(fid);
                q.neu.insert(n.l);
                q.nxt.insert(fid);
                q2.old.insert(fid);
                q2.neu.insert(n.r);
                expand(std::move(q));
                expand(std::move(q2));
                return;
            }
            case NK::R: {
                // l R r  =  (r & l) | (r & X(l R r))
                Expanding q2 = q;
                q.old.insert(fid);
                q.neu.insert(n.r);
                q.nxt.insert(fid);
                q2.old.insert(fid);
                q2.neu.insert(n.l);
                q2.neu.insert(n.r);
                expand(std::move(q));
                expand(std::move(q2));
                return;
            }
        }
    }
};

}  // namespace

BuchiAutomaton ltl_to_buchi(const Formula& f) {
    BuchiAutomaton ba;
    ba.props = props_of(f);
    if (ba.props.size() > 20)
        throw std::invalid_argument("too many propositions for explicit alphabet");
    const int nletters = 1 << static_cast<int>(ba.props.size());

    NnfTable table;
    int root = to_nnf(f, false, table, ba.props);
    Tableau tb(table);
    Expanding init;
    init.incoming = {-1};
    init.neu = {root};
    tb.expand(std::move(init));

    std::vector<int> untils;
    for (int i = 0; i < static_cast<int>(table.nodes.size()); ++i)
        if (table.nodes[i].k == NK::U) untils.push_back(i);
    const int nacc = static_cast<int>(untils.size());

    // Per tableau node: letter constraint and membership in each acceptance
    // set (set j satisfied unless the node owes untils[j] without its
    // right-hand side).
    const int nn = static_cast<int>(tb.done.size());
    std::vector<unsigned> pos(nn, 0), negm(nn, 0);
    std::vector<std::vector<char>> in_acc(nn, std::vector<char>(std::max(nacc, 1), 1));
    for (int i = 0; i < nn; ++i) {
        for (int id : tb.done[i].old) {
            const NnfNode& n = table.nodes[id];
            if (n.k == NK::AP) pos[i] |= 1u << n.prop;
            if (n.k == NK::NAP) negm[i] |= 1u << n.prop;
        }
        for (int j = 0; j < nacc; ++j)
            in_acc[i][j] = !tb.done[i].old.count(untils[j]) ||
                           tb.done[i].old.count(table.nodes[untils[j]].r) != 0;
    }
    auto matches = [&](int node, int letter) {
        unsigned a = static_cast<unsigned>(letter);
        return (a & pos[node]) == pos[node] && (a & negm[node]) == 0;
    };

    // Degeneralize: states are (node, counter); the counter advances past
    // level j when the source node lies in acceptance set j.
    std::map<std::pair<int, int>, int> id_of;
    std::vector<std::pair<int, int>> states;  // index 0 reserved for iota
    states.emplace_back(-1, -1);
    ba.delta.emplace_back(nletters);
    ba.accepting.push_back(nacc == 0);
    auto intern_state = [&](int node, int level) {
        auto [it, fresh] = id_of.try_emplace({node, level}, static_cast<int>(states.size()));
        if (fresh) {
            states.emplace_back(node, level);
            ba.delta.emplace_back(nletters);
            ba.accepting.push_back(nacc == 0 || (level == 0 && in_acc[node][0]));
        }
        return it->second;
    };

    std::vector<int> queue;
    for (int node = 0; node < nn; ++node) {
        if (!tb.done[node].incoming.count(-1)) continue;
        int id = intern_state(node, 0);
        if (std::find(queue.begin(), queue.end(), id) == queue.end()) queue.push_back(id);
        for (int a = 0; a < nletters; ++a)
            if (matches(node, a)) ba.delta[0][a].push_back(id);
    }
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        int src = queue[qi];
        auto [node, level] = states[src];
        int level2 = nacc == 0 ? 0 : (in_acc[node][level] ? (level + 1) % nacc : level);
        for (int node2 = 0; node2 < nn; ++node2) {
            if (!tb.done[node2].incoming.count(node)) continue;
            int before = static_cast<int>(states.size());
            int tgt = intern_state(node2, level2);
            if (tgt == before) queue.push_back(tgt);
            for (int a = 0; a < nletters; ++a)
                if (matches(node2, a)) ba.delta[src][a].push_back(tgt);
        }
    }
    ba.num_states = static_cast<int>(states.size());
    for (auto& per_letter : ba.delta)
        for (auto& succs : per_letter) {
            std::sort(succs.begin(), succs.end());
            succs.erase(std::unique(succs.begin(), succs.end()), succs.end());
        }
    return ba;
}

// ---------------------------------------------------------------------------
// Nested depth-first emptiness of ps x b.

namespace {

struct NdfsSearch {
    const ProductSystem& ps;
    const BuchiAutomaton& b;
    std::vector<unsigned> mask;  // per product state
    std::set<std::pair<int, int>> blue, red;
    std::optional<Lasso> found;

    NdfsSearch(const ProductSystem& ps_, const Labeling& lab, const BuchiAutomaton& b_)
        : ps(ps_), b(b_) {
        mask.resize(ps.num_states());
        for (int q = 0; q < ps.num_states(); ++q) {
            unsigned m = 0;
            for (size_t i = 0; i < b.props.size(); ++i)
                if (lab.truth(ps.state_of[q], b.props[i])) m |= 1u << i;
            mask[q] = m;
        }
    }

    std::vector<std::pair<int, int>> successors(std::pair<int, int> s) const {
        std::vector<std::pair<int, int>> out;
        for (int q2 : ps.adj[s.first])
            for (int b2 : b.delta[s.second][mask[q2]]) out.emplace_back(q2, b2);
        return out;
    }

    // Inner search: a path from seed back to seed closes an accepting cycle.
    bool red_search(std::pair<int, int> seed, std::vector<std::pair<int, int>>& cycle) {
        struct Frame {
            std::pair<int, int> s;
            std::vector<std::pair<int, int>> succ;
            size_t i = 0;
        };
        std::vector<Frame> stack;
        stack.push_back({seed, successors(seed), 0});
        while (!stack.empty()) {
            Frame& fr = stack.back();
            if (fr.i == fr.succ.size()) {
                stack.pop_back();
                continue;
            }
            auto nxt = fr.succ[fr.i++];
            if (nxt == seed) {
                cycle.clear();
                for (const Frame& f2 : stack) cycle.push_back(f2.s);
                return true;
            }
            if (red.insert(nxt).second) stack.push_back({nxt, successors(nxt), 0});
        }
        return false;
    }

    void blue_search(std::pair<int, int> start) {
        if (found || !blue.insert(start).second) return;
        struct Frame {
            std::pair<int, int> s;
            std::vector<std::pair<int, int>> succ;
            size_t i = 0;
        };
        std::vector<Frame> stack;
        stack.push_back({start, successors(start), 0});
        while (!stack.empty()) {
            Frame& fr = stack.back();
            if (fr.i < fr.succ.size()) {
                auto nxt = fr.succ[fr.i++];
                if (blue.insert(nxt).second) stack.push_back({nxt, successors(nxt), 0});
                continue;
            }
            // Post-order: launch the inner search from accepting states.
            if (b.accepting[fr.s.second]) {
                std::vector<std::pair<int, int>> cycle;
                if (red_search(fr.s, cycle)) {
                    Lasso l;
                    for (size_t i = 0; i + 1 < stack.size(); ++i) l.stem.push_back(stack[i].s);
                    l.cycle = std::move(cycle);
                    found = l;
                    return;
                }
            }
            stack.pop_back();
        }
    }

    void run(const std::vector<int>& start_products) {
        for (int q0 : start_products) {
            for (int b0 : b.delta[0][mask[q0]]) {
                blue_search({q0, b0});
                if (found) return;
            }
        }
    }
};

}  // namespace

std::optional<Lasso> exists_lasso(const ProductSystem& ps, const Labeling& lab,
                                  const BuchiAutomaton& b) {
    std::vector<int> starts = ps.initials;
    std::sort(starts.begin(), starts.end());
    starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
    NdfsSearch s(ps, lab, b);
    s.run(starts);
    return s.found;
}

std::optional<Lasso> exists_lasso_from(const ProductSystem& ps, const Labeling& lab,
                                       const BuchiAutomaton& b, int initial) {
    if (initial < 0 || initial >= ps.num_states())
        throw std::invalid_argument("initial product state out of range");
    NdfsSearch s(ps, lab, b);
    s.run({initial});
    return s.found;
}

std::map<int, bool> check_universal_ltl(const ProductSystem& ps, const Labeling& lab,
                                        const Formula& f) {
    require_known_props(lab, f);
    BuchiAutomaton b = ltl_to_buchi(Formula::neg(f));
    std::map<int, bool> res;
    for (int init : ps.initials)
        if (!res.count(init)) res[init] = !exists_lasso_from(ps, lab, b, init).has_value();
    return res;
}

std::string format_lasso(const ProductSystem& ps, const Lasso& l) {
    std::string out = "lasso:";
    for (const auto& [q, b] : l.stem) out += " " + ps.model->state_name(ps.state_of[q]);
    out += " [";
    for (const auto& [q, b] : l.cycle) out += " " + ps.model->state_name(ps.state_of[q]);
    out += " ]";
    return out;
}

}  // namespace stratmc
