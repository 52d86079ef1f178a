// Acceptance suite: ten end-to-end criteria, printed as one PASS/FAIL line
// each; the binary exits 0 only when every criterion passes.  Each criterion
// checks the engine against an independent reference — the controllable-
// predecessor fixpoint, explicit lasso enumeration, a brute-force outcome
// simulation, direct graph fixpoints written here, or iterated machine
// stepping — so a passing run means the implementations corroborate each
// other, not that one code path agrees with itself.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "stratmc/checker.hpp"
#include "stratmc/common.hpp"
#include "stratmc/fixtures.hpp"
#include "stratmc/game_model.hpp"
#include "stratmc/logic.hpp"
#include "stratmc/product.hpp"
#include "stratmc/search.hpp"
#include "stratmc/strategy.hpp"
#include "stratmc/temporal.hpp"
#include "stratmc/turing.hpp"
#include "temporal_oracle.hpp"
#include "test_util.hpp"

using namespace stratmc;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Formula F(const std::string& s) { return parse_formula(s); }

SemanticsSpec bounded_k(int k, bool shortcut = true) {
    SemanticsSpec sem;
    sem.memory = MemoryMode::Bounded;
    sem.k = k;
    sem.collapse_shortcut = shortcut;
    return sem;
}

SemanticsSpec memoryless() {
    SemanticsSpec sem;
    sem.memory = MemoryMode::Memoryless;
    return sem;
}

SemanticsSpec deepened(int cap) {
    SemanticsSpec sem;
    sem.memory = MemoryMode::Finite;
    sem.cap = cap;
    return sem;
}

SemanticsSpec recall() {
    SemanticsSpec sem;
    sem.memory = MemoryMode::PerfectRecall;
    return sem;
}

std::set<StateId> holding(const std::map<StateId, Verdict>& res) {
    std::set<StateId> out;
    for (const auto& [s, v] : res)
        if (v.holds()) out.insert(s);
    return out;
}

// One-quantifier bodies with X/G/U/F over the single proposition, both
// polarities; every corpus model declares p.
const std::vector<std::string>& atl0_bodies() {
    static const std::vector<std::string> b = {"X p",      "X !p",     "G p",      "G !p",
                                               "(p U p)",  "(p U !p)", "(!p U p)", "(!p U !p)",
                                               "F p",      "F !p"};
    return b;
}

// Path bodies with nested temporal operators (outside the one-shot shapes).
const std::vector<std::string>& ltl_bodies() {
    static const std::vector<std::string> b = {"X X p", "F (G p)"};
    return b;
}

std::vector<std::string> all_bodies() {
    std::vector<std::string> out = atl0_bodies();
    out.insert(out.end(), ltl_bodies().begin(), ltl_bodies().end());
    return out;
}

// Every coalition of the model's players in front of every body.
std::vector<std::string> quantified(const GameModel& m, const std::vector<std::string>& bodies) {
    std::vector<std::string> prefixes;
    if (m.num_players() == 1)
        prefixes = {"<<>>", "<<1>>"};
    else
        prefixes = {"<<>>", "<<1>>", "<<2>>", "<<1,2>>"};
    std::vector<std::string> out;
    for (const auto& pre : prefixes)
        for (const auto& body : bodies) out.push_back(pre + " " + body);
    return out;
}

struct Corpus {
    struct Entry {
        std::string name;
        GameModel model;
    };
    std::vector<Entry> fixtures;    // the bundled models
    std::vector<Entry> complete;    // 200 random unpartitioned models
    std::vector<Entry> incomplete;  // 60 random partitioned models
};

Corpus build_corpus() {
    Corpus c;
    c.fixtures.push_back({"fig1", fig1_model()});
    c.fixtures.push_back({"fig2", fig2_model()});
    for (int k = 1; k <= 3; ++k)
        c.fixtures.push_back({"fig3(" + std::to_string(k) + ")", fig3_family(k)});
    std::mt19937 rng(987654321);
    for (int i = 0; i < 200; ++i)
        c.complete.push_back(
            {"complete#" + std::to_string(i), testutil::random_model(rng, 4, 2, 2, false)});
    for (int i = 0; i < 60; ++i)
        c.incomplete.push_back(
            {"incomplete#" + std::to_string(i), testutil::random_model(rng, 4, 2, 2, true)});
    return c;
}

// A product kept for the lasso-oracle criterion.
struct SmallProduct {
    const GameModel* model;
    std::string model_name;
    StrategyProfile profile;
    ProductSystem ps;
};

struct Ctx {
    Corpus corpus;
    // Verdict maps shared between criteria, keyed (model, formula, tag).
    std::map<std::tuple<std::string, std::string, std::string>, std::map<StateId, Verdict>> cache;
    std::vector<SmallProduct> small_products;

    const std::map<StateId, Verdict>& eval_cached(const Corpus::Entry& e, const std::string& f,
                                                  const SemanticsSpec& sem,
                                                  const std::string& tag) {
        const auto key = std::make_tuple(e.name, f, tag);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        return cache.emplace(key, evaluate(e.model, F(f), sem)).first->second;
    }

    template <typename Fn>
    void for_each_entry(Fn&& fn) {
        for (const auto* group : {&corpus.fixtures, &corpus.complete, &corpus.incomplete})
            for (const auto& e : *group) fn(e);
    }
};

// ---------------------------------------------------------------------------
// Criterion 1: on the wait/go chain, enforcing p after exactly k steps
// needs exactly k memory states.
bool crit1_fig2_separation(Ctx&, std::string& why) {
    const GameModel m = fig2_model();
    std::string body = "p";
    for (int k = 1; k <= 4; ++k) {
        body = "X " + body;
        const Formula f = F("<<1>> " + body);
        auto t0 = Clock::now();
        const Verdict at_k = evaluate(m, f, bounded_k(k)).at(0);
        double ms = ms_since(t0);
        if (ms >= 5000) {
            why = "memory-" + std::to_string(k) + " query took " + std::to_string(ms) + " ms";
            return false;
        }
        if (!at_k.holds()) {
            why = "<<1>> " + body + " should hold at s0 with memory " + std::to_string(k);
            return false;
        }
        if (k >= 2) {
            t0 = Clock::now();
            const Verdict below = evaluate(m, f, bounded_k(k - 1)).at(0);
            ms = ms_since(t0);
            if (ms >= 5000) {
                why = "memory-" + std::to_string(k - 1) + " query took " + std::to_string(ms) +
                      " ms";
                return false;
            }
            if (below.kind != VerdictKind::Fails) {
                why = "<<1>> " + body + " should fail at s0 with memory " + std::to_string(k - 1);
                return false;
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Criterion 2: on the blind chain of length k, reaching p under incomplete
// information needs exactly k memory states.
bool crit2_fig3_separation(Ctx&, std::string& why) {
    const Formula f = F("<<1>> F p");
    for (int k = 1; k <= 3; ++k) {
        const GameModel m = fig3_family(k);
        auto t0 = Clock::now();
        const Verdict at_k = evaluate(m, f, bounded_k(k)).at(0);
        double ms = ms_since(t0);
        if (ms >= 60000) {
            why = "family-" + std::to_string(k) + " query took " + std::to_string(ms) + " ms";
            return false;
        }
        if (!at_k.holds()) {
            why = "<<1>> F p should hold at s0 of family " + std::to_string(k) + " with memory " +
                  std::to_string(k);
            return false;
        }
        if (k >= 2) {
            t0 = Clock::now();
            const Verdict below = evaluate(m, f, bounded_k(k - 1)).at(0);
            ms = ms_since(t0);
            if (ms >= 60000) {
                why = "family-" + std::to_string(k) + " lower query took " + std::to_string(ms) +
                      " ms";
                return false;
            }
            if (below.kind != VerdictKind::Fails) {
                why = "<<1>> F p should fail at s0 of family " + std::to_string(k) +
                      " with memory " + std::to_string(k - 1);
                return false;
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Criterion 3: under complete information, one-shot verdicts are the same
// for memory bounds 1..3 (searched for real with the collapse shortcut off,
// then again with it on) and match the controllable-predecessor fixpoint.
bool crit3_complete_collapse(Ctx& c, std::string& why) {
    const auto t0 = Clock::now();
    for (const auto& e : c.corpus.complete) {
        for (const std::string& f : quantified(e.model, atl0_bodies())) {
            const std::vector<StateId> fix = check_atl_fixpoint_complete(e.model, F(f));
            const std::set<StateId> want(fix.begin(), fix.end());
            for (int k = 1; k <= 3; ++k) {
                const auto& off =
                    c.eval_cached(e, f, bounded_k(k, false), "F" + std::to_string(k));
                if (holding(off) != want) {
                    why = e.name + " '" + f + "' memory " + std::to_string(k) +
                          " (shortcut off) disagrees with the fixpoint";
                    return false;
                }
                const auto on = evaluate(e.model, F(f), bounded_k(k, true));
                if (holding(on) != want) {
                    why = e.name + " '" + f + "' memory " + std::to_string(k) +
                          " (shortcut on) disagrees with the fixpoint";
                    return false;
                }
            }
        }
    }
    if (ms_since(t0) > 600000) {
        why = "suite exceeded the 10-minute budget";
        return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Criterion 4: the memoryless semantics and the 1-bounded semantics give
// identical verdict maps (witnesses included) on the whole corpus.
bool crit4_memoryless_is_f1(Ctx& c, std::string& why) {
    bool ok = true;
    c.for_each_entry([&](const Corpus::Entry& e) {
        if (!ok) return;
        for (const std::string& f : quantified(e.model, all_bodies())) {
            const auto& vr = c.eval_cached(e, f, memoryless(), "r");
            const auto& v1 = c.eval_cached(e, f, bounded_k(1, false), "F1");
            if (vr != v1) {
                why = e.name + " '" + f + "': memoryless and 1-bounded verdicts differ";
                ok = false;
                return;
            }
        }
    });
    return ok;
}

// ---------------------------------------------------------------------------
// Criterion 5: raising the memory bound never loses a Holds (1 -> 2 -> 3),
// for one-shot and nested path bodies alike, across the corpus.
bool crit5_monotonicity(Ctx& c, std::string& why) {
    bool ok = true;
    c.for_each_entry([&](const Corpus::Entry& e) {
        if (!ok) return;
        for (const std::string& f : quantified(e.model, all_bodies())) {
            std::set<StateId> prev = holding(c.eval_cached(e, f, bounded_k(1, false), "F1"));
            for (int k = 2; k <= 3; ++k) {
                const std::set<StateId> cur =
                    holding(c.eval_cached(e, f, bounded_k(k, false), "F" + std::to_string(k)));
                if (!std::includes(cur.begin(), cur.end(), prev.begin(), prev.end())) {
                    why = e.name + " '" + f + "': a state holds with memory " +
                          std::to_string(k - 1) + " but not with " + std::to_string(k);
                    ok = false;
                    return;
                }
                prev = cur;
            }
        }
    });
    return ok;
}

// ---------------------------------------------------------------------------
// Criterion 6: product systems agree with a brute-force simulation that
// drives the strategies through apply_strategy directly, to a prefix depth
// of one more than the product's state count.
std::vector<std::vector<PlayerId>> coalitions_of(const GameModel& m) {
    if (m.num_players() == 1) return {{}, {0}};
    return {{}, {0}, {1}, {0, 1}};
}

StrategyProfile draw_profile(const GameModel& m, const std::vector<PlayerId>& coalition, int k,
                             std::mt19937& rng) {
    if (coalition.empty()) return {};
    ProfileStream stream(m, coalition, k);
    const std::uint64_t idx =
        std::uniform_int_distribution<std::uint64_t>(0, stream.size() - 1)(rng);
    return stream.get(idx);
}

bool crit6_product_correspondence(Ctx& c, std::string& why) {
    std::mt19937 rng(20260823);
    for (const auto& e : c.corpus.fixtures) {
        const GameModel& m = e.model;
        const auto coalitions = coalitions_of(m);
        std::vector<StateId> starts(m.num_states());
        std::iota(starts.begin(), starts.end(), 0);
        for (int i = 0; i < 100; ++i) {
            const auto& coalition = coalitions[i % coalitions.size()];
            const int k = 1 + static_cast<int>(rng() % 3);
            const StrategyProfile profile = draw_profile(m, coalition, k, rng);
            ProductSystem ps = build_product(m, profile, starts);
            const int depth = ps.num_states() + 1;
            if (!outcome_correspondence_check(m, profile, ps, depth)) {
                why = e.name + ": outcome simulation diverged (coalition of " +
                      std::to_string(coalition.size()) + ", memory " + std::to_string(k) + ")";
                return false;
            }
            if (ps.num_states() <= 8)
                c.small_products.push_back({&e.model, e.name, profile, std::move(ps)});
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Criterion 7: universal path checks versus exhaustive lasso enumeration on
// the small products collected above.

// Counts the (stem, cycle) splits the walk enumerator would visit from q0;
// negative when the split or node budget is exceeded.
long long count_splits(const ProductSystem& ps, int q0, int max_stem, int max_cycle,
                       long long split_cap, long long node_cap) {
    long long splits = 0, nodes = 0;
    std::vector<int> walk{q0};
    std::function<bool()> rec = [&]() -> bool {
        if (++nodes > node_cap) return false;
        const int last = walk.back();
        const int n = static_cast<int>(walk.size());
        for (int j = 0; j < n; ++j) {
            if (j > max_stem || n - j > max_cycle) continue;
            if (std::binary_search(ps.adj[last].begin(), ps.adj[last].end(), walk[j])) ++splits;
        }
        if (splits > split_cap) return false;
        if (n < max_stem + max_cycle)
            for (int t : ps.adj[last]) {
                walk.push_back(t);
                const bool go = rec();
                walk.pop_back();
                if (!go) return false;
            }
        return true;
    };
    return rec() ? splits : -1;
}

// Evaluates the formula on the ultimately periodic word the lasso spells.
bool lasso_satisfies(const ProductSystem& ps, const Labeling& lab, const Lasso& l,
                     const Formula& f) {
    const std::vector<std::string> props = props_of(f);
    auto letter = [&](int q) {
        oracle::Letter out;
        for (const auto& name : props)
            if (lab.truth(ps.state_of[q], name)) out.insert(name);
        return out;
    };
    oracle::Word pre, loop;
    for (const auto& [q, a] : l.stem) pre.push_back(letter(q));
    for (const auto& [q, a] : l.cycle) loop.push_back(letter(q));
    return oracle::eval_upword(f, pre, loop);
}

// Quantifier-free random formula over {true, p}.
Formula random_ltl1(std::mt19937& rng, int size) {
    if (size <= 1) return rng() % 2 == 0 ? Formula::tru() : Formula::prop("p");
    switch (rng() % 4) {
        case 0: return Formula::neg(random_ltl1(rng, size - 1));
        case 1: {
            const int ls = 1 + static_cast<int>(rng() % static_cast<unsigned>(size - 1));
            return Formula::f_or(random_ltl1(rng, ls), random_ltl1(rng, size - ls));
        }
        case 2: return Formula::next(random_ltl1(rng, size - 1));
        default: {
            const int ls = 1 + static_cast<int>(rng() % static_cast<unsigned>(size - 1));
            return Formula::until(random_ltl1(rng, ls), random_ltl1(rng, size - ls));
        }
    }
}

// Engine answer at one product state versus the oracle.  When the engine
// claims a violation, an explicit violating lasso must exist and must
// falsify the formula on direct word evaluation; when it claims universal
// truth, bounded exhaustive enumeration must find no counterexample.
bool agree_at(const ProductSystem& ps, const Labeling& lab, int q0, const Formula& f,
              bool engine_truth, int max_stem, int max_cycle, bool& skipped, std::string& why) {
    skipped = false;
    if (engine_truth) {
        if (count_splits(ps, q0, max_stem, max_cycle, 150000, 4000000) < 0) {
            skipped = true;  // enumeration infeasible here; counted, not compared
            return true;
        }
        if (!oracle::universal_ltl_oracle(ps, lab, q0, f, max_stem, max_cycle)) {
            why = "claims '" + to_string(f) + "' universally true at product state " +
                  std::to_string(q0) + " but enumeration finds a violating lasso";
            return false;
        }
        return true;
    }
    const BuchiAutomaton negb = ltl_to_buchi(Formula::neg(f));
    const auto l = exists_lasso_from(ps, lab, negb, q0);
    if (!l) {
        why = "claims '" + to_string(f) + "' violated at product state " + std::to_string(q0) +
              " but no violating lasso exists";
        return false;
    }
    if (lasso_satisfies(ps, lab, *l, f)) {
        why = "the violating lasso returned for '" + to_string(f) + "' actually satisfies it";
        return false;
    }
    return true;
}

bool crit7_lasso_oracle(Ctx& c, std::string& why) {
    if (c.small_products.empty()) {
        // Criterion 6 did not populate the pool (it runs first and normally
        // does); rebuild the same draw without re-checking it.
        std::mt19937 rng(20260823);
        for (const auto& e : c.corpus.fixtures) {
            const auto coalitions = coalitions_of(e.model);
            std::vector<StateId> starts(e.model.num_states());
            std::iota(starts.begin(), starts.end(), 0);
            for (int i = 0; i < 100; ++i) {
                const auto& coalition = coalitions[i % coalitions.size()];
                const int k = 1 + static_cast<int>(rng() % 3);
                const StrategyProfile profile = draw_profile(e.model, coalition, k, rng);
                ProductSystem ps = build_product(e.model, profile, starts);
                if (ps.num_states() <= 8)
                    c.small_products.push_back({&e.model, e.name, profile, std::move(ps)});
            }
        }
    }

    // Deduplicate structurally identical products; cap the population.
    std::vector<const SmallProduct*> pool;
    std::set<std::string> seen;
    for (const auto& sp : c.small_products) {
        if (seen.insert(sp.model_name + "\n" + dump_product(sp.ps)).second)
            pool.push_back(&sp);
        if (pool.size() >= 60) break;
    }
    if (pool.size() < 10) {
        why = "only " + std::to_string(pool.size()) + " distinct small products available";
        return false;
    }

    const std::vector<std::pair<Objective, std::string>> shapes = {
        {Objective::next(F("p")), "X p"},         {Objective::next(F("!p")), "X !p"},
        {Objective::globally(F("p")), "G p"},     {Objective::globally(F("!p")), "G !p"},
        {Objective::until(F("p"), F("!p")), "(p U !p)"},
        {Objective::until(F("!p"), F("p")), "(!p U p)"},
    };

    long long compared = 0, skipped_total = 0;
    for (const SmallProduct* sp : pool) {
        const Labeling lab(*sp->model);
        const int B = sp->ps.num_states();
        for (const auto& [obj, text] : shapes) {
            const std::vector<char> got = check_universal_objective(sp->ps, lab, obj);
            const Formula f = F(text);
            for (int q0 = 0; q0 < B; ++q0) {
                bool skipped = false;
                std::string local;
                if (!agree_at(sp->ps, lab, q0, f, got[q0] != 0, B, 2 * B, skipped, local)) {
                    why = sp->model_name + ": objective check " + local;
                    return false;
                }
                skipped ? ++skipped_total : ++compared;
            }
        }
    }

    // 50 random nested path formulas, spread round-robin over the pool.
    std::mt19937 rng(424242);
    for (int i = 0; i < 50; ++i) {
        const SmallProduct& sp = *pool[i % pool.size()];
        const Labeling lab(*sp.model);
        const int B = sp.ps.num_states();
        const Formula f = random_ltl1(rng, 1 + static_cast<int>(rng() % 5));
        const std::map<int, bool> got = check_universal_ltl(sp.ps, lab, f);
        for (const auto& [q0, truth] : got) {
            bool skipped = false;
            std::string local;
            if (!agree_at(sp.ps, lab, q0, f, truth, B, B + 3, skipped, local)) {
                why = sp.model_name + ": " + local;
                return false;
            }
            skipped ? ++skipped_total : ++compared;
        }
    }

    if (compared < 100) {
        why = "only " + std::to_string(compared) + " oracle comparisons were feasible";
        return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Criterion 8: the empty coalition is the universal path check; the full
// coalition under complete information is satisfying-path (lasso) existence.

std::vector<char> prop_truths(const GameModel& m, const Formula& f) {
    std::function<bool(StateId, const Formula&)> ev = [&](StateId s, const Formula& g) -> bool {
        switch (g.kind()) {
            case FKind::True: return true;
            case FKind::Prop: {
                const auto p = m.prop_index(g.prop_name());
                return p.has_value() && m.has_prop(s, *p);
            }
            case FKind::Not: return !ev(s, g.body());
            case FKind::Or: return ev(s, g.left()) || ev(s, g.right());
            default: throw std::invalid_argument("non-propositional operand");
        }
    };
    std::vector<char> out(m.num_states());
    for (StateId s = 0; s < m.num_states(); ++s) out[s] = ev(s, f) ? 1 : 0;
    return out;
}

// States from which some path satisfies the one-shot body; plain graph
// fixpoints over the model's successor relation, written independently of
// the checker.
std::vector<char> exists_path_set(const GameModel& m, const Formula& body) {
    const int n = m.num_states();
    auto succs = [&](StateId s) {
        std::set<StateId> out;
        for (const auto& [mv, t] : m.successors(s)) out.insert(t);
        return out;
    };
    if (const auto alw = body.match_always()) {
        std::vector<char> w = prop_truths(m, *alw);
        bool changed = true;
        while (changed) {
            changed = false;
            for (StateId s = 0; s < n; ++s) {
                if (!w[s]) continue;
                bool keep = false;
                for (StateId t : succs(s)) keep = keep || w[t];
                if (!keep) {
                    w[s] = 0;
                    changed = true;
                }
            }
        }
        return w;
    }
    if (body.kind() == FKind::Next) {
        const std::vector<char> o = prop_truths(m, body.body());
        std::vector<char> out(n, 0);
        for (StateId s = 0; s < n; ++s)
            for (StateId t : succs(s)) out[s] = out[s] || o[t];
        return out;
    }
    if (body.kind() == FKind::Until) {
        const std::vector<char> o1 = prop_truths(m, body.left());
        const std::vector<char> o2 = prop_truths(m, body.right());
        std::vector<char> r = o2;
        bool changed = true;
        while (changed) {
            changed = false;
            for (StateId s = 0; s < n; ++s) {
                if (r[s] || !o1[s]) continue;
                for (StateId t : succs(s))
                    if (r[t]) {
                        r[s] = 1;
                        changed = true;
                        break;
                    }
            }
        }
        return r;
    }
    throw std::invalid_argument("body outside the one-shot shapes");
}

bool crit8_coalition_dualities(Ctx& c, std::string& why) {
    // Empty coalition = universal path check, every model, every body.
    bool ok = true;
    c.for_each_entry([&](const Corpus::Entry& e) {
        if (!ok) return;
        std::vector<StateId> starts(e.model.num_states());
        std::iota(starts.begin(), starts.end(), 0);
        const ProductSystem ps = build_product(e.model, {}, starts);
        const Labeling lab(e.model);
        for (const std::string& body : atl0_bodies()) {
            const std::vector<char> uni =
                check_universal_objective(ps, lab, objective_from_body(F(body)));
            const auto& engine = c.eval_cached(e, "<<>> " + body, bounded_k(1, false), "F1");
            for (StateId s = 0; s < e.model.num_states(); ++s)
                if (engine.at(s).holds() != (uni[ps.initials[s]] != 0)) {
                    why = e.name + " '<<>> " + body + "' at " + e.model.state_name(s) +
                          ": quantifier and universal check disagree";
                    ok = false;
                    return;
                }
        }
        for (const std::string& body : ltl_bodies()) {
            const std::map<int, bool> uni = check_universal_ltl(ps, lab, F(body));
            const auto& engine = c.eval_cached(e, "<<>> " + body, bounded_k(1, false), "F1");
            for (StateId s = 0; s < e.model.num_states(); ++s)
                if (engine.at(s).holds() != uni.at(ps.initials[s])) {
                    why = e.name + " '<<>> " + body + "' at " + e.model.state_name(s) +
                          ": quantifier and universal check disagree";
                    ok = false;
                    return;
                }
        }
    });
    if (!ok) return false;

    // Full coalition under complete information + deepening = existence of a
    // satisfying lasso, here decided by independent graph fixpoints and
    // spot-checked against raw walk enumeration.
    std::vector<const Corpus::Entry*> complete_entries;
    for (const auto& e : c.corpus.fixtures)
        if (e.model.complete_information()) complete_entries.push_back(&e);
    for (const auto& e : c.corpus.complete) complete_entries.push_back(&e);

    int index = 0;
    for (const Corpus::Entry* ep : complete_entries) {
        const GameModel& m = ep->model;
        const std::string all =
            m.num_players() == 1 ? std::string("<<1>>") : std::string("<<1,2>>");
        std::vector<StateId> starts(m.num_states());
        std::iota(starts.begin(), starts.end(), 0);
        const ProductSystem free_graph = build_product(m, {}, starts);
        const Labeling lab(m);
        for (const std::string& body : atl0_bodies()) {
            const std::vector<char> exists = exists_path_set(m, F(body));
            const auto res = evaluate(m, F(all + " " + body), deepened(3));
            for (StateId s = 0; s < m.num_states(); ++s) {
                const Verdict& v = res.at(s);
                if (v.kind == VerdictKind::Unknown) {
                    why = ep->name + " '" + all + " " + body +
                          "': deepening was inconclusive under complete information";
                    return false;
                }
                if (v.holds() != (exists[s] != 0)) {
                    why = ep->name + " '" + all + " " + body + "' at " + m.state_name(s) +
                          ": deepening and lasso existence disagree";
                    return false;
                }
            }
            // Spot-check the fixpoint answer against explicit lasso search.
            if (index % 20 == 0) {
                const Formula f = F(body);
                for (StateId s = 0; s < m.num_states(); ++s) {
                    const int q0 = free_graph.initials[s];
                    const int B = free_graph.num_states();
                    if (count_splits(free_graph, q0, B, 2 * B, 60000, 2000000) < 0) continue;
                    const bool found = !oracle::for_each_walk_lasso(
                        free_graph, q0, B, 2 * B,
                        [&](const std::vector<int>& stem, const std::vector<int>& cycle) {
                            oracle::Word pre, loop;
                            const auto props = props_of(f);
                            auto letter = [&](int q) {
                                oracle::Letter l;
                                for (const auto& name : props)
                                    if (lab.truth(free_graph.state_of[q], name)) l.insert(name);
                                return l;
                            };
                            for (int q : stem) pre.push_back(letter(q));
                            for (int q : cycle) loop.push_back(letter(q));
                            return !oracle::eval_upword(f, pre, loop);  // stop when satisfied
                        });
                    if (found != (exists[s] != 0)) {
                        why = ep->name + " '" + body + "' at " + m.state_name(s) +
                              ": walk enumeration contradicts the existence fixpoint";
                        return false;
                    }
                }
            }
        }
        // Nested path bodies: Holds exactly when a satisfying lasso exists in
        // the raw graph, and the extracted lasso must survive direct word
        // evaluation.
        for (const std::string& body : ltl_bodies()) {
            const Formula f = F(body);
            const BuchiAutomaton ba = ltl_to_buchi(f);
            const auto res = evaluate(m, F(all + " " + body), deepened(3));
            for (StateId s = 0; s < m.num_states(); ++s) {
                const auto l = exists_lasso_from(free_graph, lab, ba, free_graph.initials[s]);
                if (l && !lasso_satisfies(free_graph, lab, *l, f)) {
                    why = ep->name + " '" + body +
                          "': extracted lasso fails direct word evaluation";
                    return false;
                }
                if (res.at(s).holds() != l.has_value()) {
                    why = ep->name + " '" + all + " " + body + "' at " + m.state_name(s) +
                          ": deepening and satisfying-lasso existence disagree";
                    return false;
                }
            }
        }
        ++index;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Criterion 9: the machine-audit game is won with finite memory exactly by
// spelling the machine's (eventually repeating) run, and the deepening
// search stays honest on the non-repeating machine.

const char* kInstantAccept = R"(tm
states q0
initial q0
accept q0
alphabet 0
blank B
)";

const char* kStepThenAccept = R"(tm
states q0 q1
initial q0
accept q1
alphabet 0
blank B
delta q0 B -> q1 0 R
)";

const char* kZeroWriter = R"(tm
states q0
initial q0
accept
alphabet 0
blank B
delta q0 B -> q0 0 R
)";

Configuration run_to(const TuringMachine& tm, int steps) {
    Configuration c = tm_initial_configuration(tm);
    for (int i = 0; i < steps; ++i) c = tm_step(tm, c);
    return c;
}

std::vector<std::string> padded_spelling(const Configuration& c, int horizon) {
    auto out = configuration_symbols(c);
    while (static_cast<int>(out.size()) < horizon) out.push_back("a");
    return out;
}

bool crit9_gadget(Ctx&, std::string& why) {
    const Formula body = F("G ! p");
    const std::vector<int> both = {1, 2};

    struct Positive {
        const char* text;
        const char* name;
        int cap;
        int expect_memory;
    };
    for (const Positive& pc : {Positive{kInstantAccept, "instant-accept", 2, 1},
                               Positive{kStepThenAccept, "step-then-accept", 4, 3}}) {
        const TuringMachine tm = tm_parse(pc.text);
        const GameModel g = tm_to_icgm(tm);
        if (g.num_states() > 60) {
            why = std::string(pc.name) + " gadget has " + std::to_string(g.num_states()) +
                  " states (limit 60)";
            return false;
        }
        const auto t0 = Clock::now();
        const Verdict v = check_quantified(g, 0, both, body, deepened(pc.cap));
        if (ms_since(t0) >= 1800000) {
            why = std::string(pc.name) + " search exceeded the 30-minute budget";
            return false;
        }
        if (!v.holds()) {
            why = std::string(pc.name) + ": partners should survive every audit (got " +
                  verdict_name(v.kind) + ")";
            return false;
        }
        if (v.memory_used != pc.expect_memory) {
            why = std::string(pc.name) + ": expected minimal memory " +
                  std::to_string(pc.expect_memory) + ", deepening reported " +
                  std::to_string(v.memory_used);
            return false;
        }
        if (!v.witness) {
            why = std::string(pc.name) + ": no witness attached";
            return false;
        }
        for (int reveal = 1; reveal <= 6; ++reveal) {
            const auto spelled = replay_player1_symbols(g, *v.witness, reveal, 6);
            const auto expected = padded_spelling(run_to(tm, reveal - 1), 6);
            if (spelled != expected) {
                why = std::string(pc.name) + ": witness replay diverges from machine stepping at "
                      "audit round " + std::to_string(reveal);
                return false;
            }
        }
    }

    const TuringMachine zw = tm_parse(kZeroWriter);
    const GameModel gzw = tm_to_icgm(zw);
    const Verdict v = check_quantified(gzw, 0, both, body, deepened(2));
    if (v.kind != VerdictKind::Unknown || v.memory_used != 2) {
        why = "zero-writer with cap 2 should be Unknown(2), got " +
              std::string(verdict_name(v.kind)) + "(" + std::to_string(v.memory_used) + ")";
        return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Criterion 10: perfect recall under incomplete information, and finite
// memory without a deepening cap, are refused with the dedicated error.
bool crit10_refusals(Ctx&, std::string& why) {
    const GameModel blind = fig3_family(1);
    const GameModel gadget = tm_to_icgm(tm_parse(kZeroWriter));
    struct Query {
        const GameModel* m;
        std::string f;
    };
    const std::vector<Query> queries = {{&blind, "<<1>> F p"}, {&gadget, "<<1,2>> G ! p"}};

    for (const Query& q : queries) {
        try {
            evaluate(*q.m, F(q.f), recall());
            why = "perfect recall under incomplete information was not refused for '" + q.f + "'";
            return false;
        } catch (const UnsupportedSemantics& e) {
            if (std::string(e.what()).find("undecidable") == std::string::npos) {
                why = std::string("refusal message lacks the reason: ") + e.what();
                return false;
            }
        }
        try {
            SemanticsSpec sem;
            sem.memory = MemoryMode::Finite;
            sem.cap = 0;
            evaluate(*q.m, F(q.f), sem);
            why = "uncapped finite-memory deepening was not refused for '" + q.f + "'";
            return false;
        } catch (const UnsupportedSemantics& e) {
            if (std::string(e.what()).find("cap") == std::string::npos) {
                why = std::string("refusal message does not mention the cap: ") + e.what();
                return false;
            }
        }
    }
    return true;
}

}  // namespace

int main() {
    Ctx ctx{build_corpus(), {}, {}};
    const std::array<std::pair<const char*, bool (*)(Ctx&, std::string&)>, 10> criteria = {{
        {"fig2 separation: k nested next operators need k memory states", crit1_fig2_separation},
        {"fig3 separation: the blind chain needs k memory states", crit2_fig3_separation},
        {"complete-information bounds collapse onto the fixpoint oracle", crit3_complete_collapse},
        {"memoryless semantics coincides with the 1-bounded semantics", crit4_memoryless_is_f1},
        {"holding states grow monotonically with the memory bound", crit5_monotonicity},
        {"product systems correspond to direct outcome simulation", crit6_product_correspondence},
        {"universal path checks agree with brute-force lasso enumeration", crit7_lasso_oracle},
        {"empty/full coalitions reduce to universal/existential path checks",
         crit8_coalition_dualities},
        {"the machine-audit game is won exactly by spelling the run", crit9_gadget},
        {"undecidable semantics requests are refused with the explicit error", crit10_refusals},
    }};

    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        const auto t0 = Clock::now();
        std::string why;
        bool ok = false;
        try {
            ok = fn(ctx, why);
        } catch (const std::exception& e) {
            why = std::string("exception: ") + e.what();
        }
        const double ms = ms_since(t0);
        if (ok) {
            std::printf("PASS: %s (%.0f ms)\n", name, ms);
        } else {
            std::printf("FAIL: %s (%.0f ms) -- %s\n", name, ms, why.c_str());
            ++failed;
        }
        std::fflush(stdout);
    }
    if (failed > 0) {
        std::printf("%d of 10 criteria failed\n", failed);
        return 1;
    }
    std::printf("all 10 criteria passed\n");
    return 0;
}
