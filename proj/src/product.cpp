#include "stratmc/product.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace stratmc {

CoalitionTable::CoalitionTable(const GameModel& m, std::vector<PlayerId> coalition)
    : model_(&m), coalition_(std::move(coalition)) {
    std::sort(coalition_.begin(), coalition_.end());
    coalition_.erase(std::unique(coalition_.begin(), coalition_.end()), coalition_.end());
    succ_.resize(m.num_states());
    for (StateId s = 0; s < m.num_states(); ++s) {
        int tuples = 1;
        for (PlayerId j : coalition_) tuples *= static_cast<int>(m.legal(s, j).size());
        std::vector<std::set<StateId>> sets(tuples);
        for (const auto& [mv, tgt] : m.successors(s)) {
            int idx = 0;
            for (PlayerId j : coalition_) {
                const auto& lg = m.legal(s, j);
                int pos = static_cast<int>(
                    std::lower_bound(lg.begin(), lg.end(), mv[j]) - lg.begin());
                idx = idx * static_cast<int>(lg.size()) + pos;
            }
            sets[idx].insert(tgt);
        }
        succ_[s].reserve(tuples);
        for (auto& st : sets) succ_[s].emplace_back(st.begin(), st.end());
    }
}

int CoalitionTable::flat_index(StateId s, const std::vector<ActionId>& acts) const {
    int idx = 0;
    for (size_t i = 0; i < coalition_.size(); ++i) {
        const auto& lg = model_->legal(s, coalition_[i]);
        auto it = std::lower_bound(lg.begin(), lg.end(), acts[i]);
        if (it == lg.end() || *it != acts[i])
            throw std::invalid_argument("coalition action not legal at state " +
                                        model_->state_name(s));
        idx = idx * static_cast<int>(lg.size()) + static_cast<int>(it - lg.begin());
    }
    return idx;
}

const std::vector<StateId>& CoalitionTable::successors(StateId s,
                                                       const std::vector<ActionId>& acts) const {
    return succ_[s][flat_index(s, acts)];
}

std::vector<ActionId> CoalitionTable::tuple_actions(StateId s, int tuple_idx) const {
    std::vector<ActionId> acts(coalition_.size());
    for (int i = static_cast<int>(coalition_.size()) - 1; i >= 0; --i) {
        const auto& lg = model_->legal(s, coalition_[i]);
        acts[i] = lg[tuple_idx % lg.size()];
        tuple_idx /= static_cast<int>(lg.size());
    }
    return acts;
}

ProductSystem build_product(const GameModel& m, const StrategyProfile& profile,
                            const std::vector<StateId>& starts, const CoalitionTable& table) {
    if (starts.empty()) throw std::invalid_argument("build_product: empty start set");
    const int r = static_cast<int>(profile.size());
    std::vector<PlayerId> owners(r);
    for (int j = 0; j < r; ++j) {
        owners[j] = profile[j].owner;
        if (profile[j].num_classes != m.num_classes(profile[j].owner))
            throw std::invalid_argument("build_product: strategy alphabet mismatch");
        if (j + 1 < r && !(profile[j].owner < profile[j + 1].owner))
            throw std::invalid_argument("build_product: profile not ascending by owner");
    }
    if (&table.model() != &m)
        throw std::invalid_argument("build_product: table built for a different model");
    if (table.coalition() != owners)
        throw std::invalid_argument("build_product: table coalition does not match profile");

    ProductSystem ps;
    ps.model = &m;
    ps.starts = starts;

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
    std::vector<int> zero(r, 0);
    for (StateId s : starts) {
        int before = static_cast<int>(ps.state_of.size());
        int id = intern(s, zero);
        ps.initials.push_back(id);
        if (id == before) queue.push_back(id);
    }
    std::vector<ActionId> acts(r);
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        int q = queue[qi];
        StateId s = ps.state_of[q];
        std::vector<int> mem = ps.memory_of[q];
        std::vector<int> mem2(r);
        for (int j = 0; j < r; ++j) {
            ClassId c = m.class_of(profile[j].owner, s);
            acts[j] = profile[j].out_of(mem[j], c);
            mem2[j] = profile[j].next_of(mem[j], c);
        }
        std::set<int> targets;
        for (StateId t : table.successors(s, acts)) {
            int before = static_cast<int>(ps.state_of.size());
            int id = intern(t, mem2);
            if (id == before) queue.push_back(id);
            targets.insert(id);
        }
        ps.adj[q].assign(targets.begin(), targets.end());
    }
    return ps;
}

ProductSystem build_product(const GameModel& m, const StrategyProfile& profile,
                            const std::vector<StateId>& starts) {
    std::vector<PlayerId> coalition;
    for (const auto& d : profile) coalition.push_back(d.owner);
    CoalitionTable table(m, coalition);
    return build_product(m, profile, starts, table);
}

namespace {

// All game-state sequences of exactly the given length from product paths.
void product_prefixes(const ProductSystem& ps, int q, int remaining,
                      std::vector<StateId>& cur, std::set<std::vector<StateId>>& out) {
    cur.push_back(ps.state_of[q]);
    if (remaining == 1) {
        out.insert(cur);
    } else {
        for (int t : ps.adj[q]) product_prefixes(ps, t, remaining - 1, cur, out);
    }
    cur.pop_back();
}

// Brute-force outcome prefixes: branch over every opponent action choice,
// querying strategies via apply_strategy on full observation histories.
void outcome_prefixes(const GameModel& m, const StrategyProfile& profile,
                      const std::vector<PlayerId>& opponents, int remaining,
                      std::vector<StateId>& path, std::set<std::vector<StateId>>& out) {
    if (remaining == 1) {
        out.insert(path);
        return;
    }
    StateId s = path.back();
    Move mv(m.num_players());
    for (const auto& d : profile) {
        std::vector<ClassId> h;
        for (StateId ss : path) h.push_back(m.class_of(d.owner, ss));
        mv[d.owner] = apply_strategy(d, h);
    }
    std::vector<int> pos(opponents.size(), 0);
    while (true) {
        for (size_t i = 0; i < opponents.size(); ++i)
            mv[opponents[i]] = m.legal(s, opponents[i])[pos[i]];
        auto t = m.successor(s, mv);
        if (t) {
            path.push_back(*t);
            outcome_prefixes(m, profile, opponents, remaining - 1, path, out);
            path.pop_back();
        }
        int i = static_cast<int>(opponents.size()) - 1;
        while (i >= 0 && ++pos[i] == static_cast<int>(m.legal(s, opponents[i]).size()))
            pos[i--] = 0;
        if (i < 0) break;
    }
}

}  // namespace

bool outcome_correspondence_check(const GameModel& m, const StrategyProfile& profile,
                                  const ProductSystem& ps, int depth) {
    std::vector<PlayerId> opponents;
    for (PlayerId j = 0; j < m.num_players(); ++j) {
        bool member = false;
        for (const auto& d : profile) member = member || d.owner == j;
        if (!member) opponents.push_back(j);
    }
    for (size_t i = 0; i < ps.starts.size(); ++i) {
        for (int len = 1; len <= depth; ++len) {
            std::set<std::vector<StateId>> lhs, rhs;
            std::vector<StateId> cur;
            product_prefixes(ps, ps.initials[i], len, cur, lhs);
            std::vector<StateId> path = {ps.starts[i]};
            outcome_prefixes(m, profile, opponents, len, path, rhs);
            if (lhs != rhs) return false;
        }
    }
    return true;
}

std::string dump_product(const ProductSystem& ps) {
    std::ostringstream os;
    for (int q = 0; q < ps.num_states(); ++q) {
        os << "pstate " << ps.model->state_name(ps.state_of[q]);
        const auto& mem = ps.memory_of[q];
        if (!mem.empty()) {
            os << " ";
            for (size_t j = 0; j < mem.size(); ++j) os << (j ? "," : "") << mem[j];
        }
        os << "\n";
    }
    for (int q = 0; q < ps.num_states(); ++q)
        for (int t : ps.adj[q]) os << "pedge " << q << " -> " << t << "\n";
    return os.str();
}

}  // namespace stratmc
