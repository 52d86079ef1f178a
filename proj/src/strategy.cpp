#include "stratmc/strategy.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace stratmc {

int run_memory(const Dfst& d, const std::vector<ClassId>& inputs) {
    int m = 0;
    for (ClassId c : inputs) m = d.next_of(m, c);
    return m;
}

ActionId apply_strategy(const Dfst& d, const std::vector<ClassId>& h) {
    if (h.empty()) throw std::invalid_argument("apply_strategy: empty history");
    int m = 0;
    for (size_t i = 0; i + 1 < h.size(); ++i) m = d.next_of(m, h[i]);
    return d.out_of(m, h.back());
}

std::vector<std::string> dfst_violations(const Dfst& d, const GameModel& m) {
    std::vector<std::string> out;
    if (d.owner < 0 || d.owner >= m.num_players()) {
        out.push_back("owner out of range");
        return out;
    }
    int C = m.num_classes(d.owner);
    if (d.num_classes != C) out.push_back("class count mismatch");
    if (d.k < 1) out.push_back("k must be at least 1");
    if (static_cast<int>(d.next.size()) != d.k * d.num_classes ||
        static_cast<int>(d.out.size()) != d.k * d.num_classes) {
        out.push_back("table size mismatch");
        return out;
    }
    for (int mm = 0; mm < d.k; ++mm)
        for (ClassId c = 0; c < d.num_classes && c < C; ++c) {
            int t = d.next_of(mm, c);
            if (t < 0 || t >= d.k)
                out.push_back("memory target out of range at m" + std::to_string(mm));
            const auto& lg = m.legal_for_class(d.owner, c);
            if (!std::binary_search(lg.begin(), lg.end(), d.out_of(mm, c)))
                out.push_back("output " + m.action_name(d.out_of(mm, c)) +
                              " not legal for class " + m.class_label(d.owner, c));
        }
    return out;
}

int reachable_memory(const Dfst& d) {
    std::vector<bool> seen(d.k, false);
    std::vector<int> queue = {0};
    seen[0] = true;
    int count = 1;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        int mm = queue[qi];
        for (ClassId c = 0; c < d.num_classes; ++c) {
            int t = d.next_of(mm, c);
            if (!seen[t]) {
                seen[t] = true;
                ++count;
                queue.push_back(t);
            }
        }
    }
    return count;
}

Dfst canonicalize(const Dfst& d, const GameModel& model, std::optional<int> fixed_size) {
    std::vector<int> relabel(d.k, -1);
    std::vector<int> order;  // old labels in BFS discovery order
    relabel[0] = 0;
    order.push_back(0);
    for (size_t qi = 0; qi < order.size(); ++qi) {
        int old = order[qi];
        for (ClassId c = 0; c < d.num_classes; ++c) {
            int t = d.next_of(old, c);
            if (relabel[t] < 0) {
                relabel[t] = static_cast<int>(order.size());
                order.push_back(t);
            }
        }
    }
    int r = static_cast<int>(order.size());
    int size = fixed_size.value_or(r);
    if (size < r)
        throw std::invalid_argument("canonicalize: fixed size smaller than reachable part");
    Dfst out;
    out.owner = d.owner;
    out.k = size;
    out.num_classes = d.num_classes;
    out.next.resize(size * d.num_classes);
    out.out.resize(size * d.num_classes);
    for (int nm = 0; nm < r; ++nm) {
        int old = order[nm];
        for (ClassId c = 0; c < d.num_classes; ++c) {
            out.next[nm * d.num_classes + c] = relabel[d.next_of(old, c)];
            out.out[nm * d.num_classes + c] = d.out_of(old, c);
        }
    }
    for (int nm = r; nm < size; ++nm)
        for (ClassId c = 0; c < d.num_classes; ++c) {
            out.next[nm * d.num_classes + c] = nm;
            out.out[nm * d.num_classes + c] = model.legal_for_class(d.owner, c)[0];
        }
    return out;
}

// ---------------------------------------------------------------------------
// Canonical memory-update structures

namespace {

// count[i][s]: completions from cell i on with max state label seen = s.
std::vector<std::vector<std::uint64_t>> structure_dp(int r, int C) {
    int cells = r * C;
    std::vector<std::vector<std::uint64_t>> count(cells + 1,
                                                  std::vector<std::uint64_t>(r, 0));
    count[cells][r - 1] = 1;
    for (int i = cells - 1; i >= 0; --i) {
        int row = i / C;
        for (int s = 0; s < r; ++s) {
            if (i % C == 0 && s < row) continue;  // row's state never introduced
            std::uint64_t total = 0;
            int vmax = std::min(s + 1, r - 1);
            for (int v = 0; v <= vmax; ++v)
                total = sat_add(total, count[i + 1][std::max(s, v)]);
            count[i][s] = total;
        }
    }
    return count;
}

}  // namespace

std::uint64_t canonical_structure_count(int r, int C) {
    if (r < 1 || C < 1) return 0;
    return structure_dp(r, C)[0][0];
}

std::vector<int> canonical_structure_at(int r, int C, std::uint64_t idx) {
    auto count = structure_dp(r, C);
    if (idx >= count[0][0] || count[0][0] >= kSatCount)
        throw std::out_of_range("canonical_structure_at: index out of range");
    int cells = r * C;
    std::vector<int> table(cells);
    int s = 0;
    for (int i = 0; i < cells; ++i) {
        int vmax = std::min(s + 1, r - 1);
        for (int v = 0;; ++v) {
            if (v > vmax) throw std::logic_error("canonical_structure_at: walk failed");
            std::uint64_t c = count[i + 1][std::max(s, v)];
            if (idx < c) {
                table[i] = v;
                s = std::max(s, v);
                break;
            }
            idx -= c;
        }
    }
    return table;
}

// ---------------------------------------------------------------------------
// Streams

DfstStream::DfstStream(const GameModel& m, PlayerId owner, int k)
    : model_(&m), owner_(owner), k_(k) {
    if (k < 1) throw std::invalid_argument("DfstStream: k must be at least 1");
    classes_ = m.num_classes(owner);
    legal_.resize(classes_);
    std::uint64_t row_product = 1;
    for (ClassId c = 0; c < classes_; ++c) {
        legal_[c] = m.legal_for_class(owner, c);
        row_product = sat_mul(row_product, legal_[c].size());
    }
    g_count_.resize(k);
    t_count_.resize(k);
    begin_.resize(k + 1);
    std::uint64_t acc = 0;
    for (int r = 1; r <= k; ++r) {
        begin_[r - 1] = acc;
        std::uint64_t g = 1;
        for (int i = 0; i < r; ++i) g = sat_mul(g, row_product);
        g_count_[r - 1] = g;
        t_count_[r - 1] = canonical_structure_count(r, classes_);
        acc = sat_add(acc, sat_mul(g, t_count_[r - 1]));
    }
    begin_[k] = acc;
    size_ = acc;
    saturated_ = acc >= kSatCount;
}

Dfst DfstStream::get(std::uint64_t idx) const {
    if (saturated_ || idx >= size_) throw std::out_of_range("DfstStream::get");
    int r = 1;
    while (idx >= begin_[r]) ++r;
    std::uint64_t within = idx - begin_[r - 1];
    std::uint64_t g_idx = within / t_count_[r - 1];
    std::uint64_t t_idx = within % t_count_[r - 1];

    Dfst d;
    d.owner = owner_;
    d.k = k_;
    d.num_classes = classes_;
    d.next.resize(k_ * classes_);
    d.out.resize(k_ * classes_);
    // Output table: digits most-significant-first over row-major cells.
    int cells = r * classes_;
    for (int i = cells - 1; i >= 0; --i) {
        int base = static_cast<int>(legal_[i % classes_].size());
        d.out[i] = legal_[i % classes_][g_idx % base];
        g_idx /= base;
    }
    auto table = canonical_structure_at(r, classes_, t_idx);
    std::copy(table.begin(), table.end(), d.next.begin());
    for (int mm = r; mm < k_; ++mm)
        for (ClassId c = 0; c < classes_; ++c) {
            d.next[mm * classes_ + c] = mm;
            d.out[mm * classes_ + c] = legal_[c][0];
        }
    return d;
}

ProfileStream::ProfileStream(const GameModel& m, const std::vector<PlayerId>& coalition,
                             int k) {
    std::vector<PlayerId> sorted = coalition;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (PlayerId j : sorted) {
        members_.emplace_back(m, j, k);
        size_ = sat_mul(size_, members_.back().size());
    }
    saturated_ = size_ >= kSatCount;
    for (const auto& mem : members_) saturated_ = saturated_ || mem.saturated();
}

StrategyProfile ProfileStream::get(std::uint64_t idx) const {
    if (saturated_ || idx >= size_) throw std::out_of_range("ProfileStream::get");
    StrategyProfile p(members_.size());
    for (int j = static_cast<int>(members_.size()) - 1; j >= 0; --j) {
        std::uint64_t sz = members_[j].size();
        p[j] = members_[j].get(idx % sz);
        idx /= sz;
    }
    return p;
}

// ---------------------------------------------------------------------------
// Witness format

std::string format_dfst(const Dfst& d, const GameModel& m) {
    std::ostringstream os;
    os << "dfst player=" << (d.owner + 1) << " k=" << d.k << "\n";
    for (int mm = 0; mm < d.k; ++mm)
        for (ClassId c = 0; c < d.num_classes; ++c)
            os << "m" << mm << " " << m.class_label(d.owner, c) << " -> m"
               << d.next_of(mm, c) << " / " << m.action_name(d.out_of(mm, c)) << "\n";
    return os.str();
}

std::string format_profile(const StrategyProfile& p, const GameModel& m) {
    std::string out;
    for (const auto& d : p) out += format_dfst(d, m);
    return out;
}

namespace {

std::vector<std::string> words_of(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> out;
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

int parse_memory_label(const std::string& w, int lineno) {
    if (w.size() < 2 || w[0] != 'm')
        throw ParseError("expected memory label m<i>, got '" + w + "'", lineno);
    for (size_t i = 1; i < w.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(w[i])))
            throw ParseError("expected memory label m<i>, got '" + w + "'", lineno);
    return std::stoi(w.substr(1));
}

Dfst parse_dfst_lines(const std::vector<std::pair<int, std::vector<std::string>>>& lines,
                      const GameModel& m) {
    const auto& [hline, head] = lines.front();
    if (head.size() != 3 || head[0] != "dfst" || head[1].rfind("player=", 0) != 0 ||
        head[2].rfind("k=", 0) != 0)
        throw ParseError("expected 'dfst player=<j> k=<n>'", hline);
    int player = 0, k = 0;
    try {
        player = std::stoi(head[1].substr(7));
        k = std::stoi(head[2].substr(2));
    } catch (const std::exception&) {
        throw ParseError("malformed dfst header", hline);
    }
    if (player < 1 || player > m.num_players())
        throw ParseError("player index out of range in dfst header", hline);
    if (k < 1) throw ParseError("k must be at least 1", hline);
    Dfst d;
    d.owner = player - 1;
    d.k = k;
    d.num_classes = m.num_classes(d.owner);
    d.next.assign(k * d.num_classes, -1);
    d.out.assign(k * d.num_classes, -1);
    std::map<std::string, ClassId> label_to_class;
    for (ClassId c = 0; c < d.num_classes; ++c) label_to_class[m.class_label(d.owner, c)] = c;
    for (size_t i = 1; i < lines.size(); ++i) {
        const auto& [ln, w] = lines[i];
        if (w.size() != 6 || w[2] != "->" || w[4] != "/")
            throw ParseError("expected 'm<i> <class> -> m<i'> / <action>'", ln);
        int mm = parse_memory_label(w[0], ln);
        int mt = parse_memory_label(w[3], ln);
        auto cit = label_to_class.find(w[1]);
        if (cit == label_to_class.end())
            throw ParseError("unknown observation class '" + w[1] + "' for player " +
                                 std::to_string(player),
                             ln);
        auto act = m.action_index(w[5]);
        if (!act) throw ParseError("unknown action '" + w[5] + "'", ln);
        if (mm < 0 || mm >= k || mt < 0 || mt >= k)
            throw ParseError("memory label out of range", ln);
        int cell = mm * d.num_classes + cit->second;
        if (d.next[cell] != -1) throw ParseError("duplicate cell for m" + std::to_string(mm) +
                                                     " " + w[1],
                                                 ln);
        d.next[cell] = mt;
        d.out[cell] = *act;
    }
    for (int cell = 0; cell < k * d.num_classes; ++cell)
        if (d.next[cell] == -1)
            throw ParseError("incomplete dfst: missing cell for m" +
                             std::to_string(cell / d.num_classes) + " " +
                             m.class_label(d.owner, cell % d.num_classes));
    auto viol = dfst_violations(d, m);
    if (!viol.empty()) throw ParseError(viol.front());
    return d;
}

}  // namespace

StrategyProfile parse_profile(const std::string& text, const GameModel& m) {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    std::vector<std::vector<std::pair<int, std::vector<std::string>>>> blocks;
    while (std::getline(is, line)) {
        ++lineno;
        auto w = words_of(line);
        if (w.empty()) continue;
        if (w[0] == "dfst") blocks.emplace_back();
        if (blocks.empty()) throw ParseError("expected 'dfst' header", lineno);
        blocks.back().emplace_back(lineno, std::move(w));
    }
    if (blocks.empty()) throw ParseError("empty dfst input");
    StrategyProfile p;
    for (const auto& b : blocks) p.push_back(parse_dfst_lines(b, m));
    return p;
}

Dfst parse_dfst(const std::string& text, const GameModel& m) {
    auto p = parse_profile(text, m);
    if (p.size() != 1) throw ParseError("expected exactly one dfst block");
    return p.front();
}

}  // namespace stratmc
