#include "stratmc/game_model.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace stratmc {

namespace {

template <typename T>
std::optional<int> index_of(const std::vector<std::string>& names, const T& name) {
    for (int i = 0; i < static_cast<int>(names.size()); ++i)
        if (names[i] == name) return i;
    return std::nullopt;
}

std::string join_names(const std::vector<std::string>& all, const std::vector<int>& idx,
                       const char* sep) {
    std::string out;
    for (size_t i = 0; i < idx.size(); ++i) {
        if (i) out += sep;
        out += all[idx[i]];
    }
    return out;
}

}  // namespace

std::optional<StateId> GameModel::state_index(const std::string& name) const {
    return index_of(state_names_, name);
}

std::optional<ActionId> GameModel::action_index(const std::string& name) const {
    return index_of(action_names_, name);
}

std::optional<PropId> GameModel::prop_index(const std::string& name) const {
    return index_of(prop_names_, name);
}

bool GameModel::has_prop(StateId s, PropId p) const {
    const auto& ps = labels_[s];
    return std::binary_search(ps.begin(), ps.end(), p);
}

std::optional<StateId> GameModel::successor(StateId s, const Move& mv) const {
    auto it = trans_[s].find(mv);
    if (it == trans_[s].end()) return std::nullopt;
    return it->second;
}

std::vector<std::pair<Move, StateId>> GameModel::successors(StateId s) const {
    return {trans_[s].begin(), trans_[s].end()};
}

bool GameModel::identity_partition(PlayerId j) const {
    return static_cast<int>(classes_[j].size()) == num_states();
}

bool GameModel::complete_information() const {
    for (PlayerId j = 0; j < num_players_; ++j)
        if (!identity_partition(j)) return false;
    return true;
}

std::vector<std::string> GameModel::validate() const {
    std::vector<std::string> out;
    const int n = num_players_;
    for (StateId s = 0; s < num_states(); ++s) {
        for (PlayerId j = 0; j < n; ++j) {
            if (legal(s, j).empty())
                out.push_back("empty legal set for player " + std::to_string(j + 1) + " at " +
                              state_names_[s]);
        }
    }
    // Transition totality over legal joint moves, and legality of every
    // recorded transition.
    for (StateId s = 0; s < num_states(); ++s) {
        bool any_empty = false;
        for (PlayerId j = 0; j < n; ++j) any_empty |= legal(s, j).empty();
        if (!any_empty) {
            Move mv(n);
            std::vector<int> pos(n, 0);
            while (true) {
                for (PlayerId j = 0; j < n; ++j) mv[j] = legal(s, j)[pos[j]];
                if (!trans_[s].count(mv))
                    out.push_back("missing transition for legal move (" +
                                  join_names(action_names_, mv, ",") + ") at " + state_names_[s]);
                int j = n - 1;
                while (j >= 0 && ++pos[j] == static_cast<int>(legal(s, j).size())) pos[j--] = 0;
                if (j < 0) break;
            }
        }
        for (const auto& [mv, tgt] : trans_[s]) {
            (void)tgt;
            for (PlayerId j = 0; j < n; ++j) {
                const auto& lg = legal(s, j);
                if (!std::binary_search(lg.begin(), lg.end(), mv[j]))
                    out.push_back("action " + action_names_[mv[j]] + " not legal for player " +
                                  std::to_string(j + 1) + " at " + state_names_[s]);
            }
        }
    }
    // Partition coverage and action-uniformity.
    for (PlayerId j = 0; j < n; ++j) {
        for (StateId s = 0; s < num_states(); ++s) {
            if (class_of_[j][s] < 0)
                out.push_back("partition does not cover " + state_names_[s]);
        }
        for (const auto& cls : classes_[j]) {
            StateId rep = cls.members.front();
            for (StateId s : cls.members) {
                if (legal(s, j) != legal(rep, j)) {
                    out.push_back("players " + std::to_string(j + 1) +
                                  "'s observation class {" + class_label(j, cls.id) +
                                  "} has differing legal sets at " + state_names_[rep] + " and " +
                                  state_names_[s]);
                    break;
                }
            }
        }
    }
    return out;
}

std::string GameModel::serialize() const {
    std::ostringstream os;
    os << "cgm\n";
    os << "players " << num_players_ << "\n";
    if (!action_names_.empty()) {
        os << "actions";
        for (const auto& a : action_names_) os << " " << a;
        os << "\n";
    }
    for (StateId s = 0; s < num_states(); ++s) {
        os << "state " << state_names_[s];
        if (!labels_[s].empty()) {
            os << " props";
            for (PropId p : labels_[s]) os << " " << prop_names_[p];
        }
        os << "\n";
    }
    for (StateId s = 0; s < num_states(); ++s)
        for (PlayerId j = 0; j < num_players_; ++j) {
            os << "legal " << state_names_[s] << " " << (j + 1);
            for (ActionId a : legal(s, j)) os << " " << action_names_[a];
            os << "\n";
        }
    for (StateId s = 0; s < num_states(); ++s)
        for (const auto& [mv, tgt] : trans_[s])
            os << "trans " << state_names_[s] << " (" << join_names(action_names_, mv, ",")
               << ") " << state_names_[tgt] << "\n";
    for (PlayerId j = 0; j < num_players_; ++j) {
        if (identity_partition(j)) continue;
        os << "obs " << (j + 1);
        for (const auto& cls : classes_[j]) {
            os << " {";
            for (StateId s : cls.members) os << " " << state_names_[s];
            os << " }";
        }
        os << "\n";
    }
    return os.str();
}

bool GameModel::operator==(const GameModel& other) const {
    return num_players_ == other.num_players_ && state_names_ == other.state_names_ &&
           action_names_ == other.action_names_ && prop_names_ == other.prop_names_ &&
           labels_ == other.labels_ && legal_ == other.legal_ && trans_ == other.trans_ &&
           class_of_ == other.class_of_;
}

// ---------------------------------------------------------------------------
// Builder

GameModelBuilder::GameModelBuilder(int num_players) {
    if (num_players < 1) throw ParseError("players must be at least 1");
    m_.num_players_ = num_players;
    obs_blocks_.resize(num_players);
}

StateId GameModelBuilder::need_state(const std::string& name) const {
    if (auto s = index_of(m_.state_names_, name)) return *s;
    throw ParseError("unknown state " + name);
}

ActionId GameModelBuilder::need_action(const std::string& name) const {
    if (auto a = index_of(m_.action_names_, name)) return *a;
    throw ParseError("unknown action " + name);
}

GameModelBuilder& GameModelBuilder::action(const std::string& name) {
    if (index_of(m_.action_names_, name)) throw ParseError("duplicate action " + name);
    m_.action_names_.push_back(name);
    return *this;
}

GameModelBuilder& GameModelBuilder::state(const std::string& name,
                                          const std::vector<std::string>& props) {
    if (index_of(m_.state_names_, name)) throw ParseError("duplicate state " + name);
    m_.state_names_.push_back(name);
    std::vector<PropId> ps;
    for (const auto& p : props) {
        auto idx = index_of(m_.prop_names_, p);
        if (!idx) {
            idx = static_cast<int>(m_.prop_names_.size());
            m_.prop_names_.push_back(p);
        }
        ps.push_back(*idx);
    }
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    m_.labels_.push_back(std::move(ps));
    m_.legal_.resize(m_.state_names_.size() * m_.num_players_);
    m_.trans_.resize(m_.state_names_.size());
    return *this;
}

GameModelBuilder& GameModelBuilder::legal(const std::string& state, int player,
                                          const std::vector<std::string>& actions) {
    StateId s = need_state(state);
    if (player < 1 || player > m_.num_players_)
        throw ParseError("player index " + std::to_string(player) + " out of range");
    auto& slot = m_.legal_[s * m_.num_players_ + (player - 1)];
    if (!slot.empty())
        throw ParseError("duplicate legal declaration for player " + std::to_string(player) +
                         " at " + state);
    std::vector<ActionId> as;
    for (const auto& a : actions) as.push_back(need_action(a));
    std::sort(as.begin(), as.end());
    as.erase(std::unique(as.begin(), as.end()), as.end());
    if (as.empty()) throw ParseError("empty legal set for player " + std::to_string(player) +
                                     " at " + state);
    slot = std::move(as);
    return *this;
}

GameModelBuilder& GameModelBuilder::trans(const std::string& from,
                                          const std::vector<std::string>& move,
                                          const std::string& to) {
    StateId s = need_state(from);
    StateId t = need_state(to);
    if (static_cast<int>(move.size()) != m_.num_players_)
        throw ParseError("move (" + [&] {
            std::string r;
            for (size_t i = 0; i < move.size(); ++i) r += (i ? "," : "") + move[i];
            return r;
        }() + ") has " + std::to_string(move.size()) + " actions, expected " +
                         std::to_string(m_.num_players_));
    Move mv;
    for (const auto& a : move) mv.push_back(need_action(a));
    if (m_.trans_[s].count(mv))
        throw ParseError("duplicate transition for (" + join_names(m_.action_names_, mv, ",") +
                         ") at " + from);
    m_.trans_[s][mv] = t;
    return *this;
}

GameModelBuilder& GameModelBuilder::obs(int player,
                                        const std::vector<std::vector<std::string>>& blocks) {
    if (player < 1 || player > m_.num_players_)
        throw ParseError("player index " + std::to_string(player) + " out of range");
    auto& slot = obs_blocks_[player - 1];
    if (!slot.empty())
        throw ParseError("duplicate obs declaration for player " + std::to_string(player));
    std::unordered_set<StateId> seen;
    for (const auto& block : blocks) {
        if (block.empty()) throw ParseError("empty observation class");
        std::vector<StateId> ids;
        for (const auto& name : block) {
            StateId s = need_state(name);
            if (!seen.insert(s).second)
                throw ParseError("state " + name + " appears in two observation classes");
            ids.push_back(s);
        }
        std::sort(ids.begin(), ids.end());
        slot.push_back(std::move(ids));
    }
    if (slot.empty()) throw ParseError("obs declaration with no classes");
    return *this;
}

GameModel GameModelBuilder::build() {
    const int n = m_.num_players_;
    const int ns = static_cast<int>(m_.state_names_.size());
    m_.class_of_.assign(n, std::vector<ClassId>(ns, -1));
    m_.classes_.assign(n, {});
    m_.explicit_obs_.assign(n, false);
    for (PlayerId j = 0; j < n; ++j) {
        auto blocks = obs_blocks_[j];
        if (blocks.empty()) {
            for (StateId s = 0; s < ns; ++s) blocks.push_back({s});
        } else {
            m_.explicit_obs_[j] = true;
        }
        std::sort(blocks.begin(), blocks.end(),
                  [](const auto& a, const auto& b) { return a.front() < b.front(); });
        for (ClassId c = 0; c < static_cast<int>(blocks.size()); ++c) {
            ObservationClass cls;
            cls.player = j;
            cls.id = c;
            cls.members = blocks[c];
            for (StateId s : cls.members) m_.class_of_[j][s] = c;
            m_.classes_[j].push_back(std::move(cls));
        }
    }
    return std::move(m_);
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Token {
    std::string text;
    int col;  // 1-based
};

// Words are whitespace-separated; '(' ')' ',' split words further (they are
// excluded from identifiers).  '{' and '}' act as delimiters only when they
// stand alone as words.
std::vector<Token> tokenize_line(const std::string& line, int lineno) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        if (line[i] == '#') break;
        size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
               line[i] != '#')
            ++i;
        std::string word = line.substr(start, i - start);
        if (word == "{" || word == "}") {
            out.push_back({word, static_cast<int>(start) + 1});
            continue;
        }
        size_t p = 0;
        for (size_t q = 0; q <= word.size(); ++q) {
            if (q == word.size() || word[q] == '(' || word[q] == ')' || word[q] == ',') {
                if (q > p) out.push_back({word.substr(p, q - p), static_cast<int>(start + p) + 1});
                if (q < word.size())
                    out.push_back({std::string(1, word[q]), static_cast<int>(start + q) + 1});
                p = q + 1;
            }
        }
    }
    (void)lineno;
    return out;
}

}  // namespace

GameModel parse_model(const std::string& text) {
    std::vector<std::vector<Token>> lines;
    std::vector<int> linenos;
    {
        std::istringstream is(text);
        std::string line;
        int no = 0;
        while (std::getline(is, line)) {
            ++no;
            auto toks = tokenize_line(line, no);
            if (!toks.empty()) {
                lines.push_back(std::move(toks));
                linenos.push_back(no);
            }
        }
    }
    if (lines.empty() || lines[0].size() != 1 || lines[0][0].text != "cgm")
        throw ParseError("expected header line 'cgm'", lines.empty() ? 1 : linenos[0],
                         lines.empty() ? 1 : lines[0][0].col);
    size_t li = 1;
    auto fail = [&](const std::string& msg, int col = 0) -> ParseError {
        int ln = li < lines.size() ? linenos[li] : (linenos.empty() ? 1 : linenos.back());
        return ParseError(msg, ln, col);
    };
    if (li >= lines.size() || lines[li][0].text != "players")
        throw fail("expected 'players <n>'");
    if (lines[li].size() != 2) throw fail("expected 'players <n>'", lines[li][0].col);
    int nplayers = 0;
    try {
        size_t pos = 0;
        nplayers = std::stoi(lines[li][1].text, &pos);
        if (pos != lines[li][1].text.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw fail("invalid player count '" + lines[li][1].text + "'", lines[li][1].col);
    }
    if (nplayers < 1) throw fail("players must be at least 1", lines[li][1].col);
    GameModelBuilder b(nplayers);
    ++li;

    auto parse_player_index = [&](const Token& t) {
        try {
            size_t pos = 0;
            int j = std::stoi(t.text, &pos);
            if (pos != t.text.size()) throw std::invalid_argument("");
            if (j < 1 || j > nplayers)
                throw ParseError("player index " + t.text + " out of range", linenos[li], t.col);
            return j;
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError("invalid player index '" + t.text + "'", linenos[li], t.col);
        }
    };

    for (; li < lines.size(); ++li) {
        const auto& tk = lines[li];
        const std::string& kw = tk[0].text;
        try {
            if (kw == "actions") {
                if (tk.size() < 2) throw fail("actions line needs at least one action", tk[0].col);
                for (size_t i = 1; i < tk.size(); ++i) b.action(tk[i].text);
            } else if (kw == "state") {
                if (tk.size() < 2) throw fail("state line needs a name", tk[0].col);
                std::vector<std::string> props;
                if (tk.size() > 2) {
                    if (tk[2].text != "props")
                        throw fail("expected 'props' after state name", tk[2].col);
                    if (tk.size() < 4) throw fail("props needs at least one proposition", tk[2].col);
                    for (size_t i = 3; i < tk.size(); ++i) props.push_back(tk[i].text);
                }
                b.state(tk[1].text, props);
            } else if (kw == "legal") {
                if (tk.size() < 4) throw fail("expected 'legal <state> <player> <action>+'", tk[0].col);
                int j = parse_player_index(tk[2]);
                std::vector<std::string> as;
                for (size_t i = 3; i < tk.size(); ++i) as.push_back(tk[i].text);
                b.legal(tk[1].text, j, as);
            } else if (kw == "trans") {
                // trans <state> ( a1 , a2 ) <state>
                size_t i = 1;
                if (i >= tk.size()) throw fail("expected source state", tk[0].col);
                std::string from = tk[i++].text;
                if (i >= tk.size() || tk[i].text != "(") throw fail("expected '('");
                ++i;
                std::vector<std::string> mv;
                bool expect_action = true;
                while (i < tk.size() && tk[i].text != ")") {
                    if (expect_action) {
                        if (tk[i].text == ",") throw fail("expected action", tk[i].col);
                        mv.push_back(tk[i].text);
                        expect_action = false;
                    } else {
                        if (tk[i].text != ",") throw fail("expected ','", tk[i].col);
                        expect_action = true;
                    }
                    ++i;
                }
                if (i >= tk.size()) throw fail("expected ')'");
                if (expect_action) throw fail("expected action before ')'", tk[i].col);
                ++i;
                if (i >= tk.size()) throw fail("expected target state");
                std::string to = tk[i++].text;
                if (i != tk.size()) throw fail("unexpected token '" + tk[i].text + "'", tk[i].col);
                b.trans(from, mv, to);
            } else if (kw == "obs") {
                if (tk.size() < 2) throw fail("expected 'obs <player> { <state>+ } ...'", tk[0].col);
                int j = parse_player_index(tk[1]);
                std::vector<std::vector<std::string>> blocks;
                size_t i = 2;
                while (i < tk.size()) {
                    if (tk[i].text != "{") throw fail("expected '{'", tk[i].col);
                    ++i;
                    std::vector<std::string> block;
                    while (i < tk.size() && tk[i].text != "}") block.push_back(tk[i++].text);
                    if (i >= tk.size()) throw fail("expected '}'");
                    ++i;
                    blocks.push_back(std::move(block));
                }
                b.obs(j, blocks);
            } else {
                throw fail("unknown directive '" + kw + "'", tk[0].col);
            }
        } catch (const ParseError& e) {
            if (e.line > 0) throw;
            throw ParseError(e.what(), linenos[li], tk[0].col);
        }
    }
    GameModel m = b.build();
    auto violations = m.validate();
    if (!violations.empty()) throw ParseError(violations.front());
    return m;
}

}  // namespace stratmc
