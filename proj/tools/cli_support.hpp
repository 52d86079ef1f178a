#pragma once

// Shared plumbing between the command-line tool and its format tests: flag
// resolution into a SemanticsSpec, verdict-to-exit-status mapping, and the
// text / JSON renderings of each command's report.  Everything here is pure:
// no printing, no process exit, no file access.

#include <chrono>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stratmc/checker.hpp"
#include "stratmc/fixtures.hpp"
#include "stratmc/game_model.hpp"
#include "stratmc/logic.hpp"
#include "stratmc/strategy.hpp"
#include "stratmc/turing.hpp"

namespace stratmc::cli {

// Problems the user can fix on the command line; the tool prints the message
// and exits with the usage status 3.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Resolves --semantics/--k/--max-k/--info/--engine.  k_given and max_k_given
// say whether the user actually typed the flag, so misplaced flags are
// rejected instead of silently ignored.
inline SemanticsSpec resolve_spec(const std::string& semantics, int k, bool k_given, int max_k,
                                  bool max_k_given, const std::string& info,
                                  const std::string& engine) {
    SemanticsSpec sem;
    if (semantics == "r") {
        sem.memory = MemoryMode::Memoryless;
    } else if (semantics == "Fk") {
        sem.memory = MemoryMode::Bounded;
        sem.k = k;
    } else if (semantics == "F") {
        sem.memory = MemoryMode::Finite;
        sem.cap = max_k;
    } else if (semantics == "R") {
        sem.memory = MemoryMode::PerfectRecall;
        // Opt-in: a cap turns the otherwise partial perfect-recall check
        // into capped deepening for proper coalitions with path bodies.
        if (max_k_given) sem.cap = max_k;
    } else {
        throw UsageError("unknown semantics '" + semantics + "'; expected r, Fk, F or R");
    }
    if (k_given && semantics != "Fk") throw UsageError("--k is only meaningful with --semantics Fk");
    if (max_k_given && semantics != "F" && semantics != "R")
        throw UsageError("--max-k is only meaningful with --semantics F or R");

    if (info == "auto")
        sem.info = InfoMode::Auto;
    else if (info == "complete")
        sem.info = InfoMode::Complete;
    else if (info == "incomplete")
        sem.info = InfoMode::Incomplete;
    else
        throw UsageError("unknown info mode '" + info + "'; expected auto, complete or incomplete");

    if (engine == "auto")
        sem.engine = SearchEngine::Auto;
    else if (engine == "serial")
        sem.engine = SearchEngine::Serial;
    else if (engine == "parallel")
        sem.engine = SearchEngine::Parallel;
    else if (engine == "lexdfs")
        sem.engine = SearchEngine::LexDfs;
    else if (engine == "celldfs")
        sem.engine = SearchEngine::CellDfs;
    else
        throw UsageError("unknown engine '" + engine +
                         "'; expected auto, serial, parallel, lexdfs or celldfs");
    return sem;
}

// Accepts a state name or, as a fallback, a numeric state index.
inline StateId resolve_state(const GameModel& m, const std::string& token) {
    if (auto s = m.state_index(token)) return *s;
    if (!token.empty() && token.find_first_not_of("0123456789") == std::string::npos) {
        const long idx = std::stol(token);
        if (idx < m.num_states()) return static_cast<StateId>(idx);
    }
    throw UsageError("unknown state '" + token + "'");
}

struct StateReport {
    std::string state;
    Verdict verdict;
    std::optional<std::string> witness_text;  // formatted profile, Holds rows only
};

struct CheckReport {
    std::string formula;
    std::string semantics;  // resolved display name, e.g. iF_3
    std::vector<StateReport> rows;
    double elapsed_ms = 0.0;
    int exit_code = 3;
};

// Exit status: 0 when the formula holds at every queried state, 1 when it
// fails somewhere, 2 when the only non-Holds answers are Unknown.
inline int exit_code_of(const std::vector<StateReport>& rows) {
    bool unknown = false;
    for (const auto& r : rows) {
        if (r.verdict.kind == VerdictKind::Fails) return 1;
        if (r.verdict.kind == VerdictKind::Unknown) unknown = true;
    }
    return unknown ? 2 : 0;
}

// Evaluates the formula on the whole model and assembles rows for `wanted`
// (all states when empty, in declaration order).
inline CheckReport run_check(const GameModel& m, const Formula& f, const SemanticsSpec& sem,
                             const std::vector<StateId>& wanted, bool want_witness) {
    CheckReport rep;
    rep.formula = to_string(f);
    rep.semantics = semantics_name(m, sem);
    const auto t0 = std::chrono::steady_clock::now();
    const auto verdicts = evaluate(m, f, sem);
    const auto t1 = std::chrono::steady_clock::now();
    rep.elapsed_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    std::vector<StateId> states = wanted;
    if (states.empty())
        for (StateId s = 0; s < m.num_states(); ++s) states.push_back(s);
    for (StateId s : states) {
        StateReport row;
        row.state = m.state_name(s);
        row.verdict = verdicts.at(s);
        if (want_witness && row.verdict.holds() && row.verdict.witness.has_value())
            row.witness_text = format_profile(*row.verdict.witness, m);
        rep.rows.push_back(std::move(row));
    }
    rep.exit_code = exit_code_of(rep.rows);
    return rep;
}

inline std::string text_report(const CheckReport& r) {
    std::ostringstream os;
    os << "formula:   " << r.formula << "\n";
    os << "semantics: " << r.semantics << "\n";
    for (const auto& row : r.rows) {
        os << "state " << row.state << ": " << verdict_name(row.verdict.kind);
        if (row.verdict.holds())
            os << " (memory " << row.verdict.memory_used << ")";
        else if (row.verdict.kind == VerdictKind::Unknown)
            os << " (searched up to memory " << row.verdict.memory_used << ")";
        os << ", " << row.verdict.examined << " profiles examined\n";
        if (row.witness_text) os << *row.witness_text;
    }
    os << "elapsed: " << r.elapsed_ms << " ms\n";
    return os.str();
}

inline nlohmann::json json_report(const CheckReport& r) {
    nlohmann::json out;
    out["formula"] = r.formula;
    out["semantics"] = r.semantics;
    out["elapsed_ms"] = r.elapsed_ms;
    out["exit_code"] = r.exit_code;
    auto rows = nlohmann::json::array();
    for (const auto& row : r.rows) {
        nlohmann::json j;
        j["state"] = row.state;
        j["verdict"] = verdict_name(row.verdict.kind);
        j["examined"] = row.verdict.examined;
        if (row.verdict.holds())
            j["memory_used"] = row.verdict.memory_used;
        else if (row.verdict.kind == VerdictKind::Unknown)
            j["cap"] = row.verdict.memory_used;
        if (row.witness_text) j["witness"] = *row.witness_text;
        rows.push_back(std::move(j));
    }
    out["results"] = std::move(rows);
    return out;
}

struct ValidateReport {
    bool ok = false;
    std::vector<std::string> problems;
};

inline ValidateReport run_validate(const std::string& model_text) {
    ValidateReport rep;
    try {
        (void)parse_model(model_text);
        rep.ok = true;
    } catch (const ParseError& e) {
        rep.problems.push_back(e.what());
    }
    return rep;
}

inline nlohmann::json json_validate(const ValidateReport& r) {
    nlohmann::json out;
    out["ok"] = r.ok;
    out["problems"] = r.problems;
    return out;
}

// `gen` dispatch.  k must be present exactly for fig3, the machine text
// exactly for tm; fig3_family itself rejects k < 1 (std::invalid_argument,
// reported as a usage problem by the tool).
inline GameModel generate_model(const std::string& kind, const std::optional<int>& k,
                                const std::optional<std::string>& tm_text) {
    if (kind != "fig3" && k) throw UsageError("--k is only meaningful for gen fig3");
    if (kind != "tm" && tm_text) throw UsageError("--tm is only meaningful for gen tm");
    if (kind == "fig1") return fig1_model();
    if (kind == "fig2") return fig2_model();
    if (kind == "fig3") {
        if (!k) throw UsageError("gen fig3 requires --k");
        return fig3_family(*k);
    }
    if (kind == "tm") {
        if (!tm_text) throw UsageError("gen tm requires --tm <file>");
        return tm_to_icgm(tm_parse(*tm_text));
    }
    throw UsageError("unknown generator '" + kind + "'; expected fig1, fig2, fig3 or tm");
}

}  // namespace stratmc::cli
