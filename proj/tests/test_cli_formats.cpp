#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "../tools/cli_support.hpp"
#include "stratmc/product.hpp"
#include "stratmc/search.hpp"
#include "stratmc/temporal.hpp"

using namespace stratmc;
using namespace stratmc::cli;

namespace {

constexpr auto npos = std::string::npos;

template <typename Fn>
std::string thrown_message(Fn&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

SemanticsSpec spec_of(const std::string& semantics, int k = 1, bool k_given = false, int max_k = 4,
                      bool max_k_given = false, const std::string& info = "auto",
                      const std::string& engine = "auto") {
    return resolve_spec(semantics, k, k_given, max_k, max_k_given, info, engine);
}

StateReport row_of(VerdictKind kind) {
    StateReport r;
    r.state = "s";
    r.verdict.kind = kind;
    return r;
}

// Serialized fig2 text with one transition line removed, so validation has
// exactly one problem to report.
std::string broken_fig2_text() {
    std::istringstream in(serialize_model(fig2_model()));
    std::string out;
    for (std::string line; std::getline(in, line);)
        if (line != "trans s0 (w) s0") out += line + "\n";
    return out;
}

}  // namespace

TEST_CASE("flag resolution maps command-line options onto checker semantics") {
    CHECK(spec_of("r").memory == MemoryMode::Memoryless);

    const SemanticsSpec fk = spec_of("Fk", 3, true);
    CHECK(fk.memory == MemoryMode::Bounded);
    CHECK(fk.k == 3);

    const SemanticsSpec f_default = spec_of("F");
    CHECK(f_default.memory == MemoryMode::Finite);
    CHECK(f_default.cap == 4);  // default deepening cap
    CHECK(spec_of("F", 1, false, 7, true).cap == 7);

    const SemanticsSpec r_plain = spec_of("R");
    CHECK(r_plain.memory == MemoryMode::PerfectRecall);
    CHECK(r_plain.cap == 0);  // no opt-in cap unless --max-k was typed
    CHECK(spec_of("R", 1, false, 5, true).cap == 5);

    CHECK(spec_of("r", 1, false, 4, false, "complete").info == InfoMode::Complete);
    CHECK(spec_of("r", 1, false, 4, false, "incomplete").info == InfoMode::Incomplete);
    CHECK(spec_of("r").info == InfoMode::Auto);

    CHECK(spec_of("r", 1, false, 4, false, "auto", "serial").engine == SearchEngine::Serial);
    CHECK(spec_of("r", 1, false, 4, false, "auto", "parallel").engine == SearchEngine::Parallel);
    CHECK(spec_of("r", 1, false, 4, false, "auto", "lexdfs").engine == SearchEngine::LexDfs);
    CHECK(spec_of("r", 1, false, 4, false, "auto", "celldfs").engine == SearchEngine::CellDfs);
    CHECK(spec_of("r").engine == SearchEngine::Auto);

    CHECK(thrown_message([] { spec_of("free"); }).find("unknown semantics") != npos);
    CHECK(thrown_message([] { spec_of("r", 2, true); })
              .find("--k is only meaningful with --semantics Fk") != npos);
    CHECK(thrown_message([] { spec_of("Fk", 1, false, 6, true); })
              .find("--max-k is only meaningful with --semantics F or R") != npos);
    CHECK(thrown_message([] { spec_of("r", 1, false, 4, false, "partial"); })
              .find("unknown info mode") != npos);
    CHECK(thrown_message([] { spec_of("r", 1, false, 4, false, "auto", "gpu"); })
              .find("unknown engine") != npos);
}

TEST_CASE("exit status is a total function of the verdict rows") {
    CHECK(exit_code_of({}) == 0);

    // Every row sequence up to length three: any Fails wins, else any
    // Unknown, else success.
    const VerdictKind kinds[] = {VerdictKind::Holds, VerdictKind::Fails, VerdictKind::Unknown};
    for (int len = 1; len <= 3; ++len) {
        for (int code = 0; code < 27; ++code) {
            int rest = code;
            std::vector<StateReport> rows;
            bool any_fails = false;
            bool any_unknown = false;
            for (int i = 0; i < len; ++i) {
                const VerdictKind k = kinds[rest % 3];
                rest /= 3;
                rows.push_back(row_of(k));
                any_fails |= k == VerdictKind::Fails;
                any_unknown |= k == VerdictKind::Unknown;
            }
            const int expected = any_fails ? 1 : any_unknown ? 2 : 0;
            CHECK(exit_code_of(rows) == expected);
        }
    }
}

TEST_CASE("state lookup accepts declared names and bare indexes") {
    const GameModel m = fig2_model();
    CHECK(resolve_state(m, "s2") == 2);
    CHECK(resolve_state(m, "1") == 1);  // numeric fallback
    CHECK(thrown_message([&] { resolve_state(m, "zz"); }).find("unknown state 'zz'") != npos);
    CHECK(thrown_message([&] { resolve_state(m, "7"); }).find("unknown state") != npos);
    CHECK(thrown_message([&] { resolve_state(m, ""); }).find("unknown state") != npos);
}

TEST_CASE("check reports carry verdicts and machine-checkable witnesses") {
    const GameModel m = fig2_model();
    const Formula f = parse_formula("<<1>> X X p");
    SemanticsSpec sem;
    sem.memory = MemoryMode::Bounded;
    sem.k = 2;

    const CheckReport rep = run_check(m, f, sem, {}, true);
    CHECK(rep.formula == to_string(f));
    CHECK(rep.semantics == "IF_2");
    CHECK(rep.elapsed_ms >= 0.0);
    REQUIRE(rep.rows.size() == 3);

    CHECK(rep.rows[0].state == "s0");
    CHECK(rep.rows[0].verdict.kind == VerdictKind::Holds);
    REQUIRE(rep.rows[0].witness_text.has_value());
    REQUIRE(rep.rows[0].verdict.witness.has_value());

    // The printed witness re-parses into the exact profile the checker
    // returned, is structurally valid, and replays as a win at s0.
    const StrategyProfile prof = parse_profile(*rep.rows[0].witness_text, m);
    CHECK(prof == *rep.rows[0].verdict.witness);
    for (const Dfst& d : prof) CHECK(dfst_violations(d, m).empty());
    const CoalitionTable table(m, {0});
    const Labeling lab(m);
    CHECK(profile_wins(m, table, prof, {0}, lab, objective_from_body(parse_formula("X X p"))));

    CHECK(rep.rows[1].verdict.kind == VerdictKind::Fails);
    CHECK_FALSE(rep.rows[1].witness_text.has_value());
    CHECK(rep.rows[2].verdict.kind == VerdictKind::Fails);
    CHECK(rep.exit_code == 1);

    // Restricting the query restricts the rows; the exit code follows suit,
    // and witnesses stay off unless requested.
    const CheckReport only0 = run_check(m, f, sem, {0}, false);
    REQUIRE(only0.rows.size() == 1);
    CHECK(only0.rows[0].state == "s0");
    CHECK_FALSE(only0.rows[0].witness_text.has_value());
    CHECK(only0.exit_code == 0);

    // Queried order is preserved verbatim.
    const CheckReport reordered = run_check(m, f, sem, {2, 0}, false);
    REQUIRE(reordered.rows.size() == 2);
    CHECK(reordered.rows[0].state == "s2");
    CHECK(reordered.rows[1].state == "s0");
}

TEST_CASE("text reports include every advertised line") {
    const GameModel m = fig2_model();
    SemanticsSpec sem;
    sem.memory = MemoryMode::Bounded;
    sem.k = 2;
    const CheckReport rep = run_check(m, parse_formula("<<1>> X X p"), sem, {}, true);

    const std::string text = text_report(rep);
    CHECK(text.find("formula:   " + rep.formula) != npos);
    CHECK(text.find("semantics: IF_2") != npos);
    CHECK(text.find("state s0: Holds (memory ") != npos);
    CHECK(text.find(" profiles examined") != npos);
    CHECK(text.find("dfst player=1 k=") != npos);  // witness body is embedded
    CHECK(text.find("state s1: Fails,") != npos);
    CHECK(text.find("elapsed: ") != npos);

    // Unknown rows report how far the search got instead of a memory bound.
    CheckReport u;
    u.formula = "f";
    u.semantics = "iF";
    StateReport r0;
    r0.state = "s";
    r0.verdict.kind = VerdictKind::Unknown;
    r0.verdict.memory_used = 3;
    r0.verdict.examined = 17;
    u.rows.push_back(r0);
    u.exit_code = exit_code_of(u.rows);
    CHECK(u.exit_code == 2);
    CHECK(text_report(u).find("state s: Unknown (searched up to memory 3), 17 profiles examined") !=
          npos);
}

TEST_CASE("json reports expose the same data machine-readably") {
    const GameModel m = fig2_model();
    SemanticsSpec sem;
    sem.memory = MemoryMode::Bounded;
    sem.k = 2;
    const CheckReport rep = run_check(m, parse_formula("<<1>> X X p"), sem, {}, true);

    const nlohmann::json j = json_report(rep);
    CHECK(j["formula"] == rep.formula);
    CHECK(j["semantics"] == "IF_2");
    CHECK(j["exit_code"] == 1);
    REQUIRE(j["results"].size() == 3);

    const auto& r0 = j["results"][0];
    CHECK(r0["state"] == "s0");
    CHECK(r0["verdict"] == "Holds");
    CHECK(r0.contains("memory_used"));
    CHECK(r0.contains("examined"));
    REQUIRE(r0.contains("witness"));
    const StrategyProfile prof = parse_profile(r0["witness"].get<std::string>(), m);
    CHECK(prof == *rep.rows[0].verdict.witness);

    const auto& r1 = j["results"][1];
    CHECK(r1["verdict"] == "Fails");
    CHECK_FALSE(r1.contains("memory_used"));
    CHECK_FALSE(r1.contains("witness"));

    // The dump survives a parse round trip unchanged.
    CHECK(nlohmann::json::parse(j.dump()) == j);

    // Unknown rows carry the cap reached instead of a memory bound.
    CheckReport u;
    StateReport ur;
    ur.state = "s";
    ur.verdict.kind = VerdictKind::Unknown;
    ur.verdict.memory_used = 2;
    u.rows.push_back(ur);
    const nlohmann::json uj = json_report(u);
    CHECK(uj["results"][0]["cap"] == 2);
    CHECK_FALSE(uj["results"][0].contains("memory_used"));
}

TEST_CASE("validation reports list the model's problems") {
    const ValidateReport ok = run_validate(serialize_model(fig2_model()));
    CHECK(ok.ok);
    CHECK(ok.problems.empty());
    const nlohmann::json jok = json_validate(ok);
    CHECK(jok["ok"] == true);
    CHECK(jok["problems"].empty());

    const ValidateReport bad = run_validate(broken_fig2_text());
    CHECK_FALSE(bad.ok);
    REQUIRE(bad.problems.size() == 1);
    CHECK(bad.problems[0].find("missing transition") != npos);
    CHECK(json_validate(bad)["ok"] == false);
}

TEST_CASE("generator dispatch enforces its flag pairings") {
    CHECK(serialize_model(generate_model("fig1", {}, {})) == serialize_model(fig1_model()));
    CHECK(serialize_model(generate_model("fig2", {}, {})) == serialize_model(fig2_model()));
    CHECK(serialize_model(generate_model("fig3", 2, {})) == serialize_model(fig3_family(2)));

    const std::string tm_text =
        "tm\nstates q0\ninitial q0\naccept\nalphabet 0\nblank B\ndelta q0 B -> q0 0 R\n";
    CHECK(generate_model("tm", {}, tm_text).validate().empty());

    CHECK(thrown_message([] { generate_model("fig3", {}, {}); }).find("requires --k") != npos);
    CHECK(thrown_message([] { generate_model("tm", {}, {}); }).find("requires --tm") != npos);
    CHECK(thrown_message([] { generate_model("fig1", 2, {}); }).find("--k is only meaningful") !=
          npos);
    CHECK(thrown_message([&] { generate_model("fig2", {}, tm_text); })
              .find("--tm is only meaningful") != npos);
    CHECK(thrown_message([] { generate_model("door", {}, {}); }).find("unknown generator") != npos);
    CHECK_THROWS_AS(generate_model("fig3", 0, {}), std::invalid_argument);
}

namespace {

struct ToolRun {
    int status = -1;
    std::string output;
};

// Spawns the freshly built tool from the build directory (the test's working
// directory under ctest) and captures its combined output.
ToolRun run_tool(const std::string& args) {
    const std::string out_path = "tmp_cli_fmt_out.txt";
    const int raw = std::system(("./stratmc " + args + " > " + out_path + " 2>&1").c_str());
    ToolRun r;
    if (WIFEXITED(raw)) r.status = WEXITSTATUS(raw);
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    r.output = ss.str();
    return r;
}

std::string without_timing(const std::string& text) {
    std::istringstream in(text);
    std::string kept;
    for (std::string line; std::getline(in, line);)
        if (line.rfind("elapsed:", 0) != 0 && line.find("\"elapsed_ms\"") == npos)
            kept += line + "\n";
    return kept;
}

}  // namespace

TEST_CASE("the tool process honors the documented exit-code contract") {
    if (!std::filesystem::exists("stratmc")) {
        MESSAGE("stratmc binary not in the working directory; skipping process checks");
        return;
    }

    std::ofstream("tmp_cli_fmt_fig2.cgm") << serialize_model(fig2_model());
    std::ofstream("tmp_cli_fmt_broken.cgm") << broken_fig2_text();
    std::ofstream("tmp_cli_fmt_loop.tm")
        << "tm\nstates q0\ninitial q0\naccept\nalphabet 0\nblank B\ndelta q0 B -> q0 0 R\n";

    const std::string check_fig2 = "check --model tmp_cli_fmt_fig2.cgm ";

    const ToolRun holds =
        run_tool(check_fig2 + "--formula \"<<1>> X X p\" --semantics Fk --k 2 --state s0 --witness");
    CHECK(holds.status == 0);
    CHECK(holds.output.find("state s0: Holds") != npos);
    CHECK(holds.output.find("dfst player=1 k=") != npos);

    // Same query at every state: two states fail, so the aggregate is 1.
    CHECK(run_tool(check_fig2 + "--formula \"<<1>> X X p\" --k 2").status == 1);
    // One memory state cannot play w-then-g from s0.
    CHECK(run_tool(check_fig2 + "--formula \"<<1>> X X p\" --k 1 --state s0").status == 1);

    const ToolRun syntax = run_tool(check_fig2 + "--formula \"<<1>> X X\"");
    CHECK(syntax.status == 3);
    CHECK(syntax.output.find("error:") != npos);

    const ToolRun badstate = run_tool(check_fig2 + "--formula p --state nope");
    CHECK(badstate.status == 3);
    CHECK(badstate.output.find("unknown state") != npos);

    CHECK(run_tool("check --formula p").status == 3);  // --model is required
    CHECK(run_tool("frobnicate").status == 3);         // unknown subcommand

    CHECK(run_tool("validate --model tmp_cli_fmt_fig2.cgm").status == 0);
    const ToolRun invalid = run_tool("validate --model tmp_cli_fmt_broken.cgm");
    CHECK(invalid.status == 3);
    CHECK(invalid.output.find("missing transition") != npos);

    CHECK(run_tool("gen fig3 --k 0").status == 3);
    CHECK(run_tool("gen tm --tm tmp_cli_fmt_loop.tm --out tmp_cli_fmt_loop.cgm").status == 0);
    CHECK(run_tool("validate --model tmp_cli_fmt_loop.cgm").status == 0);

    // Perfect recall under incomplete information is refused loudly.
    const ToolRun undecidable = run_tool(
        "check --model tmp_cli_fmt_loop.cgm --formula \"<<1,2>> G ! p\" --semantics R --state s0");
    CHECK(undecidable.status == 3);
    CHECK(undecidable.output.find("undecidable") != npos);

    // JSON output carries the process exit code and a replayable witness.
    const ToolRun js = run_tool(check_fig2 +
                                "--formula \"<<1>> X X p\" --k 2 --state s0 --witness --json");
    CHECK(js.status == 0);
    const nlohmann::json parsed = nlohmann::json::parse(js.output);
    CHECK(parsed["exit_code"] == 0);
    REQUIRE(parsed["results"].size() == 1);
    const GameModel m = fig2_model();
    const StrategyProfile prof =
        parse_profile(parsed["results"][0]["witness"].get<std::string>(), m);
    for (const Dfst& d : prof) CHECK(dfst_violations(d, m).empty());
    const CoalitionTable table(m, {0});
    const Labeling lab(m);
    CHECK(profile_wins(m, table, prof, {0}, lab, objective_from_body(parse_formula("X X p"))));

    // Results are independent of the worker count; only timing may differ.
    const std::string jobs_query = check_fig2 + "--formula \"<<1>> X X p\" --k 2 --witness --jobs ";
    const ToolRun j1 = run_tool(jobs_query + "1");
    const ToolRun j4 = run_tool(jobs_query + "4");
    CHECK(j1.status == j4.status);
    CHECK(without_timing(j1.output) == without_timing(j4.output));

    for (const char* scratch :
         {"tmp_cli_fmt_out.txt", "tmp_cli_fmt_fig2.cgm", "tmp_cli_fmt_broken.cgm",
          "tmp_cli_fmt_loop.tm", "tmp_cli_fmt_loop.cgm"})
        std::filesystem::remove(scratch);
}
