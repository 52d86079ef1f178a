// Command-line front end: check formulas on game models, validate model
// files, and generate the bundled example models.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "cli_support.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw stratmc::cli::UsageError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"model checker for strategic ability under bounded-memory strategies"};
    app.require_subcommand(1);

    auto* check = app.add_subcommand("check", "decide a formula on a model file");
    std::string model_path, formula_text, semantics = "Fk", info = "auto", engine = "auto";
    int k = 1, max_k = 4, jobs = 0;
    std::vector<std::string> state_tokens;
    bool want_json = false, want_witness = false;
    check->add_option("--model", model_path, "model file")->required();
    check->add_option("--formula", formula_text, "formula, e.g. \"<<1>> X X p\"")->required();
    check->add_option("--semantics", semantics,
                      "strategy class: r (memoryless), Fk (k-bounded), F (deepening), R "
                      "(perfect recall); default Fk");
    auto* k_opt = check->add_option("--k", k, "memory bound for Fk (default 1)");
    auto* max_k_opt =
        check->add_option("--max-k", max_k, "deepening cap for F (default 4); opt-in cap for R");
    check->add_option("--info", info, "auto|complete|incomplete (default auto)");
    check->add_option("--engine", engine,
                      "auto|serial|parallel|lexdfs|celldfs search engine (default auto)");
    check->add_option("--state", state_tokens, "query state, repeatable; default all states");
    check->add_option("--jobs", jobs, "worker threads for the parallel engine (results do not depend on this)");
    check->add_flag("--json", want_json, "machine-readable report");
    check->add_flag("--witness", want_witness, "print winning profiles for Holds results");

    auto* validate = app.add_subcommand("validate", "check a model file for well-formedness");
    std::string validate_path;
    bool validate_json = false;
    validate->add_option("--model", validate_path, "model file")->required();
    validate->add_flag("--json", validate_json, "machine-readable report");

    auto* gen = app.add_subcommand("gen", "emit one of the bundled models");
    std::string kind, tm_path, out_path;
    int gen_k = 0;
    bool gen_json = false;
    gen->add_option("kind", kind, "fig1|fig2|fig3|tm")->required();
    auto* gen_k_opt = gen->add_option("--k", gen_k, "chain length for fig3");
    gen->add_option("--tm", tm_path, "machine description file for tm");
    gen->add_option("--out", out_path, "write to a file instead of stdout");
    gen->add_flag("--json", gen_json, "wrap the model text in a JSON object");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);  // prints help or the complaint
        return rc == 0 ? 0 : 3;
    }

    using stratmc::cli::UsageError;
    try {
        if (*check) {
            if (jobs > 0) omp_set_num_threads(jobs);
            const stratmc::SemanticsSpec sem =
                stratmc::cli::resolve_spec(semantics, k, k_opt->count() > 0, max_k,
                                           max_k_opt->count() > 0, info, engine);
            const stratmc::GameModel m = stratmc::parse_model(read_file(model_path));
            const stratmc::Formula f = stratmc::parse_formula(formula_text);
            std::vector<stratmc::StateId> wanted;
            for (const auto& t : state_tokens) wanted.push_back(stratmc::cli::resolve_state(m, t));
            const auto rep = stratmc::cli::run_check(m, f, sem, wanted, want_witness);
            if (want_json)
                std::cout << stratmc::cli::json_report(rep).dump(2) << "\n";
            else
                std::cout << stratmc::cli::text_report(rep);
            return rep.exit_code;
        }
        if (*validate) {
            const auto rep = stratmc::cli::run_validate(read_file(validate_path));
            if (validate_json) {
                std::cout << stratmc::cli::json_validate(rep).dump(2) << "\n";
            } else if (rep.ok) {
                std::cout << "ok\n";
            } else {
                for (const auto& p : rep.problems) std::cout << p << "\n";
            }
            return rep.ok ? 0 : 3;
        }
        if (*gen) {
            std::optional<int> kk;
            if (gen_k_opt->count() > 0) kk = gen_k;
            std::optional<std::string> tm_text;
            if (!tm_path.empty()) tm_text = read_file(tm_path);
            const stratmc::GameModel m = stratmc::cli::generate_model(kind, kk, tm_text);
            const std::string text = serialize_model(m);
            std::string payload;
            if (gen_json) {
                nlohmann::json j;
                j["kind"] = kind;
                if (kk) j["k"] = *kk;
                j["model"] = text;
                payload = j.dump(2) + "\n";
            } else {
                payload = text;
            }
            if (out_path.empty()) {
                std::cout << payload;
            } else {
                std::ofstream out(out_path, std::ios::binary);
                if (!out) throw UsageError("cannot write file: " + out_path);
                out << payload;
            }
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        // parse errors, unsupported semantics, and invalid arguments all
        // count as usage problems
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 3;
}
