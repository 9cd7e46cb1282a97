#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "infl/cli.hpp"
#include "infl/inflate.hpp"

namespace {

std::uint64_t default_budget() {
    if (const char* env = std::getenv("INFLATE_BUDGET")) {
        try {
            const unsigned long long value = std::stoull(env);
            if (value > 0) return value;
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring malformed INFLATE_BUDGET\n";
        }
    }
    return infl::kDefaultEnumerationBudget;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"causal compatibility testing via inflation linear programs"};
    app.require_subcommand(1);

    infl::cli::Options options;
    options.budget = default_budget();

    std::string graph_path, input_path, poly_path, verdict_path;

    const auto add_common = [&](CLI::App* cmd, bool with_order = true) {
        if (with_order) cmd->add_option("--order", options.order, "inflation order n")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", options.seed, "seed for sampled diagnostics");
        cmd->add_option("--tolerance", options.tolerance, "feasibility tolerance");
        cmd->add_option("--budget", options.budget, "raw-assignment enumeration budget");
        cmd->add_option("--out", options.out_path, "write the output document to this path");
    };

    CLI::App* check = app.add_subcommand("check", "decide order-n inflation feasibility");
    check->add_option("graph", graph_path, "graph file")->required();
    check->add_option("input", input_path, "distribution or events file")->required();
    check->add_flag("--events", options.force_events, "require the input to be an events file");
    add_common(check);

    CLI::App* optimize = app.add_subcommand("optimize", "certified polynomial lower bound");
    optimize->add_option("graph", graph_path, "correlation scenario graph file")->required();
    optimize->add_option("polynomial", poly_path, "polynomial file")->required();
    add_common(optimize);

    CLI::App* unpack = app.add_subcommand("unpack", "counterfactual correlation scenario and event map");
    unpack->add_option("graph", graph_path, "graph file")->required();
    add_common(unpack, false);

    CLI::App* compile = app.add_subcommand("compile-lp", "export the feasibility LP");
    compile->add_option("graph", graph_path, "graph file")->required();
    compile->add_option("distribution", input_path, "distribution file")->required();
    add_common(compile);

    CLI::App* verify = app.add_subcommand("verify-witness", "re-verify witnesses from a verdict document");
    verify->add_option("verdict", verdict_path, "verdict document (JSON)")->required();
    verify->add_option("--samples", options.samples, "number of compatible samples")->check(CLI::PositiveNumber);
    add_common(verify, false);

    CLI11_PARSE(app, argc, argv);

    if (check->parsed()) return infl::cli::cmd_check(graph_path, input_path, options, std::cout, std::cerr);
    if (optimize->parsed()) return infl::cli::cmd_optimize(graph_path, poly_path, options, std::cout, std::cerr);
    if (unpack->parsed()) return infl::cli::cmd_unpack(graph_path, options, std::cout, std::cerr);
    if (compile->parsed()) return infl::cli::cmd_compile_lp(graph_path, input_path, options, std::cout, std::cerr);
    if (verify->parsed()) return infl::cli::cmd_verify_witness(verdict_path, options, std::cout, std::cerr);
    return infl::cli::kExitInputError;
}
