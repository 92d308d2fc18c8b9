#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "advecta/commands.hpp"
#include "advecta/errors.hpp"
#include "advecta/scenario.hpp"

namespace {

struct Cli {
    std::string scenario_path;
    std::optional<double> dt;
    std::optional<double> horizon;
    std::optional<int> lookahead;
    std::optional<std::string> extension;
    std::optional<double> lambda;
    std::optional<std::string> out;
    std::optional<std::string> dump_phi;
    bool policy_check = false;
};

void add_common(CLI::App* cmd, Cli& cli) {
    cmd->add_option("scenario", cli.scenario_path, "Scenario JSON file")->required();
    cmd->add_option("--dt", cli.dt, "Override the scenario grid step");
    cmd->add_option("--horizon", cli.horizon, "Override the reporting horizon T");
    cmd->add_option("--lookahead", cli.lookahead, "Override the lookahead depth");
    cmd->add_option("--extension", cli.extension, "Override the extension policy (hold|zero)")
        ->check(CLI::IsMember({"hold", "zero"}));
}

advecta::CommandOverrides to_overrides(const Cli& cli) {
    advecta::CommandOverrides o;
    o.dt = cli.dt;
    o.horizon = cli.horizon;
    o.lookahead = cli.lookahead;
    if (cli.extension) {
        o.extension = (*cli.extension == "hold") ? advecta::ExtensionPolicy::HoldLastValue
                                                 : advecta::ExtensionPolicy::Zero;
    }
    o.lambda = cli.lambda;
    o.out = cli.out;
    o.dump_phi = cli.dump_phi;
    o.policy_check = cli.policy_check;
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Solve linear advanced differential systems by contraction mapping and "
        "compute their stability certificates"};
    app.require_subcommand(1);

    Cli cli;
    CLI::App* analyze = app.add_subcommand("analyze", "Emit the stability report");
    add_common(analyze, cli);
    analyze->add_option("--dump-phi", cli.dump_phi, "Write the fundamental matrix grid CSV here");

    CLI::App* solve = app.add_subcommand("solve", "Iterate the mapping to the solution trajectory");
    add_common(solve, cli);
    solve->add_option("--out", cli.out, "Trajectory CSV path (sidecar JSON next to it)");
    solve->add_flag("--policy-check", cli.policy_check,
                    "Also solve under the other extension policy and report the difference");

    CLI::App* certify = app.add_subcommand("certify", "Exponential-convergence certificate");
    add_common(certify, cli);
    certify->add_option("--lambda", cli.lambda, "Certify at this decay rate instead of scanning");

    CLI::App* sweep = app.add_subcommand("sweep", "Cartesian sweep over scenario variables");
    add_common(sweep, cli);
    sweep->add_option("--out", cli.out, "Sweep CSV path (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        const advecta::Scenario scenario = advecta::load_scenario(cli.scenario_path);
        const advecta::CommandOverrides overrides = to_overrides(cli);
        if (analyze->parsed()) return advecta::cmd_analyze(scenario, overrides, std::cout);
        if (solve->parsed()) return advecta::cmd_solve(scenario, overrides, std::cout);
        if (certify->parsed()) return advecta::cmd_certify(scenario, overrides, std::cout);
        if (sweep->parsed()) return advecta::cmd_sweep(scenario, overrides, std::cout);
    } catch (const advecta::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
