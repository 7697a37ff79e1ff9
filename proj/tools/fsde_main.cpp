#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fsde/fsde.hpp"

using fsde::harness::RunConfig;

int main(int argc, char** argv) {
    CLI::App app{"stochastic delay fractional evolution equations: simulate / verify / convergence"};
    app.require_subcommand(1);

    std::string config_path;
    std::string suite = "all";
    std::size_t levels = 3;

    auto* simulate = app.add_subcommand("simulate", "run the Monte Carlo ensemble");
    simulate->add_option("--config", config_path, "run configuration (JSON)")->required();

    auto* verify = app.add_subcommand("verify", "run an invariant suite and write a report");
    verify->add_option("--config", config_path, "run configuration (JSON)")->required();
    verify->add_option("--suite", suite,
                       "one of: specfun, fbm, stochint, operators, solver, all");

    auto* convergence = app.add_subcommand("convergence", "empirical-order study");
    convergence->add_option("--config", config_path, "run configuration (JSON)")->required();
    convergence->add_option("--levels", levels, "number of dt-halving levels (>= 3)");

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig config = RunConfig::from_file(config_path);
        if (simulate->parsed()) {
            const auto out = fsde::harness::run_simulate(config);
            if (out.exit_code == 0)
                std::cout << "wrote " << out.files.size() << " files to "
                          << fsde::harness::resolve_output_dir(config).string() << "\n";
            return out.exit_code;
        }
        if (verify->parsed()) {
            const std::string chosen = verify->count("--suite") ? suite : config.verify_suite;
            return fsde::harness::run_verify(config, chosen);
        }
        return fsde::harness::run_convergence(config, levels);
    } catch (const fsde::solver::HypothesisViolation& e) {
        std::cerr << fsde::harness::Json{{"error", e.reason_code}, {"message", e.what()}}.dump()
                  << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << fsde::harness::Json{{"error", "config_or_runtime"}, {"message", e.what()}}.dump()
                  << "\n";
        return 2;
    }
}
