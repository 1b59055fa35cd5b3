#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "leslie1d/harness.hpp"

int main(int argc, char** argv) {
    CLI::App app{"1D compressible Ericksen-Leslie solver: runs, delta sweeps and identity checks"};
    app.require_subcommand(1);

    std::string run_config;
    auto* run = app.add_subcommand("run", "run one simulation from a config file");
    run->add_option("--config", run_config, "INI or JSON config")->required()->check(CLI::ExistingFile);

    std::string sweep_config, deltas_text;
    auto* sweep = app.add_subcommand("sweep", "mollification sweep over decreasing deltas");
    sweep->add_option("--config", sweep_config, "INI or JSON config")->required()->check(CLI::ExistingFile);
    sweep->add_option("--deltas", deltas_text, "comma separated, strictly decreasing");

    std::uint64_t seed = 20240607;
    long samples = 10000;
    auto* verify = app.add_subcommand("verify", "randomized identity suite for the derivation");
    verify->add_option("--seed", seed, "random seed");
    verify->add_option("--samples", samples, "samples per pointwise identity")->check(CLI::PositiveNumber);

    std::string validate_config;
    bool as_json = false;
    auto* validate = app.add_subcommand("validate-coefficients", "check the Leslie coefficient inequalities");
    validate->add_option("--config", validate_config, "INI or JSON config")->required()->check(CLI::ExistingFile);
    validate->add_flag("--json", as_json, "print the report as JSON");

    CLI11_PARSE(app, argc, argv);

    if (*run) return leslie1d::run_command(run_config, std::cout, std::cerr);
    if (*sweep) {
        std::optional<std::vector<double>> deltas;
        if (!deltas_text.empty()) {
            try {
                deltas = leslie1d::parse_delta_list(deltas_text);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << '\n';
                return 2;
            }
        }
        return leslie1d::sweep_command(sweep_config, deltas, std::cout, std::cerr);
    }
    if (*verify) return leslie1d::verify_command(seed, samples, std::cout);
    if (*validate) return leslie1d::validate_coefficients_command(validate_config, as_json, std::cout, std::cerr);
    return 0;
}
