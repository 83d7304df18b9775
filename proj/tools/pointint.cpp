#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pointint/cli.hpp"

using namespace pointint::cli;

int main(int argc, char** argv) {
    CLI::App app{"Point-interaction solvers: scattering, interface dynamics, few-body eigenfunctions"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    unsigned jobs = 1;

    for (std::string_view name : command_names()) {
        CLI::App* sub = app.add_subcommand(std::string(name));
        sub->add_option("--config", config_path, "JSON parameter file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        sub->add_option("--seed", seed, "seed for randomized sweeps")->capture_default_str();
        sub->add_option("--jobs", jobs, "threads for independent sweep points")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    const Command command = *parse_command(app.get_subcommands().front()->get_name());
    std::ifstream in(config_path);
    std::stringstream text;
    text << in.rdbuf();
    if (!in) {
        std::cerr << "pointint: cannot read " << config_path << "\n";
        return 1;
    }

    RunConfig config;
    try {
        config = parse_config(command, text.str());
    } catch (const pointint::ValidationError& e) {
        std::cerr << "pointint " << command_name(command) << ": " << e.what() << "\n";
        return 1;
    }
    config.out_dir = out_dir;
    config.seed = seed;
    config.jobs = jobs;
    return run(config, std::cerr);
}
