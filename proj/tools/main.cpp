#include <cstdio>
#include <iostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "experiments.hpp"
#include "mmnoma/error.hpp"

namespace {

enum Exit { kOk = 0, kIo = 1, kConfig = 2, kInfeasible = 3 };

}  // namespace

int main(int argc, char** argv) {
    using namespace mmnoma;

    CLI::App app{"mmWave NOMA beam and rate experiments"};
    std::string command;
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    cli::RunOptions options;

    app.add_option("command", command, "Experiment to run")
        ->required()
        ->check(CLI::IsMember(cli::command_names()));
    app.add_option("--config", config_path, "Scenario JSON file")->required();
    app.add_option("--out", out_dir, "Output directory for CSV files");
    auto* seed_opt = app.add_option("--seed", seed, "Override the config seed");
    app.add_flag("--ignore-mui", options.ignore_mui, "Drop inter-group interference from hybrid_mode1.csv");
    app.add_option("--grid", options.grid, "Pattern grid size for design-beam")->check(CLI::Range(2, 1 << 24));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        cli::ScenarioConfig config = cli::load_config(config_path);
        if (seed_opt->count() > 0) {
            config.seed = seed;
        }
        for (const auto& path : cli::run_named(command, config, out_dir, options)) {
            std::cout << path.string() << '\n';
        }
        return kOk;
    } catch (const cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible scenario: " << e.what() << '\n';
        return kInfeasible;
    } catch (const DegenerateError& e) {
        std::cerr << "degenerate scenario: " << e.what() << '\n';
        return kInfeasible;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid scenario: " << e.what() << '\n';
        return kConfig;
    } catch (const cli::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    }
}
