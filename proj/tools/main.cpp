// Command line front end: run a trial, dump map snapshots, or validate a
// config. Exit codes: 0 success (target foveated for `run`), 2 step budget
// exhausted, 1 configuration or runtime error.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "attsim/config.hpp"
#include "attsim/io.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Neural-field simulator of covert and overt spatial attention"};
    app.require_subcommand(1);

    std::string config_path;
    int snapshot_step = 0;

    CLI::App* run = app.add_subcommand("run", "Run a full trial and write its artifacts");
    run->add_option("config", config_path, "Path to a JSON run config")->required();

    CLI::App* snapshot =
        app.add_subcommand("snapshot", "Run to a given step and dump the configured maps");
    snapshot->add_option("config", config_path, "Path to a JSON run config")->required();
    snapshot->add_option("--step", snapshot_step, "Step index to capture")
        ->required()
        ->check(CLI::NonNegativeNumber);

    CLI::App* validate =
        app.add_subcommand("validate", "Parse and validate a config, then exit");
    validate->add_option("config", config_path, "Path to a JSON run config")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const attsim::RunConfig config = attsim::load_config(config_path);
        if (app.got_subcommand(validate)) {
            std::cout << "ok: " << config_path << "\n";
            return 0;
        }
        if (app.got_subcommand(snapshot))
            return attsim::cmd_snapshot(config, snapshot_step);
        return attsim::cmd_run(config);
    } catch (const attsim::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
