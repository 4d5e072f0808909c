#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "epinet/experiment.hpp"

namespace xp = epinet::experiment;

int main(int argc, char** argv) {
    CLI::App app{"Weighted-network epidemic experiments"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run an experiment and write CSV + plot script");
    std::string preset_id;
    std::string config_path;
    std::string mode_str;
    std::string out_dir = ".";
    int n = -1;
    int replicates = -1;
    std::uint64_t seed = 0;
    bool seed_set = false;
    auto* preset_opt = run->add_option("--preset", preset_id, "Built-in preset id (fig1..fig6)");
    auto* config_opt = run->add_option("--config", config_path, "Experiment config JSON file");
    preset_opt->excludes(config_opt);
    run->add_option("--mode", mode_str, "analytic|simulate|both");
    run->add_option("--n", n, "Population size for simulation");
    run->add_option("--replicates", replicates, "Simulation replicates per grid point");
    run->add_option("--seed", seed, "Master seed")->each([&seed_set](const std::string&) {
        seed_set = true;
    });
    run->add_option("--out", out_dir, "Output directory");

    auto* dump = app.add_subcommand("dump-preset", "Print a preset config as JSON");
    std::string dump_id;
    dump->add_option("id", dump_id, "Preset id (fig1..fig6)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(dump)) {
            auto all = xp::presets();
            auto it = all.find(dump_id);
            if (it == all.end()) {
                std::cerr << "unknown preset: " << dump_id << '\n';
                return 1;
            }
            nlohmann::json j;
            xp::to_json(j, it->second);
            std::cout << j.dump(2) << '\n';
            return 0;
        }

        xp::ExperimentConfig config;
        if (!preset_id.empty()) {
            auto all = xp::presets();
            auto it = all.find(preset_id);
            if (it == all.end()) {
                std::cerr << "unknown preset: " << preset_id << '\n';
                return 1;
            }
            config = it->second;
        } else if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                std::cerr << "cannot read config: " << config_path << '\n';
                return 1;
            }
            nlohmann::json j = nlohmann::json::parse(in);
            xp::from_json(j, config);
        } else {
            std::cerr << "run requires --preset or --config\n";
            return 1;
        }

        if (!mode_str.empty()) config.mode = xp::parse_mode(mode_str);
        if (n > 0) config.n = n;
        if (replicates > 0) config.replicates = replicates;
        if (seed_set) config.seed = seed;

        xp::ResultTable table = xp::run_experiment(config);
        auto csv = xp::emit_outputs(table, config.id, out_dir);
        std::cout << "wrote " << csv.string() << '\n';
        return 0;
    } catch (const xp::ConfigError& e) {
        std::cerr << "config error:\n";
        for (const auto& p : e.problems()) std::cerr << "  - " << p << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
