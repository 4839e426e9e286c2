#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "nbrach/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"NB-IoT random-access success probability: closed-form evaluation and "
                 "Monte Carlo validation"};

    std::string config_path;
    std::string experiment = "fig3_sinr_sweep";
    std::string mode = "analytic";
    std::string out_path = "-";
    std::string format = "csv";
    int trials = 200;
    int slots = -1;
    std::uint64_t seed = 1;
    int threads = 0;
    bool show_keys = false;

    app.add_option("--config", config_path, "configuration file (key = value [unit])");
    app.add_option("--experiment", experiment, "experiment name")
        ->check(CLI::IsMember(nbrach::experiment::experiment_names()));
    app.add_option("--mode", mode, "analytic, sim, or both")
        ->check(CLI::IsMember({"analytic", "sim", "both"}));
    app.add_option("--trials", trials, "Monte Carlo trials per sweep point");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--slots", slots, "override the slot horizon");
    app.add_option("--out", out_path, "output path ('-' = stdout)");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", threads, "worker threads for MC trials (0 = hardware)");
    app.add_flag("--keys", show_keys, "print the config key reference and exit");

    CLI11_PARSE(app, argc, argv);

    try {
        if (show_keys) {
            std::cout << nbrach::config_key_reference();
            return 0;
        }
        nbrach::FullConfig base =
            config_path.empty() ? nbrach::FullConfig{} : nbrach::parse_config_file(config_path);

        nbrach::experiment::ExperimentSpec spec =
            nbrach::experiment::make_experiment(experiment, std::move(base));
        spec.run_analytic = mode == "analytic" || mode == "both";
        spec.run_sim = mode == "sim" || mode == "both";
        spec.trials = trials;
        spec.master_seed = seed;
        if (slots > 0) {
            spec.slots = slots;
            if (spec.sweep_var == "slot") {
                spec.grid.clear();
                for (int t = 1; t <= slots; ++t) spec.grid.push_back(t);
            }
        }
        spec.threads = threads > 0
                           ? threads
                           : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

        const nbrach::experiment::ExperimentResult result =
            nbrach::experiment::run_experiment(spec, &std::cerr);
        nbrach::experiment::write_results(result, format, out_path);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
