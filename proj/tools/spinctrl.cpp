#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spinctrl/experiment.hpp"
#include "spinctrl/version.hpp"

namespace {

spinctrl::ExperimentConfig resolve_config(const std::string& config_path,
                                          const std::string& preset, const std::string& out_dir,
                                          int jobs) {
    spinctrl::ExperimentConfig config;
    if (!config_path.empty())
        config = spinctrl::load_config(config_path);
    else
        config = spinctrl::preset_config(preset.empty() ? "desk" : preset);
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (jobs > 0) config.jobs = jobs;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spin-chain optimal control and spectral analysis"};
    app.require_subcommand(1);

    std::string config_path;
    std::string preset;
    std::string out_dir;
    int jobs = 0;
    app.add_option("--config", config_path, "JSON experiment config");
    app.add_option("--preset", preset, "built-in preset (desk or paper)")
        ->check(CLI::IsMember({"desk", "paper"}));
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_option("--jobs", jobs, "worker threads (overrides config)");

    auto* sweep = app.add_subcommand("sweep", "optimize and analyze fields over the grid");
    bool allow_nonconverged = false;
    sweep->add_flag("--allow-nonconverged", allow_nonconverged,
                    "exit 0 even if some cells did not reach the target fidelity");

    auto* brody = app.add_subcommand("brody", "Brody parameter over the (K, gamma, eps) grid");
    auto* diffhist =
        app.add_subcommand("diffhist", "energy-difference histograms at gamma = 0 and 1");
    auto* connmap = app.add_subcommand("connmap", "control-operator connectivity maps");

    auto* optimize = app.add_subcommand("optimize", "run a single optimization cell");
    std::string process_name = "A";
    int K = 1;
    double gamma = 1.0;
    std::uint64_t seed = 1;
    optimize->add_option("--process", process_name)->check(CLI::IsMember({"A", "B"}));
    optimize->add_option("--K", K);
    optimize->add_option("--gamma", gamma);
    optimize->add_option("--seed", seed);

    auto* version = app.add_subcommand("version", "print version and exit");

    // let the global --config/--preset/--out/--jobs flags appear after the
    // subcommand name as well
    for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    if (version->parsed()) {
        std::cout << "spinctrl " << spinctrl::kVersion << "\n";
        return 0;
    }

    try {
        const spinctrl::ExperimentConfig config =
            resolve_config(config_path, preset, out_dir, jobs);

        if (sweep->parsed()) {
            const spinctrl::SweepOutcome outcome = spinctrl::run_sweep(config);
            std::cout << "sweep: " << outcome.cells_run << " cells run, "
                      << outcome.cells_skipped << " skipped, " << outcome.non_converged
                      << " non-converged\n";
            if (outcome.non_converged > 0 && !allow_nonconverged) return 3;
        } else if (brody->parsed()) {
            spinctrl::run_brody_sweep(config);
        } else if (diffhist->parsed()) {
            spinctrl::run_difference_histograms(config);
        } else if (connmap->parsed()) {
            spinctrl::run_connectivity_maps(config);
        } else if (optimize->parsed()) {
            const auto kind = process_name == "A" ? spinctrl::ProcessKind::A
                                                  : spinctrl::ProcessKind::B;
            const auto result = spinctrl::run_single_cell(config, kind, K, gamma, seed);
            std::cout << "optimize: F = " << result.fidelity_history.back() << " after "
                      << result.iterations_used << " iterations"
                      << (result.converged ? "" : " (not converged)") << "\n";
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
