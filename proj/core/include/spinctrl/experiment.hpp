#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "spinctrl/basis.hpp"
#include "spinctrl/krotov.hpp"
#include "spinctrl/operators.hpp"
#include "spinctrl/protocols.hpp"

namespace spinctrl {

// Declarative description of a batch of runs; every field is
// overridable from the JSON config.
struct ExperimentConfig {
    ChainParams chain;
    std::vector<ProcessKind> processes = {ProcessKind::A};
    std::vector<int> k_values = {1};
    std::vector<double> gamma_grid = {1.0};
    std::vector<double> j_grid;  // empty: use chain.J only
    ControlOperatorKind control = ControlOperatorKind::LocalEdge;

    KrotovConfig krotov;       // krotov.T <= 0 means horizon_factor * T_L per cell
    double horizon_factor = 15.0;

    double beta_cutoff = 1e-2;
    bool remove_dc = true;

    std::vector<double> epsilon_grid;  // empty: 13 points on [-3, 3]
    double trim_fraction = 0.0;

    std::vector<int> m_values = {1};
    int hist_bins = 40;
    double hist_range = 4.0;

    std::vector<std::uint64_t> seeds = {1};
    std::string out_dir = "out";
    int jobs = 1;
    double connmap_gamma = 1.0;

    void validate() const;
    std::vector<double> effective_j_grid() const;
    std::vector<double> effective_epsilon_grid() const;
    double horizon(double J) const;  // krotov.T if set, else factor * (L-1) pi / J
};

ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
ExperimentConfig preset_config(const std::string& name);  // "desk" or "paper"

struct SweepOutcome {
    int cells_run = 0;
    int cells_skipped = 0;
    int non_converged = 0;
};

// One optimization + field analysis per (process, K, gamma, J, seed)
// cell, appended to <out_dir>/sweep.csv. Cells already present in the
// file are skipped, so an interrupted sweep can be resumed.
SweepOutcome run_sweep(const ExperimentConfig& config);

// Brody parameter of H01 + eps Hc over the (K, gamma, eps) grid:
// <out_dir>/brody.csv plus the per-(K, gamma) mean over eps in
// <out_dir>/brody_mean.csv.
void run_brody_sweep(const ExperimentConfig& config);

// Normalized energy-difference histograms at Gamma = 0 and Gamma = 1
// for each M, plus their L1 distances in <out_dir>/diffhist_l1.csv.
void run_difference_histograms(const ExperimentConfig& config);

// |matrix element| grids of both control operators in the sector
// computational basis and in the positive-parity H01 eigenbasis.
void run_connectivity_maps(const ExperimentConfig& config);

// Single-cell optimization; dumps field and fidelity-history CSVs and
// returns the result.
OptimizationResult run_single_cell(const ExperimentConfig& config, ProcessKind process, int K,
                                   double gamma, std::uint64_t seed);

}  // namespace spinctrl
