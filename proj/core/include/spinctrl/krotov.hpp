#pragma once

#include <vector>

#include "spinctrl/dynamics.hpp"

namespace spinctrl {

struct KrotovConfig {
    double T = 0.0;               // horizon; <= 0 means 15 * (L-1) * pi / J, set by callers
    double dt = 1e-2;             // in units 1/J
    double lambda0 = 0.0;         // update weight; <= 0 means 100 / T
    double target_fidelity = 0.99;
    int max_iterations = 5000;
    double initial_guess = 0.1;
    double stagnation_tol = 1e-12;
    int stagnation_window = 50;
};

struct OptimizationResult {
    ControlField field;
    std::vector<double> fidelity_history;  // entry 0 is the guess-field fidelity
    int iterations_used = 0;
    bool converged = false;
    bool stagnated = false;
};

// |<psi|psi_f>|^2
double fidelity(const State& psi, const State& psi_f);

// <psi_f|psi_T> |psi_f>; norm^2 equals the fidelity
State co_state(const State& psi_T, const State& psi_f);

// One sequential (immediate-feedback) Krotov sweep: backward-propagate
// the co-state under the current field, then re-propagate forward while
// updating each sample just before its step.
ControlField krotov_iteration(const ControlField& field, const State& psi0, const State& psi_f,
                              const PropagationCache& cache, double lambda0);

OptimizationResult optimize(const State& psi0, const State& psi_f, const OperatorMatrix& H01,
                            const OperatorMatrix& Hc, const KrotovConfig& config);

}  // namespace spinctrl
