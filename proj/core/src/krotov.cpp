#include "spinctrl/krotov.hpp"

#include <cmath>
#include <stdexcept>

namespace spinctrl {

namespace {

// forward sweep with immediate field updates; mutates `field`
State update_sweep(ControlField& field, const State& psi0, const Trajectory& chi,
                   const PropagationCache& cache, double lambda0) {
    State psi = psi0;
    for (int j = 0; j < field.steps(); ++j) {
        const State hc_psi = cache.apply_control(psi);
        const std::complex<double> overlap =
            chi.states[static_cast<std::size_t>(j)].dot(hc_psi);
        field.samples[static_cast<std::size_t>(j)] += overlap.imag() / lambda0;
        psi = step(psi, field.samples[static_cast<std::size_t>(j)], cache);
    }
    return psi;
}

}  // namespace

double fidelity(const State& psi, const State& psi_f) {
    if (psi.size() != psi_f.size()) throw std::invalid_argument("fidelity: dimension mismatch");
    return std::norm(psi_f.dot(psi));
}

State co_state(const State& psi_T, const State& psi_f) {
    if (psi_T.size() != psi_f.size()) throw std::invalid_argument("co_state: dimension mismatch");
    return psi_f.dot(psi_T) * psi_f;
}

ControlField krotov_iteration(const ControlField& field, const State& psi0, const State& psi_f,
                              const PropagationCache& cache, double lambda0) {
    if (!(lambda0 > 0.0)) throw std::invalid_argument("krotov_iteration: lambda0 must be positive");
    const State psi_T = propagate_forward(psi0, field, cache);
    const Trajectory chi = propagate_backward(co_state(psi_T, psi_f), field, cache);
    ControlField next = field;
    update_sweep(next, psi0, chi, cache, lambda0);
    return next;
}

OptimizationResult optimize(const State& psi0, const State& psi_f, const OperatorMatrix& H01,
                            const OperatorMatrix& Hc, const KrotovConfig& config) {
    if (!(config.T > 0.0)) throw std::invalid_argument("optimize: horizon T must be set");
    if (!(config.dt > 0.0)) throw std::invalid_argument("optimize: dt must be positive");
    if (!(config.target_fidelity > 0.0) || config.target_fidelity > 1.0)
        throw std::invalid_argument("optimize: target fidelity must lie in (0, 1]");
    const double lambda0 = config.lambda0 > 0.0 ? config.lambda0 : 100.0 / config.T;

    const PropagationCache cache = make_propagation_cache(H01, Hc, config.dt);
    OptimizationResult result;
    result.field = constant_field(config.initial_guess, config.T, config.dt);

    State psi_T = propagate_forward(psi0, result.field, cache);
    double F = fidelity(psi_T, psi_f);
    result.fidelity_history.push_back(F);

    int flat_count = 0;
    while (F < config.target_fidelity && result.iterations_used < config.max_iterations) {
        if (F < 1e-14) break;  // zero co-state, update would stagnate at 0
        const Trajectory chi = propagate_backward(co_state(psi_T, psi_f), result.field, cache);
        psi_T = update_sweep(result.field, psi0, chi, cache, lambda0);
        const double F_new = fidelity(psi_T, psi_f);
        ++result.iterations_used;
        result.fidelity_history.push_back(F_new);
        flat_count = (F_new - F < config.stagnation_tol) ? flat_count + 1 : 0;
        F = F_new;
        if (flat_count >= config.stagnation_window) {
            result.stagnated = true;
            break;
        }
    }
    result.converged = F >= config.target_fidelity;
    return result;
}

}  // namespace spinctrl
