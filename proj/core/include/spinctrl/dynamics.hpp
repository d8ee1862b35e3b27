#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "spinctrl/operators.hpp"

namespace spinctrl {

using State = Eigen::VectorXcd;

// Piecewise-constant control field on a uniform grid: sample j is held
// on [j*dt, (j+1)*dt).
struct ControlField {
    double dt = 1e-2;
    std::vector<double> samples;

    int steps() const { return static_cast<int>(samples.size()); }
    double total_time() const { return dt * static_cast<double>(samples.size()); }
};

ControlField constant_field(double value, double total_time, double dt);

// Precomputed data for Strang-split steps under H(t) = H01 + eps(t) Hc.
// The free part is applied through the cached H01 eigenbasis; the
// control half-steps use its diagonal when Hc is diagonal in the
// working basis (true for the edge control) and its own
// eigendecomposition otherwise (needed for the long-range control).
struct PropagationCache {
    int dim = 0;
    double dt = 0.0;
    Eigen::MatrixXd free_vectors;       // V: columns are H01 eigenvectors
    Eigen::VectorXd free_energies;      // E
    Eigen::VectorXcd free_phase;        // exp(-i E dt)
    bool control_diagonal = true;
    Eigen::VectorXd control_diag;       // Hc diagonal (diagonal fast path)
    Eigen::MatrixXd control_vectors;    // W (general path)
    Eigen::VectorXd control_energies;   // w (general path)
    Eigen::MatrixXd control_matrix;     // Hc itself, for update overlaps

    // Hc |psi>
    State apply_control(const State& psi) const;
};

PropagationCache make_propagation_cache(const OperatorMatrix& H01, const OperatorMatrix& Hc,
                                        double dt);

// One Strang step: exp(-i eps Hc dt/2) exp(-i H01 dt) exp(-i eps Hc dt/2).
State step(const State& psi, double eps, const PropagationCache& cache);
// Adjoint of `step`, used for backward evolution.
State step_adjoint(const State& psi, double eps, const PropagationCache& cache);

struct Trajectory {
    std::vector<State> states;  // states[j] = psi(t_j), j = 0..N_t
};

State propagate_forward(const State& psi0, const ControlField& field,
                        const PropagationCache& cache);
Trajectory propagate_forward_stored(const State& psi0, const ControlField& field,
                                    const PropagationCache& cache);
// Backward evolution from t = T to t = 0; states[j] = chi(t_j).
Trajectory propagate_backward(const State& chiT, const ControlField& field,
                              const PropagationCache& cache);

}  // namespace spinctrl
