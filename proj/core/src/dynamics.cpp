#include "spinctrl/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "spinctrl/spectral_stats.hpp"

namespace spinctrl {

namespace {

using cd = std::complex<double>;

// M v for real M and complex v via two real matvecs
State apply_real(const Eigen::MatrixXd& M, const State& v) {
    State out(M.rows());
    out.real() = M * v.real();
    out.imag() = M * v.imag();
    return out;
}

State phase_multiply(const Eigen::VectorXd& energies, double factor, const State& v) {
    State out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = factor * energies[i];
        out[i] = cd(std::cos(a), -std::sin(a)) * v[i];
    }
    return out;
}

State control_half_step(const State& psi, double eps, double half_dt,
                        const PropagationCache& cache) {
    if (cache.control_diagonal) return phase_multiply(cache.control_diag, eps * half_dt, psi);
    State y = apply_real(cache.control_vectors.transpose(), psi);
    y = phase_multiply(cache.control_energies, eps * half_dt, y);
    return apply_real(cache.control_vectors, y);
}

void check_dim(const State& psi, const PropagationCache& cache) {
    if (psi.size() != cache.dim)
        throw std::invalid_argument("propagation: state dimension does not match cache");
}

}  // namespace

ControlField constant_field(double value, double total_time, double dt) {
    if (!(dt > 0.0) || !(total_time > 0.0))
        throw std::invalid_argument("constant_field: dt and total_time must be positive");
    const int n = static_cast<int>(std::lround(total_time / dt));
    return {dt, std::vector<double>(static_cast<std::size_t>(n), value)};
}

State PropagationCache::apply_control(const State& psi) const {
    if (control_diagonal) {
        State out(psi.size());
        for (Eigen::Index i = 0; i < psi.size(); ++i) out[i] = control_diag[i] * psi[i];
        return out;
    }
    return apply_real(control_matrix, psi);
}

PropagationCache make_propagation_cache(const OperatorMatrix& H01, const OperatorMatrix& Hc,
                                        double dt) {
    if (H01.dim() != Hc.dim())
        throw std::invalid_argument("make_propagation_cache: operator dimensions differ");
    if (!(dt > 0.0)) throw std::invalid_argument("make_propagation_cache: dt must be positive");
    PropagationCache cache;
    cache.dim = H01.dim();
    cache.dt = dt;
    Spectrum free = diagonalize(H01);
    cache.free_vectors = std::move(free.eigenvectors);
    cache.free_energies = std::move(free.energies);
    cache.free_phase.resize(cache.dim);
    for (int i = 0; i < cache.dim; ++i) {
        const double a = cache.free_energies[i] * dt;
        cache.free_phase[i] = cd(std::cos(a), -std::sin(a));
    }
    cache.control_matrix = Hc.data;
    cache.control_diag = Hc.data.diagonal();
    Eigen::MatrixXd off = Hc.data;
    off.diagonal().setZero();
    cache.control_diagonal = off.cwiseAbs().maxCoeff() < 1e-12;
    if (!cache.control_diagonal) {
        Spectrum ctrl = diagonalize(Hc);
        cache.control_vectors = std::move(ctrl.eigenvectors);
        cache.control_energies = std::move(ctrl.energies);
    }
    return cache;
}

State step(const State& psi, double eps, const PropagationCache& cache) {
    check_dim(psi, cache);
    State y = control_half_step(psi, eps, 0.5 * cache.dt, cache);
    y = apply_real(cache.free_vectors.transpose(), y);
    y = y.cwiseProduct(cache.free_phase);
    y = apply_real(cache.free_vectors, y);
    return control_half_step(y, eps, 0.5 * cache.dt, cache);
}

State step_adjoint(const State& psi, double eps, const PropagationCache& cache) {
    check_dim(psi, cache);
    State y = control_half_step(psi, eps, -0.5 * cache.dt, cache);
    y = apply_real(cache.free_vectors.transpose(), y);
    y = y.cwiseProduct(cache.free_phase.conjugate());
    y = apply_real(cache.free_vectors, y);
    return control_half_step(y, eps, -0.5 * cache.dt, cache);
}

State propagate_forward(const State& psi0, const ControlField& field,
                        const PropagationCache& cache) {
    check_dim(psi0, cache);
    State psi = psi0;
    for (double eps : field.samples) psi = step(psi, eps, cache);
    return psi;
}

Trajectory propagate_forward_stored(const State& psi0, const ControlField& field,
                                    const PropagationCache& cache) {
    check_dim(psi0, cache);
    Trajectory traj;
    traj.states.reserve(field.samples.size() + 1);
    traj.states.push_back(psi0);
    for (double eps : field.samples) traj.states.push_back(step(traj.states.back(), eps, cache));
    return traj;
}

Trajectory propagate_backward(const State& chiT, const ControlField& field,
                              const PropagationCache& cache) {
    check_dim(chiT, cache);
    Trajectory traj;
    traj.states.resize(field.samples.size() + 1);
    traj.states.back() = chiT;
    for (int j = field.steps() - 1; j >= 0; --j)
        traj.states[static_cast<std::size_t>(j)] =
            step_adjoint(traj.states[static_cast<std::size_t>(j) + 1],
                         field.samples[static_cast<std::size_t>(j)], cache);
    return traj;
}

}  // namespace spinctrl
