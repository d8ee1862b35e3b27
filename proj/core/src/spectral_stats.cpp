#include "spinctrl/spectral_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace spinctrl {

namespace {

std::vector<double> normalized_to_mean_one(std::vector<double> values) {
    const double mean =
        std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    if (!(mean > 0.0)) throw std::domain_error("spacing sample has non-positive mean");
    for (double& v : values) v /= mean;
    return values;
}

// Trim a fraction of levels off each end of the sorted spectrum.
Eigen::VectorXd trimmed_energies(const Spectrum& spectrum, double trim_fraction) {
    if (trim_fraction < 0.0 || trim_fraction >= 0.5)
        throw std::invalid_argument("trim_fraction must lie in [0, 0.5)");
    const int n = spectrum.dim();
    const int cut = static_cast<int>(trim_fraction * n);
    return spectrum.energies.segment(cut, n - 2 * cut);
}

double brody_log_likelihood(const std::vector<double>& s, double beta) {
    const double b = brody_coefficient(beta);
    double ll = 0.0;
    for (double v : s) {
        const double sv = std::max(v, 1e-300);
        ll += std::log(beta + 1.0) + std::log(b) + beta * std::log(sv) -
              b * std::pow(sv, beta + 1.0);
    }
    return ll;
}

}  // namespace

Spectrum diagonalize(const OperatorMatrix& op) {
    const Eigen::MatrixXd& H = op.data;
    if (H.rows() != H.cols()) throw std::domain_error("diagonalize: matrix not square");
    const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
    if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::domain_error("diagonalize: matrix not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("diagonalize: eigensolver failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double energy_spread(const Spectrum& spectrum) {
    if (spectrum.dim() == 0) throw std::domain_error("energy_spread: empty spectrum");
    return spectrum.energies[spectrum.dim() - 1] - spectrum.energies[0];
}

SpacingSample level_spacings(const Spectrum& spectrum, double trim_fraction) {
    const Eigen::VectorXd E = trimmed_energies(spectrum, trim_fraction);
    if (E.size() < 3) throw std::domain_error("level_spacings: need at least 3 levels");
    std::vector<double> sp(static_cast<std::size_t>(E.size() - 1));
    for (int i = 0; i + 1 < E.size(); ++i) sp[static_cast<std::size_t>(i)] = E[i + 1] - E[i];
    return {normalized_to_mean_one(std::move(sp)), 1};
}

SpacingSample energy_differences(const Spectrum& spectrum, int M, double trim_fraction) {
    const Eigen::VectorXd E = trimmed_energies(spectrum, trim_fraction);
    const int n = static_cast<int>(E.size());
    if (M < 1 || M >= n) throw std::domain_error("energy_differences: M out of range");
    std::vector<double> d;
    d.reserve(static_cast<std::size_t>(M) * static_cast<std::size_t>(n));
    for (int m = 1; m <= M; ++m)
        for (int i = 0; i + m < n; ++i) d.push_back(E[i + m] - E[i]);
    return {normalized_to_mean_one(std::move(d)), M};
}

double density_poisson(double s) { return std::exp(-s); }

double density_wigner_dyson(double s) {
    constexpr double pi = 3.14159265358979323846;
    return 0.5 * pi * s * std::exp(-0.25 * pi * s * s);
}

double brody_coefficient(double beta) {
    return std::exp((beta + 1.0) * std::lgamma((beta + 2.0) / (beta + 1.0)));
}

double density_brody(double s, double beta) {
    const double b = brody_coefficient(beta);
    return (beta + 1.0) * b * std::pow(s, beta) * std::exp(-b * std::pow(s, beta + 1.0));
}

BrodyFit brody_fit(const SpacingSample& sample) {
    if (sample.values.size() < 50) throw std::domain_error("brody_fit: need at least 50 samples");
    const auto [mn, mx] = std::minmax_element(sample.values.begin(), sample.values.end());
    BrodyFit fit;
    fit.degenerate = (*mx - *mn < 1e-12);
    // golden-section maximization on [0, 1.5]
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = 0.0, hi = 1.5;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = brody_log_likelihood(sample.values, x1);
    double f2 = brody_log_likelihood(sample.values, x2);
    while (hi - lo > 1e-4) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = brody_log_likelihood(sample.values, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = brody_log_likelihood(sample.values, x1);
        }
    }
    fit.beta = 0.5 * (lo + hi);
    // endpoints can beat the interior bracket when the optimum sits at 0
    const double mid_ll = brody_log_likelihood(sample.values, fit.beta);
    const double lo_ll = brody_log_likelihood(sample.values, 0.0);
    if (lo_ll >= mid_ll) {
        fit.beta = 0.0;
        fit.log_likelihood = lo_ll;
    } else {
        fit.log_likelihood = mid_ll;
    }
    fit.b = brody_coefficient(fit.beta);
    return fit;
}

double brody_fit_histogram(const SpacingSample& sample, int bins, double range_max) {
    if (sample.values.size() < 50)
        throw std::domain_error("brody_fit_histogram: need at least 50 samples");
    Histogram h = histogram(sample, bins, 0.0, range_max);
    auto residual = [&](double beta) {
        double r = 0.0;
        for (int i = 0; i < bins; ++i) {
            const double mid = 0.5 * (h.edges[static_cast<std::size_t>(i)] +
                                      h.edges[static_cast<std::size_t>(i) + 1]);
            const double d = h.densities[static_cast<std::size_t>(i)] - density_brody(mid, beta);
            r += d * d;
        }
        return r;
    };
    double best_beta = 0.0, best_r = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 150; ++i) {  // coarse scan is plenty for a diagnostic
        const double beta = 0.01 * i;
        const double r = residual(beta);
        if (r < best_r) {
            best_r = r;
            best_beta = beta;
        }
    }
    return best_beta;
}

Histogram histogram(const SpacingSample& sample, int bins, double lo, double hi) {
    if (bins < 1 || !(hi > lo)) throw std::invalid_argument("histogram: bad bin spec");
    Histogram h;
    h.edges.resize(static_cast<std::size_t>(bins) + 1);
    h.densities.assign(static_cast<std::size_t>(bins), 0.0);
    const double width = (hi - lo) / bins;
    for (int i = 0; i <= bins; ++i) h.edges[static_cast<std::size_t>(i)] = lo + i * width;
    for (double v : sample.values) {
        if (v < lo || v > hi) continue;
        int bin = static_cast<int>((v - lo) / width);
        if (bin == bins) bin = bins - 1;  // right edge inclusive
        h.densities[static_cast<std::size_t>(bin)] += 1.0;
    }
    const double norm = static_cast<double>(sample.values.size()) * width;
    for (double& d : h.densities) d /= norm;
    return h;
}

Histogram histogram(const SpacingSample& sample, int bins) {
    const auto [mn, mx] = std::minmax_element(sample.values.begin(), sample.values.end());
    double lo = *mn, hi = *mx;
    if (!(hi > lo)) hi = lo + 1.0;
    return histogram(sample, bins, lo, hi);
}

double l1_distance(const Histogram& a, const Histogram& b) {
    if (a.edges != b.edges) throw std::invalid_argument("l1_distance: histogram edges differ");
    double d = 0.0;
    for (std::size_t i = 0; i < a.densities.size(); ++i)
        d += std::abs(a.densities[i] - b.densities[i]) * (a.edges[i + 1] - a.edges[i]);
    return d;
}

}  // namespace spinctrl
