#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spinctrl/operators.hpp"

namespace spinctrl {

// Eigendecomposition of a Hermitian operator, energies ascending and in
// units of J.
struct Spectrum {
    Eigen::VectorXd energies;
    Eigen::MatrixXd eigenvectors;  // orthonormal columns, aligned with energies

    int dim() const { return static_cast<int>(energies.size()); }
};

Spectrum diagonalize(const OperatorMatrix& op);

// E_max - E_0
double energy_spread(const Spectrum& spectrum);

// Spacing (or generalized energy-difference) samples, normalized so
// that their mean is 1.
struct SpacingSample {
    std::vector<double> values;
    int max_gap = 1;  // M: 1 for consecutive spacings
};

SpacingSample level_spacings(const Spectrum& spectrum, double trim_fraction = 0.0);

// All differences E_{n+m} - E_n with 1 <= m <= M, normalized to mean 1.
SpacingSample energy_differences(const Spectrum& spectrum, int M, double trim_fraction = 0.0);

double density_poisson(double s);
double density_wigner_dyson(double s);
double brody_coefficient(double beta);  // b = Gamma((beta+2)/(beta+1))^(beta+1)
double density_brody(double s, double beta);

struct BrodyFit {
    double beta = 0.0;
    double b = 1.0;
    double log_likelihood = 0.0;
    bool degenerate = false;  // set when the sample carries no spread
};

// Maximum-likelihood Brody fit, beta bracketed in [0, 1.5].
BrodyFit brody_fit(const SpacingSample& sample);

// Histogram least-squares estimate of beta, cross-check diagnostic only.
double brody_fit_histogram(const SpacingSample& sample, int bins = 40, double range_max = 4.0);

struct Histogram {
    std::vector<double> edges;      // bins+1 ascending edges
    std::vector<double> densities;  // per-bin density (count / (N * width))
};

Histogram histogram(const SpacingSample& sample, int bins, double lo, double hi);
Histogram histogram(const SpacingSample& sample, int bins);  // range [min, max]

// Integral of |density difference| between two histograms on identical
// edges.
double l1_distance(const Histogram& a, const Histogram& b);

}  // namespace spinctrl
