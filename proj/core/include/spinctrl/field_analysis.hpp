#pragma once

#include <vector>

#include "spinctrl/dynamics.hpp"

namespace spinctrl {

// One-sided power distribution of a control field on bins
// omega_k = k * domega, k = k_min .. k_min + power.size() - 1, with
// domega = 2 pi / T and sum(power) * domega = 1.
struct FieldSpectrum {
    double domega = 0.0;
    int k_min = 1;
    std::vector<double> power;

    double omega(int i) const { return (k_min + i) * domega; }
    int bins() const { return static_cast<int>(power.size()); }
};

struct SpectralMetrics {
    double omega_bw = 0.0;
    double sipr = 0.0;
    double siprn = 0.0;
    double beta_cutoff = 1e-2;
};

// Rectangular-window periodogram of the (optionally mean-subtracted)
// samples, density-normalized. With remove_dc the omega = 0 bin is
// excluded from support and normalization.
FieldSpectrum power_spectrum(const ControlField& field, bool remove_dc = true);

// Smallest grid frequency whose cumulative mass reaches 1 - beta_cutoff.
double bandwidth(const FieldSpectrum& spectrum, double beta_cutoff = 1e-2);

double sipr(const FieldSpectrum& spectrum);
double siprn(const FieldSpectrum& spectrum, double omega_bw);

SpectralMetrics analyze(const ControlField& field, double beta_cutoff = 1e-2,
                        bool remove_dc = true);

}  // namespace spinctrl
