#include "spinctrl/field_analysis.hpp"

#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include <fftw3.h>

namespace spinctrl {

namespace {

constexpr double pi = 3.14159265358979323846;

// FFTW planning is not thread-safe; execution of independent plans is.
std::mutex fftw_plan_mutex;

std::vector<std::complex<double>> real_fft(const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    std::vector<double> in(x);
    std::vector<std::complex<double>> out(static_cast<std::size_t>(n / 2 + 1));
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        plan = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                    FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        fftw_destroy_plan(plan);
    }
    return out;
}

}  // namespace

FieldSpectrum power_spectrum(const ControlField& field, bool remove_dc) {
    const int n = field.steps();
    if (n < 16) throw std::domain_error("power_spectrum: need at least 16 samples");
    std::vector<double> x = field.samples;
    double scale = 0.0;
    for (double v : x) scale = std::max(scale, std::abs(v));
    if (remove_dc) {
        const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
        for (double& v : x) v -= mean;
    }
    double max_abs = 0.0;
    for (double v : x) max_abs = std::max(max_abs, std::abs(v));
    // constant (or all-zero) fields have no spectral content; the comparison is
    // relative so that roundoff in the subtracted mean does not count as signal
    if (max_abs <= scale * 1e-12) throw std::domain_error("power_spectrum: field has no spectral content");

    const auto X = real_fft(x);
    FieldSpectrum spec;
    spec.domega = 2.0 * pi / field.total_time();
    spec.k_min = remove_dc ? 1 : 0;
    spec.power.reserve(X.size() - static_cast<std::size_t>(spec.k_min));
    for (std::size_t k = static_cast<std::size_t>(spec.k_min); k < X.size(); ++k)
        spec.power.push_back(std::norm(X[k]));
    double total = std::accumulate(spec.power.begin(), spec.power.end(), 0.0) * spec.domega;
    for (double& p : spec.power) p /= total;
    return spec;
}

double bandwidth(const FieldSpectrum& spectrum, double beta_cutoff) {
    if (!(beta_cutoff > 0.0) || beta_cutoff >= 1.0)
        throw std::invalid_argument("bandwidth: beta_cutoff must lie in (0, 1)");
    const double target = 1.0 - beta_cutoff;
    double cum = 0.0;
    for (int i = 0; i < spectrum.bins(); ++i) {
        cum += spectrum.power[static_cast<std::size_t>(i)] * spectrum.domega;
        if (cum >= target) return spectrum.omega(i);
    }
    return spectrum.omega(spectrum.bins() - 1);  // roundoff left cum just below target
}

double sipr(const FieldSpectrum& spectrum) {
    double s = 0.0;
    for (double p : spectrum.power) s += p * p;
    return 1.0 / (s * spectrum.domega);
}

double siprn(const FieldSpectrum& spectrum, double omega_bw) {
    return sipr(spectrum) / omega_bw;
}

SpectralMetrics analyze(const ControlField& field, double beta_cutoff, bool remove_dc) {
    const FieldSpectrum spec = power_spectrum(field, remove_dc);
    SpectralMetrics m;
    m.beta_cutoff = beta_cutoff;
    m.omega_bw = bandwidth(spec, beta_cutoff);
    m.sipr = sipr(spec);
    m.siprn = m.sipr / m.omega_bw;
    return m;
}

}  // namespace spinctrl
