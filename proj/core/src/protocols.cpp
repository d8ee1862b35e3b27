#include "spinctrl/protocols.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace spinctrl {

namespace {

Mask block_mask(int first_site, int count) {  // sites are 1-based
    Mask m = 0;
    for (int s = first_site; s < first_site + count; ++s) m |= Mask{1} << (s - 1);
    return m;
}

// Box-Muller on mt19937_64 uniforms; std::normal_distribution output is
// implementation-defined and would break cross-toolchain reproducibility.
class GaussianSource {
  public:
    explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

  private:
    double uniform() {
        return static_cast<double>(rng_()) / (static_cast<double>(rng_.max()) + 1.0);
    }

    std::mt19937_64 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace

StatePair build_process_A(int L, int K, const ParityBasis& basis) {
    if (basis.sign() != 1)
        throw std::invalid_argument("build_process_A: positive-parity basis required");
    if (basis.parent().L() != L || basis.parent().K() != K)
        throw std::invalid_argument("build_process_A: basis does not match (L, K)");
    if (L % 2 == 0) throw std::invalid_argument("build_process_A: L must be odd");
    if (2 * K >= L) throw std::invalid_argument("build_process_A: edge blocks overlap (2K >= L)");

    const int c = (L + 1) / 2;
    Mask center;
    if (K % 2 == 1) {
        center = block_mask(c - (K - 1) / 2, K);
    } else {
        center = block_mask(c - K / 2, K / 2) | block_mask(c + 1, K / 2);
    }
    const Mask left = block_mask(1, K);
    const Mask right = mirror_mask(left, L);

    StatePair out;
    out.psi0 = basis.embed(center).cast<std::complex<double>>();
    const Eigen::VectorXd target =
        (basis.embed(left) + basis.embed(right)) / std::sqrt(2.0);
    out.psif = target.cast<std::complex<double>>();
    out.psi0 /= out.psi0.norm();
    out.psif /= out.psif.norm();
    return out;
}

StatePair build_process_B(const ParityBasis& basis, const Spectrum& h0_spectrum,
                          std::uint64_t seed) {
    const int D = basis.dim();
    if (D < 2) throw std::invalid_argument("build_process_B: need dimension >= 2");
    if (h0_spectrum.dim() != D)
        throw std::invalid_argument("build_process_B: spectrum does not match basis");

    StatePair out;
    out.psi0 = h0_spectrum.eigenvectors.col(0).cast<std::complex<double>>();
    // lowest-index eigenvector is used either way
    const double scale = std::max(1.0, h0_spectrum.energies.cwiseAbs().maxCoeff());
    out.ground_state_degenerate =
        h0_spectrum.energies[1] - h0_spectrum.energies[0] < 1e-10 * scale;

    GaussianSource gauss(seed);
    Eigen::VectorXcd coeff(D - 1);
    for (int n = 0; n < D - 1; ++n) {
        const double re = gauss.next();
        const double im = gauss.next();
        coeff[n] = std::complex<double>(re, im);
    }
    coeff /= coeff.norm();

    out.psif = State::Zero(D);
    for (int n = 1; n < D; ++n)
        out.psif += coeff[n - 1] * h0_spectrum.eigenvectors.col(n).cast<std::complex<double>>();
    return out;
}

}  // namespace spinctrl
