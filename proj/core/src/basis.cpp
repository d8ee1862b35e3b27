#include "spinctrl/basis.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace spinctrl {

void ChainParams::validate() const {
    if (L < 2) throw std::invalid_argument("ChainParams: L must be >= 2");
    if (!(J > 0.0)) throw std::invalid_argument("ChainParams: J must be positive");
    if (!std::isfinite(Gamma) || Gamma < 0.0)
        throw std::invalid_argument("ChainParams: Gamma must be finite and >= 0");
    if (!std::isfinite(alpha_z))
        throw std::invalid_argument("ChainParams: alpha_z must be finite");
}

Mask mirror_mask(Mask state, int L) {
    Mask r = 0;
    for (int i = 0; i < L; ++i)
        if (state >> i & 1u) r |= 1u << (L - 1 - i);
    return r;
}

SectorBasis::SectorBasis(int L, int K, std::vector<Mask> states)
    : L_(L), K_(K), states_(std::move(states)) {
    index_.reserve(states_.size());
    for (int i = 0; i < dim(); ++i) index_.emplace(states_[static_cast<std::size_t>(i)], i);
}

int SectorBasis::index_of(Mask m) const {
    auto it = index_.find(m);
    return it == index_.end() ? -1 : it->second;
}

SectorBasis enumerate_sector(int L, int K) {
    if (L < 1 || L > 30) throw std::invalid_argument("enumerate_sector: bad L");
    if (K < 0 || K > L) throw std::invalid_argument("enumerate_sector: K out of range");
    std::vector<Mask> states;
    const Mask top = Mask{1} << L;
    for (Mask m = 0; m < top; ++m)
        if (std::popcount(m) == K) states.push_back(m);
    return SectorBasis(L, K, std::move(states));
}

ParityBasis::ParityBasis(SectorBasis parent, int sign, std::vector<Vector> vectors)
    : parent_(std::move(parent)), sign_(sign), vectors_(std::move(vectors)) {}

Eigen::MatrixXd ParityBasis::projector() const {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(parent_.dim(), dim());
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int k = 0; k < dim(); ++k) {
        const Vector& v = vectors_[static_cast<std::size_t>(k)];
        if (v.a == v.b) {
            B(v.a, k) = 1.0;
        } else {
            B(v.a, k) = inv_sqrt2;
            B(v.b, k) = sign_ * inv_sqrt2;
        }
    }
    return B;
}

Eigen::VectorXd ParityBasis::embed(Mask state) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(dim());
    const int idx = parent_.index_of(state);
    if (idx < 0) throw std::invalid_argument("ParityBasis::embed: state not in parent sector");
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int k = 0; k < dim(); ++k) {
        const Vector& v = vectors_[static_cast<std::size_t>(k)];
        if (v.a == v.b) {
            if (v.a == idx) out[k] = 1.0;
        } else if (v.a == idx) {
            out[k] = inv_sqrt2;
        } else if (v.b == idx) {
            out[k] = sign_ * inv_sqrt2;
        }
    }
    return out;
}

ParityBasis parity_adapt(const SectorBasis& basis, int sign) {
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("parity_adapt: sign must be +1 or -1");
    std::vector<ParityBasis::Vector> vectors;
    for (int i = 0; i < basis.dim(); ++i) {
        const Mask s = basis.state(i);
        const Mask p = mirror_mask(s, basis.L());
        if (s == p) {
            if (sign == 1) vectors.push_back({i, i});
        } else if (s < p) {
            vectors.push_back({i, basis.index_of(p)});
        }
    }
    return ParityBasis(basis, sign, std::move(vectors));
}

}  // namespace spinctrl
