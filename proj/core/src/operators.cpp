#include "spinctrl/operators.hpp"

#include <stdexcept>

#include "spinctrl/spectral_stats.hpp"

namespace spinctrl {

namespace {

double z_at(Mask s, int site) {  // site is 0-based here
    return (s >> site & 1u) ? 1.0 : -1.0;
}

// XY exchange between sites i and j plus optional ZZ, common kernel for
// H0 (d=1), H1 (d=2) and the all-to-all control.
void add_bond(Eigen::MatrixXd& H, const SectorBasis& basis, int row, Mask s, int i, int j,
              double hop, double zz) {
    if (zz != 0.0) H(row, row) += zz * z_at(s, i) * z_at(s, j);
    if ((s >> i & 1u) != (s >> j & 1u)) {
        const Mask t = s ^ ((Mask{1} << i) | (Mask{1} << j));
        H(row, basis.index_of(t)) += hop;
    }
}

OperatorMatrix build_range_term(const ChainParams& params, const SectorBasis& basis, int d) {
    params.validate();
    const int L = basis.L();
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(basis.dim(), basis.dim());
    const double hop = params.J;
    const double zz = 0.5 * params.J * params.alpha_z;
    for (int row = 0; row < basis.dim(); ++row) {
        const Mask s = basis.state(row);
        for (int i = 0; i + d < L; ++i) add_bond(H, basis, row, s, i, i + d, hop, zz);
    }
    return {basis_tag(basis), std::move(H)};
}

OperatorMatrix project(const ParityBasis& basis, OperatorMatrix sector_op) {
    Eigen::MatrixXd B = basis.projector();
    Eigen::MatrixXd H = B.transpose() * sector_op.data * B;
    // symmetrize away the last-bit roundoff of the projection
    H = 0.5 * (H + H.transpose()).eval();
    return {basis_tag(basis), std::move(H)};
}

}  // namespace

std::string basis_tag(const SectorBasis& basis) {
    return "sector:L=" + std::to_string(basis.L()) + ",K=" + std::to_string(basis.K());
}

std::string basis_tag(const ParityBasis& basis) {
    return basis_tag(basis.parent()) + (basis.sign() > 0 ? ",+" : ",-");
}

OperatorMatrix build_H0(const ChainParams& params, const SectorBasis& basis) {
    return build_range_term(params, basis, 1);
}

OperatorMatrix build_H1(const ChainParams& params, const SectorBasis& basis) {
    return build_range_term(params, basis, 2);
}

OperatorMatrix build_H01(const ChainParams& params, const SectorBasis& basis) {
    OperatorMatrix h = build_H0(params, basis);
    h.data += params.Gamma * build_H1(params, basis).data;
    return h;
}

OperatorMatrix build_Hc(const ChainParams& params, const SectorBasis& basis) {
    params.validate();
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(basis.dim(), basis.dim());
    for (int row = 0; row < basis.dim(); ++row) {
        const Mask s = basis.state(row);
        H(row, row) = 0.5 * params.J * (z_at(s, 0) + z_at(s, basis.L() - 1));
    }
    return {basis_tag(basis), std::move(H)};
}

OperatorMatrix build_Hc_long_range(const ChainParams& params, const SectorBasis& basis) {
    params.validate();
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(basis.dim(), basis.dim());
    for (int row = 0; row < basis.dim(); ++row) {
        const Mask s = basis.state(row);
        for (int i = 0; i < basis.L(); ++i)
            for (int j = i + 1; j < basis.L(); ++j)
                // 1/distance decay: keeps the all-pair connectivity but avoids
                // the complete-graph degeneracy a uniform amplitude would have
                add_bond(H, basis, row, s, i, j, params.J / (j - i), 0.0);
    }
    return {basis_tag(basis), std::move(H)};
}

OperatorMatrix build_H0(const ChainParams& p, const ParityBasis& b) {
    return project(b, build_H0(p, b.parent()));
}
OperatorMatrix build_H1(const ChainParams& p, const ParityBasis& b) {
    return project(b, build_H1(p, b.parent()));
}
OperatorMatrix build_H01(const ChainParams& p, const ParityBasis& b) {
    return project(b, build_H01(p, b.parent()));
}
OperatorMatrix build_Hc(const ChainParams& p, const ParityBasis& b) {
    return project(b, build_Hc(p, b.parent()));
}
OperatorMatrix build_Hc_long_range(const ChainParams& p, const ParityBasis& b) {
    return project(b, build_Hc_long_range(p, b.parent()));
}

OperatorMatrix build_control(const ChainParams& params, const ParityBasis& basis,
                             ControlOperatorKind kind) {
    return kind == ControlOperatorKind::LocalEdge ? build_Hc(params, basis)
                                                  : build_Hc_long_range(params, basis);
}

OperatorMatrix matrix_in_eigenbasis(const OperatorMatrix& op, const Spectrum& spectrum) {
    if (spectrum.eigenvectors.rows() != op.data.rows())
        throw std::invalid_argument("matrix_in_eigenbasis: dimension mismatch");
    const Eigen::MatrixXd& V = spectrum.eigenvectors;
    return {op.basis_tag + ",eigenbasis", V.transpose() * op.data * V};
}

}  // namespace spinctrl
