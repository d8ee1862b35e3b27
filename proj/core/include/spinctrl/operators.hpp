#pragma once

#include <string>

#include <Eigen/Dense>

#include "spinctrl/basis.hpp"

namespace spinctrl {

// Hermitian operator restricted to a tagged basis. All operators built
// here are real symmetric in the computational and parity bases.
struct OperatorMatrix {
    std::string basis_tag;
    Eigen::MatrixXd data;

    int dim() const { return static_cast<int>(data.rows()); }
};

enum class ControlOperatorKind { LocalEdge, LongRange };

std::string basis_tag(const SectorBasis& basis);
std::string basis_tag(const ParityBasis& basis);

OperatorMatrix build_H0(const ChainParams& params, const SectorBasis& basis);
OperatorMatrix build_H1(const ChainParams& params, const SectorBasis& basis);
OperatorMatrix build_H01(const ChainParams& params, const SectorBasis& basis);
OperatorMatrix build_Hc(const ChainParams& params, const SectorBasis& basis);
OperatorMatrix build_Hc_long_range(const ChainParams& params, const SectorBasis& basis);

OperatorMatrix build_H0(const ChainParams& params, const ParityBasis& basis);
OperatorMatrix build_H1(const ChainParams& params, const ParityBasis& basis);
OperatorMatrix build_H01(const ChainParams& params, const ParityBasis& basis);
OperatorMatrix build_Hc(const ChainParams& params, const ParityBasis& basis);
OperatorMatrix build_Hc_long_range(const ChainParams& params, const ParityBasis& basis);

OperatorMatrix build_control(const ChainParams& params, const ParityBasis& basis,
                             ControlOperatorKind kind);

struct Spectrum;

// V^T M V with V the eigenvector matrix; the representation used for
// connectivity maps of the control operators.
OperatorMatrix matrix_in_eigenbasis(const OperatorMatrix& op, const Spectrum& spectrum);

}  // namespace spinctrl
