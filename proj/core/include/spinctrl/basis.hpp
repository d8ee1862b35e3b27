#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace spinctrl {

// Spin-1/2 chain parameters. J sets the energy unit; Gamma is the
// dimensionless NNN/NN exchange ratio (the chaos knob).
struct ChainParams {
    int L = 15;
    double J = 1.0;
    double Gamma = 0.0;
    double alpha_z = 0.5;

    void validate() const;
};

// Basis states are bitmasks: bit i-1 set <=> site i (1-based, left to
// right) carries an up spin. Site 1 is the least significant bit.
using Mask = std::uint32_t;

Mask mirror_mask(Mask state, int L);

// Computational basis of the fixed-magnetization sector with K up spins.
class SectorBasis {
  public:
    SectorBasis(int L, int K, std::vector<Mask> states);

    int L() const { return L_; }
    int K() const { return K_; }
    int dim() const { return static_cast<int>(states_.size()); }
    const std::vector<Mask>& states() const { return states_; }
    Mask state(int i) const { return states_[static_cast<std::size_t>(i)]; }
    int index_of(Mask m) const;  // -1 if not in the sector

  private:
    int L_;
    int K_;
    std::vector<Mask> states_;
    std::unordered_map<Mask, int> index_;
};

SectorBasis enumerate_sector(int L, int K);

// Parity-adapted sub-basis: orthonormal eigenvectors of the mirror
// permutation with eigenvalue `sign`. Pair vectors are
// (|s> + sign|Pi s>)/sqrt(2) with s the smaller mask of the pair;
// palindromes appear unchanged and only in the + basis.
class ParityBasis {
  public:
    struct Vector {
        int a;  // parent index of the canonical representative
        int b;  // mirror partner index; b == a for palindromes
    };

    ParityBasis(SectorBasis parent, int sign, std::vector<Vector> vectors);

    const SectorBasis& parent() const { return parent_; }
    int sign() const { return sign_; }
    int dim() const { return static_cast<int>(vectors_.size()); }
    const std::vector<Vector>& vectors() const { return vectors_; }

    // D_K x dim matrix whose columns are the parity vectors in the
    // parent sector basis.
    Eigen::MatrixXd projector() const;

    // Coordinates of a single computational state in this basis.
    // States without support here (e.g. a palindrome in the - basis)
    // map to the zero vector.
    Eigen::VectorXd embed(Mask state) const;

  private:
    SectorBasis parent_;
    int sign_;
    std::vector<Vector> vectors_;
};

ParityBasis parity_adapt(const SectorBasis& basis, int sign);

}  // namespace spinctrl
