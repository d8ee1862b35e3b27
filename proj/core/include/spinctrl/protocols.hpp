#pragma once

#include <cstdint>
#include <utility>

#include "spinctrl/dynamics.hpp"
#include "spinctrl/spectral_stats.hpp"

namespace spinctrl {

enum class ProcessKind { A, B };

struct StatePair {
    State psi0;
    State psif;
    bool ground_state_degenerate = false;  // process B only
};

// Process A: K excitations centered on the chain, driven into the
// symmetric superposition of the two edge blocks. Both states live in
// the positive-parity sector; L must be odd and 2K < L.
StatePair build_process_A(int L, int K, const ParityBasis& basis);

// Process B: ground state of H0 driven into a seeded random complex
// combination of the excited H0 eigenvectors (ground state excluded).
// h0_spectrum must be the diagonalization of H0 (Gamma = 0) in `basis`.
StatePair build_process_B(const ParityBasis& basis, const Spectrum& h0_spectrum,
                          std::uint64_t seed);

}  // namespace spinctrl
