#pragma once

#include <vector>

#include "sws/complex_matrix.hpp"
#include "sws/sector.hpp"

namespace sws {

/// Full 2^N state vector. Bit j-1 of the basis index set means site j is
/// spin-up (little-endian site order); |j> is index 2^(j-1), the all-down
/// state |0> is index 0. Every cross-module comparison relies on this.
struct FullState {
    int n = 0;
    std::vector<cplx> amplitudes;  // length 2^n
};

struct ProcessorLayout {
    std::vector<int> a_sites;
    std::vector<int> b_sites;  // same length as a_sites, disjoint from it
};

void validate_layout(const ProcessorLayout& layout, int n);

/// Desk-scale cap for the brute-force path.
inline constexpr int kFullSpaceMaxSites = 12;

/// Full XY or XXZ Hamiltonian from spin-1/2 operators; commutes with the
/// total magnon number.
ComplexMatrix full_hamiltonian(int n, const ModelParams& params, bool periodic);

/// The register permutation E_AB: swaps the A and B qubits bitwise.
/// A 0/1 permutation matrix with E^2 = I.
ComplexMatrix permutation_e_ab(const ProcessorLayout& layout, int n);

enum class LocalGate {
    Identity,        // P_AB = E_AB, plain state transfer
    XXXFlip,         // sigma_x sigma_x sigma_x on three B qubits
    RemoteExchange,  // exp(-i pi sigma_x sigma_x / 4) on two B qubits
};

/// Unitary acting only on the B register; P_AB = V_B * E_AB by composition.
ComplexMatrix local_gate_v_b(LocalGate gate, const ProcessorLayout& layout, int n);

/// e^{-i H tau} |state> via full Hermitian eigendecomposition.
FullState full_evolve(const ComplexMatrix& h, const FullState& state, double tau);

/// Embed each sector basis state, evolve in the full space, project back,
/// and compare against the sector propagator; returns the worst deviation
/// over initial states, times and components (zero-magnon phase included).
double sector_equivalence_check(int n, const ModelParams& params,
                                const std::vector<double>& taus);

}  // namespace sws
