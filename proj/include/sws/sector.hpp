#pragma once

#include <optional>
#include <vector>

#include "sws/complex_matrix.hpp"

namespace sws {

/// Zero- plus one-magnon computational basis of an N-site periodic chain.
/// Ordering is a file-format contract: |0> first when present, then |j> for
/// j = 1..N, so one-magnon code paths use identical indices either way.
struct SectorBasis {
    int n = 0;                 // chain length, odd, >= 3
    bool include_zero = false; // whether the zero-magnon slot is present
    int dim = 0;               // n or n+1
    int receiver = 0;          // r = (n+1)/2

    /// slot of site j (1-based); slot of the zero-magnon state is 0.
    int slot(int site) const { return site - 1 + (include_zero ? 1 : 0); }
};

SectorBasis make_basis(int n, bool include_zero);

struct SectorState {
    SectorBasis basis;
    std::vector<cplx> amplitudes;

    double norm2() const {
        double s = 0;
        for (const cplx& z : amplitudes) s += std::norm(z);
        return s;
    }
};

/// Basis state |j>, or the zero-magnon state |0> for site = 0.
SectorState basis_state(const SectorBasis& basis, int site);

enum class Model { XY, XXZ };

struct ModelParams {
    Model model = Model::XY;
    double j = 1.0;      // coupling, nonzero
    double delta = 0.0;  // anisotropy (XXZ only, stored as 0 for XY)
    double h = 0.0;      // field (XXZ only, stored as 0 for XY)
};

ModelParams xy_params(double j = 1.0);
ModelParams xxz_params(double j, double delta, double h);

/// Eigenpairs {E_m, Phi_m} of the one-magnon Hamiltonian in the paper's
/// m = 1..N labeling, plus the zero-magnon energy.
struct SpectralData {
    SectorBasis basis;
    std::vector<double> energies;  // E_m, m = 1..N (not sorted)
    ComplexMatrix modes;           // n x n, column m-1 is Phi_m
    double zero_energy = 0.0;      // energy of |0>; 0 for XY
};

/// Analytic XY spectrum: E_m = -J cos(2 pi m / N),
/// Phi_m = (1/sqrt N) sum_j e^{i 2 pi m j / N} |j>.
SpectralData xy_spectrum(const SectorBasis& basis, const ModelParams& params);

/// Spectrum for either model. The XXZ ring shares the XY Fourier modes; its
/// energies are +J cos(2 pi m / N) shifted by the one-magnon diagonal
/// constant, and the zero-magnon energy is nonzero.
SpectralData sector_spectrum(const SectorBasis& basis, const ModelParams& params);

/// Dense Hermitian matrix of H restricted to the sector, dim x dim.
ComplexMatrix one_magnon_hamiltonian(const SectorBasis& basis, const ModelParams& params);

/// U(tau) = sum_m e^{-i E_m tau} |Phi_m><Phi_m| (hbar = 1), extended by
/// e^{-i E_0 tau} on the zero-magnon slot when the basis includes it.
ComplexMatrix propagator(const SpectralData& spec, double tau);

/// One-magnon diagonal constant of the XXZ ring: J*Delta*(N-4)/4 + h*(2-N)/2.
double xxz_one_magnon_diagonal(int n, const ModelParams& params);
/// Zero-magnon energy of the XXZ ring: J*Delta*N/4 - h*N/2.
double xxz_zero_energy(int n, const ModelParams& params);

}  // namespace sws
