#include "sws/sector.hpp"

#include <cmath>
#include <string>

namespace sws {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

SectorBasis make_basis(int n, bool include_zero) {
    if (n < 3) throw validation_error("make_basis: N must be >= 3, got " + std::to_string(n));
    if (n % 2 == 0)
        throw validation_error("make_basis: N must be odd (receiver site r = (N+1)/2), got " +
                               std::to_string(n));
    SectorBasis b;
    b.n = n;
    b.include_zero = include_zero;
    b.dim = n + (include_zero ? 1 : 0);
    b.receiver = (n + 1) / 2;
    return b;
}

SectorState basis_state(const SectorBasis& basis, int site) {
    if (site == 0 && !basis.include_zero)
        throw validation_error("basis_state: zero-magnon state requested on a basis without it");
    if (site < 0 || site > basis.n)
        throw validation_error("basis_state: site " + std::to_string(site) + " out of [1, " +
                               std::to_string(basis.n) + "]");
    SectorState st;
    st.basis = basis;
    st.amplitudes.assign(basis.dim, cplx(0.0));
    st.amplitudes[site == 0 ? 0 : basis.slot(site)] = 1.0;
    return st;
}

ModelParams xy_params(double j) {
    if (j == 0.0) throw validation_error("xy_params: J must be nonzero");
    return ModelParams{Model::XY, j, 0.0, 0.0};
}

ModelParams xxz_params(double j, double delta, double h) {
    if (j == 0.0) throw validation_error("xxz_params: J must be nonzero");
    return ModelParams{Model::XXZ, j, delta, h};
}

double xxz_one_magnon_diagonal(int n, const ModelParams& p) {
    return p.j * p.delta * (n - 4) / 4.0 + p.h * (2.0 - n) / 2.0;
}

double xxz_zero_energy(int n, const ModelParams& p) {
    return p.j * p.delta * n / 4.0 - p.h * n / 2.0;
}

SpectralData xy_spectrum(const SectorBasis& basis, const ModelParams& params) {
    if (params.model != Model::XY) throw validation_error("xy_spectrum: params.model must be XY");
    return sector_spectrum(basis, params);
}

SpectralData sector_spectrum(const SectorBasis& basis, const ModelParams& params) {
    const int n = basis.n;
    SpectralData s;
    s.basis = basis;
    s.energies.resize(n);
    s.modes = ComplexMatrix(n, n);
    const double shift =
        params.model == Model::XXZ ? xxz_one_magnon_diagonal(n, params) : 0.0;
    // XY hopping is -J/2, XXZ hopping is +J/2; the circulant eigenvalue is
    // (2 * hopping) * cos(2 pi m / N).
    const double hop = params.model == Model::XY ? -params.j : params.j;
    for (int m = 1; m <= n; ++m) {
        s.energies[m - 1] = hop * std::cos(2 * kPi * m / n) + shift;
        for (int j = 1; j <= n; ++j)
            s.modes(j - 1, m - 1) = std::polar(1.0 / std::sqrt(double(n)), 2 * kPi * m * j / n);
    }
    s.zero_energy = params.model == Model::XXZ ? xxz_zero_energy(n, params) : 0.0;
    return s;
}

ComplexMatrix one_magnon_hamiltonian(const SectorBasis& basis, const ModelParams& params) {
    const int n = basis.n;
    ComplexMatrix h(basis.dim, basis.dim);
    const double hop = (params.model == Model::XY ? -params.j : params.j) / 2.0;
    const int z = basis.include_zero ? 1 : 0;
    for (int j = 1; j <= n; ++j) {
        int k = j % n + 1;  // ring neighbour, includes the (N,1) bond
        h(z + j - 1, z + k - 1) = hop;
        h(z + k - 1, z + j - 1) = hop;
    }
    if (params.model == Model::XXZ) {
        double d1 = xxz_one_magnon_diagonal(n, params);
        for (int j = 0; j < n; ++j) h(z + j, z + j) = d1;
        if (basis.include_zero) h(0, 0) = xxz_zero_energy(n, params);
    }
    return h;
}

ComplexMatrix propagator(const SpectralData& spec, double tau) {
    const int n = spec.basis.n;
    const int z = spec.basis.include_zero ? 1 : 0;
    ComplexMatrix u(spec.basis.dim, spec.basis.dim);
    for (int m = 0; m < n; ++m) {
        cplx f = std::polar(1.0, -spec.energies[m] * tau);
        for (int a = 0; a < n; ++a) {
            cplx fa = f * spec.modes(a, m);
            for (int b = 0; b < n; ++b) u(z + a, z + b) += fa * std::conj(spec.modes(b, m));
        }
    }
    if (spec.basis.include_zero) u(0, 0) = std::polar(1.0, -spec.zero_energy * tau);
    return u;
}

}  // namespace sws
