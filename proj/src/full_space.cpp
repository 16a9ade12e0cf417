#include "sws/full_space.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sws/hermitian_eig.hpp"

namespace sws {

namespace {

void check_cap(int n) {
    if (n < 2 || n > kFullSpaceMaxSites)
        throw validation_error("full space path supports 2 <= N <= " +
                               std::to_string(kFullSpaceMaxSites) + ", got " + std::to_string(n));
}

inline int bit(size_t x, int j) { return int((x >> (j - 1)) & 1u); }  // site j, 1-based

}  // namespace

void validate_layout(const ProcessorLayout& layout, int n) {
    if (layout.a_sites.empty() || layout.a_sites.size() != layout.b_sites.size())
        throw validation_error("processor layout: A and B need equal, nonzero size");
    std::set<int> seen;
    for (const auto* v : {&layout.a_sites, &layout.b_sites})
        for (int s : *v) {
            if (s < 1 || s > n) throw validation_error("processor layout: site out of range");
            if (!seen.insert(s).second)
                throw validation_error("processor layout: registers overlap at site " +
                                       std::to_string(s));
        }
}

ComplexMatrix full_hamiltonian(int n, const ModelParams& params, bool periodic) {
    check_cap(n);
    const size_t dim = size_t(1) << n;
    ComplexMatrix h(static_cast<int>(dim), static_cast<int>(dim));
    const int nbonds = periodic ? n : n - 1;
    const double hop = (params.model == Model::XY ? -params.j : params.j) / 2.0;
    for (size_t x = 0; x < dim; ++x) {
        double diag = 0;
        for (int b = 1; b <= nbonds; ++b) {
            int j = b, k = b % n + 1;
            int bj = bit(x, j), bk = bit(x, k);
            if (bj != bk) {  // flip-flop term moves the magnon
                size_t y = x ^ (size_t(1) << (j - 1)) ^ (size_t(1) << (k - 1));
                h(int(y), int(x)) += hop;
            }
            if (params.model == Model::XXZ)
                diag += params.j * params.delta * (bj - 0.5) * (bk - 0.5);
        }
        if (params.model == Model::XXZ)
            for (int j = 1; j <= n; ++j) diag += params.h * (bit(x, j) - 0.5);
        if (diag != 0.0) h(int(x), int(x)) = diag;
    }
    return h;
}

ComplexMatrix permutation_e_ab(const ProcessorLayout& layout, int n) {
    check_cap(n);
    validate_layout(layout, n);
    const size_t dim = size_t(1) << n;
    ComplexMatrix e(static_cast<int>(dim), static_cast<int>(dim));
    for (size_t x = 0; x < dim; ++x) {
        size_t y = x;
        for (size_t k = 0; k < layout.a_sites.size(); ++k) {
            int a = layout.a_sites[k], b = layout.b_sites[k];
            int ba = bit(x, a), bb = bit(x, b);
            if (ba != bb) y ^= (size_t(1) << (a - 1)) | (size_t(1) << (b - 1));
        }
        e(int(y), int(x)) = 1.0;
    }
    return e;
}

ComplexMatrix local_gate_v_b(LocalGate gate, const ProcessorLayout& layout, int n) {
    check_cap(n);
    validate_layout(layout, n);
    const int k = int(layout.b_sites.size());
    if (gate == LocalGate::XXXFlip && k != 3)
        throw validation_error("XXX flip acts on exactly 3 B qubits");
    if (gate == LocalGate::RemoteExchange && k != 2)
        throw validation_error("remote exchange acts on exactly 2 B qubits");

    const size_t gdim = size_t(1) << k;
    ComplexMatrix g(static_cast<int>(gdim), static_cast<int>(gdim));
    switch (gate) {
        case LocalGate::Identity:
            g = ComplexMatrix::identity(int(gdim));
            break;
        case LocalGate::XXXFlip:  // X x X x X flips every B bit
            for (size_t x = 0; x < gdim; ++x) g(int(gdim - 1 - x), int(x)) = 1.0;
            break;
        case LocalGate::RemoteExchange: {
            // exp(-i pi XX / 4) = (I - i XX) / sqrt 2; XX flips both bits
            const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
            for (size_t x = 0; x < gdim; ++x) {
                g(int(x), int(x)) = inv_sqrt2;
                g(int(gdim - 1 - x), int(x)) = cplx(0.0, -inv_sqrt2);
            }
            break;
        }
    }

    const size_t dim = size_t(1) << n;
    ComplexMatrix v(static_cast<int>(dim), static_cast<int>(dim));
    for (size_t x = 0; x < dim; ++x) {
        size_t sub = 0;
        for (int i = 0; i < k; ++i) sub |= size_t(bit(x, layout.b_sites[i])) << i;
        size_t base = x;
        for (int i = 0; i < k; ++i) base &= ~(size_t(1) << (layout.b_sites[i] - 1));
        for (size_t sub2 = 0; sub2 < gdim; ++sub2) {
            cplx amp = g(int(sub2), int(sub));
            if (amp == cplx(0.0)) continue;
            size_t y = base;
            for (int i = 0; i < k; ++i)
                if ((sub2 >> i) & 1u) y |= size_t(1) << (layout.b_sites[i] - 1);
            v(int(y), int(x)) = amp;
        }
    }
    return v;
}

FullState full_evolve(const ComplexMatrix& h, const FullState& state, double tau) {
    const int dim = h.rows();
    if (int(state.amplitudes.size()) != dim)
        throw validation_error("full_evolve: state dimension mismatch");
    HermitianEig eig = hermitian_eig(h);
    std::vector<cplx> coef(dim);
    for (int m = 0; m < dim; ++m) {
        cplx s = 0;
        for (int i = 0; i < dim; ++i) s += std::conj(eig.vectors(i, m)) * state.amplitudes[i];
        coef[m] = s * std::polar(1.0, -eig.values[m] * tau);
    }
    FullState out;
    out.n = state.n;
    out.amplitudes.assign(dim, cplx(0.0));
    for (int m = 0; m < dim; ++m) {
        if (coef[m] == cplx(0.0)) continue;
        for (int i = 0; i < dim; ++i) out.amplitudes[i] += eig.vectors(i, m) * coef[m];
    }
    double nrm = 0;
    for (const cplx& z : out.amplitudes) nrm += std::norm(z);
    if (std::abs(nrm - 1.0) > 1e-10)
        throw numeric_error("full_evolve: norm drifted to " + std::to_string(std::sqrt(nrm)));
    return out;
}

double sector_equivalence_check(int n, const ModelParams& params,
                                const std::vector<double>& taus) {
    check_cap(n);
    SectorBasis basis = make_basis(n, true);
    SpectralData spec = sector_spectrum(basis, params);

    ComplexMatrix h = full_hamiltonian(n, params, true);
    HermitianEig eig = hermitian_eig(h);
    const int dim = h.rows();

    // sector slot -> full-space index
    std::vector<size_t> embed(basis.dim);
    embed[0] = 0;
    for (int j = 1; j <= n; ++j) embed[basis.slot(j)] = size_t(1) << (j - 1);
    std::vector<bool> in_sector(dim, false);
    for (size_t idx : embed) in_sector[idx] = true;

    double worst = 0;
    std::vector<cplx> coef(dim), evolved(dim);
    for (double tau : taus) {
        ComplexMatrix u = propagator(spec, tau);
        for (int init = 0; init < basis.dim; ++init) {
            for (int m = 0; m < dim; ++m)
                coef[m] = std::conj(eig.vectors(int(embed[init]), m)) *
                          std::polar(1.0, -eig.values[m] * tau);
            std::fill(evolved.begin(), evolved.end(), cplx(0.0));
            for (int m = 0; m < dim; ++m)
                for (int i = 0; i < dim; ++i) evolved[i] += eig.vectors(i, m) * coef[m];
            for (int s = 0; s < basis.dim; ++s)
                worst = std::max(worst, std::abs(evolved[embed[s]] - u(s, init)));
            double leak = 0;  // magnon conservation: nothing escapes the sector
            for (int i = 0; i < dim; ++i)
                if (!in_sector[i]) leak += std::norm(evolved[i]);
            worst = std::max(worst, std::sqrt(leak));
        }
    }
    return worst;
}

}  // namespace sws
