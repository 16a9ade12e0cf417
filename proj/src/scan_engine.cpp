#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sws/analysis.hpp"
#include "sws/hermitian_eig.hpp"

// Parallel scan kernel. Grid points are split into fixed-size chunks handed
// to OpenMP threads; chunk boundaries do not depend on the thread count, so
// output is bitwise reproducible. Inside a chunk the Jacobi solver is
// warm-started from the previous grid point. When the exchange operator has
// a commuting ring reflection, W is assembled directly in the symmetry-
// adapted basis and falls apart into an even and an odd block of half size.

namespace sws {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kChunk = 64;

double wrap_phase(double w) {
    while (w > kPi) w -= 2 * kPi;
    while (w <= -kPi) w += 2 * kPi;
    return w;
}

// Symmetry-adapted block basis: column k is coeff[k] * (e_{slot_a[k]}
// +- e_{slot_b[k]}), or a plain e_{slot_a[k]} for fixed slots (slot_b = -1).
struct BlockBasis {
    std::vector<int> slot_a, slot_b;
    std::vector<double> wa, wb;
    int size() const { return int(slot_a.size()); }
};

// Q_b1^T M Q_b2
ComplexMatrix project_block(const ComplexMatrix& m, const BlockBasis& b1, const BlockBasis& b2) {
    ComplexMatrix out(b1.size(), b2.size());
    for (int i = 0; i < b1.size(); ++i)
        for (int j = 0; j < b2.size(); ++j) {
            cplx s = b1.wa[i] * b2.wa[j] * m(b1.slot_a[i], b2.slot_a[j]);
            if (b2.slot_b[j] >= 0) s += b1.wa[i] * b2.wb[j] * m(b1.slot_a[i], b2.slot_b[j]);
            if (b1.slot_b[i] >= 0) {
                s += b1.wb[i] * b2.wa[j] * m(b1.slot_b[i], b2.slot_a[j]);
                if (b2.slot_b[j] >= 0)
                    s += b1.wb[i] * b2.wb[j] * m(b1.slot_b[i], b2.slot_b[j]);
            }
            out(i, j) = s;
        }
    return out;
}

std::vector<cplx> project_vector(const std::vector<cplx>& v, const BlockBasis& b) {
    std::vector<cplx> out(b.size());
    for (int i = 0; i < b.size(); ++i) {
        cplx s = b.wa[i] * v[b.slot_a[i]];
        if (b.slot_b[i] >= 0) s += b.wb[i] * v[b.slot_b[i]];
        out[i] = s;
    }
    return out;
}

struct SignedPerm {
    bool valid = false;
    bool identity = false;
    std::vector<int> row;     // W(i, :) = sign[i] * U(row[i], :)
    std::vector<double> sign;
};

SignedPerm detect_signed_perm(const ComplexMatrix& p) {
    const int n = p.rows();
    SignedPerm sp;
    sp.row.assign(n, -1);
    sp.sign.assign(n, 1.0);
    bool ident = true;
    for (int i = 0; i < n; ++i) {
        int hit = -1;
        for (int j = 0; j < n; ++j) {
            double a = std::abs(p(i, j));
            if (a > 1e-13) {
                if (hit >= 0 || std::abs(a - 1.0) > 1e-13 ||
                    std::abs(p(i, j).imag()) > 1e-13)
                    return sp;  // not a signed permutation
                hit = j;
                sp.sign[i] = p(i, j).real() > 0 ? 1.0 : -1.0;
            }
        }
        if (hit < 0) return sp;
        sp.row[i] = hit;
        if (hit != i || sp.sign[i] != 1.0) ident = false;
    }
    sp.valid = true;
    sp.identity = ident;
    return sp;
}

struct EngineContext {
    const ScanConfig* config = nullptr;
    SectorBasis basis;
    SpectralData spec;
    ExchangeOperator op;
    std::vector<cplx> phi;
    std::vector<int> target_slots;

    std::vector<BlockBasis> blocks;
    std::vector<ComplexMatrix> p_block;
    std::vector<SignedPerm> p_perm;
    std::vector<std::vector<cplx>> phi_block;
    // target projector in block coordinates, incl. the cross block
    std::vector<ComplexMatrix> t_block;
    ComplexMatrix t_cross;

    // cos(2 pi m d / N) for the circulant propagator coefficients
    std::vector<double> cos_table;  // [(m-1) * n + d], m = 1..(n-1)/2

    bool support_mode() const { return !target_slots.empty(); }
};

EngineContext make_context(const ScanConfig& config) {
    EngineContext ctx;
    ctx.config = &config;
    ctx.basis = make_basis(config.n, config.include_zero);
    ctx.spec = sector_spectrum(ctx.basis, config.params);
    ctx.op = build_exchange(config.exchange, ctx.basis);
    ctx.target_slots = detail::resolved_target_slots(config, ctx.basis);
    if (config.fidelity_ab && ctx.support_mode())
        throw validation_error("fidelity is defined for the single-state overlap; "
                               "disable target sites to request it");
    ctx.phi = basis_state(ctx.basis, config.initial_site).amplitudes;

    const int n = ctx.basis.n;
    const int dim = ctx.basis.dim;
    const int zoff = ctx.basis.include_zero ? 1 : 0;

    // block bases from the commuting reflection, if any
    auto sigma = commuting_reflection(config.exchange);
    if (sigma) {
        BlockBasis even, odd;
        if (zoff) {
            even.slot_a.push_back(0);
            even.slot_b.push_back(-1);
            even.wa.push_back(1.0);
            even.wb.push_back(0.0);
        }
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        for (int j = 1; j <= n; ++j) {
            int k = (*sigma)[j];
            if (k == j) {
                even.slot_a.push_back(ctx.basis.slot(j));
                even.slot_b.push_back(-1);
                even.wa.push_back(1.0);
                even.wb.push_back(0.0);
            } else if (j < k) {
                even.slot_a.push_back(ctx.basis.slot(j));
                even.slot_b.push_back(ctx.basis.slot(k));
                even.wa.push_back(inv_sqrt2);
                even.wb.push_back(inv_sqrt2);
                odd.slot_a.push_back(ctx.basis.slot(j));
                odd.slot_b.push_back(ctx.basis.slot(k));
                odd.wa.push_back(inv_sqrt2);
                odd.wb.push_back(-inv_sqrt2);
            }
        }
        // only split when P is exactly block-diagonal in this basis
        ComplexMatrix cross = project_block(ctx.op.matrix, even, odd);
        if (cross.frobenius_norm() < 1e-13) {
            ctx.blocks.push_back(std::move(even));
            ctx.blocks.push_back(std::move(odd));
        }
    }
    if (ctx.blocks.empty()) {
        BlockBasis full;
        for (int i = 0; i < dim; ++i) {
            full.slot_a.push_back(i);
            full.slot_b.push_back(-1);
            full.wa.push_back(1.0);
            full.wb.push_back(0.0);
        }
        ctx.blocks.push_back(std::move(full));
    }

    for (const BlockBasis& b : ctx.blocks) {
        ctx.p_block.push_back(project_block(ctx.op.matrix, b, b));
        ctx.p_perm.push_back(detect_signed_perm(ctx.p_block.back()));
        ctx.phi_block.push_back(project_vector(ctx.phi, b));
    }
    if (ctx.support_mode()) {
        ComplexMatrix t(dim, dim);
        for (int s : ctx.target_slots) t(s, s) = 1.0;
        for (const BlockBasis& b : ctx.blocks) ctx.t_block.push_back(project_block(t, b, b));
        if (ctx.blocks.size() == 2) ctx.t_cross = project_block(t, ctx.blocks[0], ctx.blocks[1]);
    }

    const int half = (n - 1) / 2;
    ctx.cos_table.resize(size_t(half) * n);
    for (int m = 1; m <= half; ++m)
        for (int d = 0; d < n; ++d)
            ctx.cos_table[size_t(m - 1) * n + d] = std::cos(2 * kPi * m * d / n);
    return ctx;
}

// Circulant coefficients of U(tau) on the ring: c_d with exact d <-> N-d
// symmetry (the degenerate m, N-m pair is summed once and mirrored).
void circulant_coefficients(const EngineContext& ctx, double tau, std::vector<cplx>& c) {
    const int n = ctx.basis.n;
    const int half = (n - 1) / 2;
    c.assign(n, cplx(0.0));
    for (int d = 0; d <= n / 2; ++d) {
        cplx s = std::polar(1.0, -ctx.spec.energies[n - 1] * tau);  // m = N term
        for (int m = 1; m <= half; ++m)
            s += std::polar(2.0 * ctx.cos_table[size_t(m - 1) * n + d],
                            -ctx.spec.energies[m - 1] * tau);
        c[d] = s / double(n);
        if (d > 0) c[n - d] = c[d];
    }
}

// U entry between two slots, given the circulant coefficients
inline cplx u_entry(const EngineContext& ctx, const std::vector<cplx>& c, cplx zphase, int si,
                    int sj) {
    const int zoff = ctx.basis.include_zero ? 1 : 0;
    if (zoff) {
        if (si == 0 && sj == 0) return zphase;
        if (si == 0 || sj == 0) return cplx(0.0);
    }
    int d = (si - sj) % ctx.basis.n;
    if (d < 0) d += ctx.basis.n;
    return c[d];
}

void assemble_u_block(const EngineContext& ctx, const std::vector<cplx>& c, cplx zphase,
                      const BlockBasis& b, ComplexMatrix& u) {
    const int nb = b.size();
    for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j) {
            cplx s = b.wa[i] * b.wa[j] * u_entry(ctx, c, zphase, b.slot_a[i], b.slot_a[j]);
            if (b.slot_b[j] >= 0)
                s += b.wa[i] * b.wb[j] * u_entry(ctx, c, zphase, b.slot_a[i], b.slot_b[j]);
            if (b.slot_b[i] >= 0) {
                s += b.wb[i] * b.wa[j] * u_entry(ctx, c, zphase, b.slot_b[i], b.slot_a[j]);
                if (b.slot_b[j] >= 0)
                    s += b.wb[i] * b.wb[j] * u_entry(ctx, c, zphase, b.slot_b[i], b.slot_b[j]);
            }
            u(i, j) = s;
        }
}

struct MergedMember {
    double phase;
    int block;
    int col;
};

std::vector<ClusterProbability> merged_clusters(const EngineContext& ctx,
                                                const std::vector<UnitaryEigensystem>& sys) {
    std::vector<MergedMember> members;
    for (size_t b = 0; b < sys.size(); ++b)
        for (size_t m = 0; m < sys[b].phases.size(); ++m)
            members.push_back({sys[b].phases[m], int(b), int(m)});
    std::sort(members.begin(), members.end(),
              [](const MergedMember& a, const MergedMember& b) { return a.phase < b.phase; });

    const double ctol = ctx.config->tolerances.cluster_tol;
    std::vector<std::vector<int>> clusters;
    int i = 0, n = int(members.size());
    while (i < n) {
        int j = i + 1;
        while (j < n && members[j].phase - members[i].phase < ctol) ++j;
        std::vector<int> cl(j - i);
        std::iota(cl.begin(), cl.end(), i);
        clusters.push_back(std::move(cl));
        i = j;
    }
    if (clusters.size() > 1) {
        double span = (members[clusters.front().back()].phase + 2 * kPi) -
                      members[clusters.back().front()].phase;
        if (span < ctol) {
            std::vector<int> merged = clusters.back();
            merged.insert(merged.end(), clusters.front().begin(), clusters.front().end());
            clusters.front() = std::move(merged);
            clusters.pop_back();
        }
    }

    std::vector<ClusterProbability> out;
    out.reserve(clusters.size());
    double total = 0;
    for (const auto& cl : clusters) {
        double ref = members[cl.front()].phase, acc = 0;
        for (int k : cl) acc += wrap_phase(members[k].phase - ref);
        double phase = wrap_phase(ref + acc / double(cl.size()));

        double p = 0;
        if (!ctx.support_mode()) {
            for (int k : cl) {
                const auto& mem = members[k];
                const auto& v = sys[mem.block].vectors;
                const auto& pb = ctx.phi_block[mem.block];
                cplx ov = 0;
                for (int r = 0; r < v.rows(); ++r) ov += std::conj(v(r, mem.col)) * pb[r];
                p += std::norm(ov);
            }
            total += p;
        } else if (cl.size() == 1) {
            const auto& mem = members[cl[0]];
            const auto& v = sys[mem.block].vectors;
            const auto& tb = ctx.t_block[mem.block];
            cplx s = 0;
            for (int r = 0; r < v.rows(); ++r) {
                cplx row = 0;
                for (int q = 0; q < v.rows(); ++q) row += tb(r, q) * v(q, mem.col);
                s += std::conj(v(r, mem.col)) * row;
            }
            p = std::clamp(s.real(), 0.0, 1.0);
        } else {
            int g = int(cl.size());
            ComplexMatrix gram(g, g);
            for (int a = 0; a < g; ++a)
                for (int bb = 0; bb < g; ++bb) {
                    const auto& ma = members[cl[a]];
                    const auto& mb2 = members[cl[bb]];
                    const ComplexMatrix* t;
                    bool swapped = false;
                    if (ma.block == mb2.block) t = &ctx.t_block[ma.block];
                    else if (ma.block == 0) t = &ctx.t_cross;
                    else { t = &ctx.t_cross; swapped = true; }
                    const auto& va = sys[ma.block].vectors;
                    const auto& vb = sys[mb2.block].vectors;
                    cplx s = 0;
                    for (int r = 0; r < va.rows(); ++r) {
                        cplx row = 0;
                        for (int q = 0; q < vb.rows(); ++q)
                            row += (swapped ? (*t)(q, r) : (*t)(r, q)) * vb(q, mb2.col);
                        s += std::conj(va(r, ma.col)) * row;
                    }
                    gram(a, bb) = s;
                }
            for (int a = 0; a < g; ++a) {
                gram(a, a) = gram(a, a).real();
                for (int bb = a + 1; bb < g; ++bb) {
                    cplx h = 0.5 * (gram(a, bb) + std::conj(gram(bb, a)));
                    gram(a, bb) = h;
                    gram(bb, a) = std::conj(h);
                }
            }
            HermitianEig ge = hermitian_eig(gram);
            p = std::clamp(ge.values.back(), 0.0, 1.0);
        }
        out.push_back({phase, p, int(cl.size())});
    }
    if (!ctx.support_mode() && std::abs(total - 1.0) > 1e-10)
        throw numeric_error("scan: cluster probabilities sum to " + std::to_string(total));
    return out;
}

}  // namespace

ScanResult scan_tau(const ScanConfig& config) {
    EngineContext ctx = make_context(config);
    const std::vector<double> pts = config.grid.points();
    const int npts = int(pts.size());
    const int nchunks = (npts + kChunk - 1) / kChunk;

    ScanResult out;
    out.records.resize(npts);
    std::exception_ptr failure = nullptr;

#pragma omp parallel for schedule(dynamic, 1)
    for (int chunk = 0; chunk < nchunks; ++chunk) {
        if (failure) continue;
        try {
            std::vector<ComplexMatrix> warm(ctx.blocks.size());
            std::vector<cplx> c;
            std::vector<UnitaryEigensystem> sys(ctx.blocks.size());
            const int lo = chunk * kChunk, hi = std::min(npts, lo + kChunk);
            for (int k = lo; k < hi; ++k) {
                double tau = pts[k];
                circulant_coefficients(ctx, tau, c);
                cplx zphase = std::polar(1.0, -ctx.spec.zero_energy * tau);
                for (size_t b = 0; b < ctx.blocks.size(); ++b) {
                    const int nb = ctx.blocks[b].size();
                    ComplexMatrix u(nb, nb);
                    assemble_u_block(ctx, c, zphase, ctx.blocks[b], u);
                    ComplexMatrix w(nb, nb);
                    const SignedPerm& sp = ctx.p_perm[b];
                    if (sp.valid && sp.identity) {
                        w = std::move(u);
                    } else if (sp.valid) {
                        for (int i = 0; i < nb; ++i)
                            for (int j = 0; j < nb; ++j) w(i, j) = sp.sign[i] * u(sp.row[i], j);
                    } else {
                        w = ctx.p_block[b] * u;
                    }
                    sys[b] = detail::unitary_eig_impl(
                        w, config.tolerances, k > lo ? &warm[b] : nullptr);
                    warm[b] = sys[b].vectors;
                }
                out.records[k] = detail::make_scan_record(config, tau, merged_clusters(ctx, sys));
            }
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    out.best_index = 0;
    for (size_t i = 1; i < out.records.size(); ++i)
        if (out.records[i].best_p > out.records[out.best_index].best_p) out.best_index = i;
    return out;
}

}  // namespace sws
