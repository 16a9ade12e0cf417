#include "sws/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace sws {

std::vector<double> TauGrid::points() const {
    if (step <= 0) throw validation_error("tau grid: step must be positive");
    if (start < 0 || end < start)
        throw validation_error("tau grid: need end >= start >= 0");
    std::vector<double> pts;
    long count = lround((end - start) / step);
    if (start + count * step > end + 0.5 * step) --count;
    for (long k = 0; k <= count; ++k) pts.push_back(start + k * step);
    return pts;
}

std::string to_string(SwapLabel label) {
    switch (label) {
        case SwapLabel::Exact: return "exact";
        case SwapLabel::Partial: return "partial";
        case SwapLabel::None: return "none";
    }
    return "?";
}

ComplexMatrix compose_w(const ExchangeOperator& p, const ComplexMatrix& u) {
    if (p.matrix.rows() != u.rows() || u.rows() != u.cols())
        throw validation_error("compose_w: dimension mismatch");
    return p.matrix * u;
}

namespace detail {

size_t pick_best_cluster(const std::vector<ClusterProbability>& clusters) {
    constexpr double tie = 1e-9;
    size_t best = 0;
    for (size_t c = 1; c < clusters.size(); ++c) {
        double dp = clusters[c].p - clusters[best].p;
        if (dp > tie ||
            (dp > -tie && std::abs(clusters[c].phase) > std::abs(clusters[best].phase)))
            best = c;
    }
    return best;
}

SwapLabel classify(double p) {
    if (p > 1.0 - 1e-3) return SwapLabel::Exact;
    if (p > 0.5) return SwapLabel::Partial;
    return SwapLabel::None;
}

std::vector<int> resolved_target_slots(const ScanConfig& config, const SectorBasis& basis) {
    std::vector<int> sites;
    if (config.target_sites) {
        sites = *config.target_sites;
    } else if (auto def = default_target_sites(config.exchange)) {
        sites = *def;
    }
    std::vector<int> slots;
    slots.reserve(sites.size());
    for (int s : sites) {
        if (s < 1 || s > basis.n)
            throw validation_error("target site " + std::to_string(s) + " out of range");
        slots.push_back(basis.slot(s));
    }
    return slots;
}

ScanRecord make_scan_record(const ScanConfig& config, double tau,
                            const std::vector<ClusterProbability>& clusters) {
    ScanRecord rec;
    rec.tau = tau;
    size_t best = pick_best_cluster(clusters);
    rec.best_phase = clusters[best].phase;
    rec.best_p = clusters[best].p;
    rec.cluster_dim = clusters[best].dim;
    rec.label = classify(rec.best_p);
    if (config.fidelity_ab) {
        auto [a, b] = *config.fidelity_ab;
        rec.fidelity = best_joint_fidelity(a, b, rec.best_p);
    }
    if (config.keep_clusters) rec.all_clusters = clusters;
    return rec;
}

}  // namespace detail

ScanRecord swap_probability_profile(const ScanConfig& config, double tau) {
    SectorBasis basis = make_basis(config.n, config.include_zero);
    SpectralData spec = sector_spectrum(basis, config.params);
    ExchangeOperator p = build_exchange(config.exchange, basis);
    std::vector<int> slots = detail::resolved_target_slots(config, basis);
    if (config.fidelity_ab && !slots.empty())
        throw validation_error("fidelity is defined for the single-state overlap; "
                               "disable target sites to request it");

    ComplexMatrix u = propagator(spec, tau);
    ComplexMatrix w = compose_w(p, u);
    UnitaryEigensystem sys = detail::unitary_eig_impl(w, config.tolerances, nullptr);

    std::vector<ClusterProbability> clusters;
    if (slots.empty()) {
        SectorState phi = basis_state(basis, config.initial_site);
        clusters = eigenspace_projection_probability(sys, phi.amplitudes);
    } else {
        clusters = eigenspace_support_probability(sys, slots);
    }
    return detail::make_scan_record(config, tau, clusters);
}

ScanResult scan_tau_serial(const ScanConfig& config) {
    std::vector<double> pts = config.grid.points();
    ScanResult out;
    out.records.reserve(pts.size());
    for (double tau : pts) out.records.push_back(swap_probability_profile(config, tau));
    out.best_index = 0;
    for (size_t i = 1; i < out.records.size(); ++i)
        if (out.records[i].best_p > out.records[out.best_index].best_p) out.best_index = i;
    return out;
}

std::vector<SweepRecord> sweep_chain_sizes(const ExchangeSpec& kind_template,
                                           const std::vector<int>& ns, const TauGrid& grid,
                                           const ModelParams& params) {
    std::vector<SweepRecord> out;
    out.reserve(ns.size());
    for (int n : ns) {
        if (n % 2 == 0) throw validation_error("sweep: all N must be odd");
        ScanConfig config;
        config.n = n;
        config.exchange = kind_template;
        config.exchange.n = n;
        config.params = params;
        config.grid = grid;
        ScanResult res = scan_tau(config);
        SweepRecord rec;
        rec.n = n;
        bool seen = false;
        for (const ScanRecord& r : res.records) {
            if (r.tau <= 0.0) continue;  // skip the trivial no-evolution point
            if (!seen || r.best_p > rec.p_peak) {
                rec.p_peak = r.best_p;
                rec.tau_at_peak = r.tau;
                seen = true;
            }
        }
        if (!seen) {  // grid was {0} only; report it rather than nothing
            rec.p_peak = res.records.front().best_p;
            rec.tau_at_peak = res.records.front().tau;
        }
        out.push_back(rec);
    }
    return out;
}

double joint_fidelity(double a, double b, double phase, cplx overlap) {
    if (a < 0 || b < 0) throw validation_error("joint_fidelity: a, b must be non-negative");
    if (std::abs(a * a + b * b - 1.0) > 1e-12)
        throw validation_error("joint_fidelity: need a^2 + b^2 = 1");
    return std::abs(a * a + b * b * std::polar(1.0, phase) * overlap);
}

double best_joint_fidelity(double a, double b, double best_p) {
    if (a < 0 || b < 0) throw validation_error("joint_fidelity: a, b must be non-negative");
    if (std::abs(a * a + b * b - 1.0) > 1e-12)
        throw validation_error("joint_fidelity: need a^2 + b^2 = 1");
    return a * a + b * b * std::sqrt(std::max(0.0, best_p));
}

TransferCertificate exact_transfer_search(const ScanConfig& config, double threshold) {
    if (!(threshold > 0.5 && threshold <= 1.0))
        throw validation_error("exact_transfer_search: threshold must be in (0.5, 1]");

    SectorBasis basis = make_basis(config.n, config.include_zero);
    SpectralData spec = sector_spectrum(basis, config.params);
    ExchangeOperator p = build_exchange(config.exchange, basis);
    SectorState phi = basis_state(basis, config.initial_site);
    const int sslot = config.initial_site == 0 ? 0 : basis.slot(config.initial_site);

    TransferCertificate cert;
    bool first = true;
    for (double tau : config.grid.points()) {
        ComplexMatrix w = compose_w(p, propagator(spec, tau));
        UnitaryEigensystem sys = detail::unitary_eig_impl(w, config.tolerances, nullptr);
        auto clusters = eigenspace_projection_probability(sys, phi.amplitudes);
        size_t best = detail::pick_best_cluster(clusters);
        if (first || clusters[best].p > cert.p) {
            cert.p = clusters[best].p;
            cert.tau = tau;
            first = false;
        }
        if (clusters[best].p >= threshold) cert.found = true;

        // product criterion on the sender-site cut: the 2 x (dim-1)
        // coefficient matrix has rows (psi_0, psi_{j != s}) and (psi_s, 0...);
        // rank 1 within 1e-8 marks a product eigenvector.
        for (int m = 0; m < basis.dim; ++m) {
            double ws = std::norm(sys.vectors(sslot, m));
            double g01 = 0;  // |<row0|row1>| = |psi_0 conj(psi_s)|, zero slot only
            if (basis.include_zero && sslot != 0)
                g01 = std::abs(sys.vectors(0, m) * std::conj(sys.vectors(sslot, m)));
            double tr = 1.0;                        // g00 + g11
            double det = (1.0 - ws) * ws - g01 * g01;
            double smin2 = 0.5 * (tr - std::sqrt(std::max(0.0, tr * tr - 4.0 * det)));
            double defect = std::sqrt(std::max(0.0, smin2));
            if (defect < 1e-8 && ws > 0.5)
                cert.product_states.push_back({tau, sys.phases[m], ws, defect});
        }
    }
    cert.note = "grid-resolution certificate: no claim between grid points (step " +
                std::to_string(config.grid.step) + ")";
    return cert;
}

}  // namespace sws
