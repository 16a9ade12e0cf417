#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sws/exchange.hpp"
#include "sws/sector.hpp"
#include "sws/unitary_eig.hpp"

namespace sws {

struct TauGrid {
    double start = 0.0;
    double end = 50.0;
    double step = 0.01;

    std::vector<double> points() const;
};

struct ScanConfig {
    int n = 0;
    ExchangeSpec exchange;
    ModelParams params = xy_params();
    int initial_site = 1;  // 0 selects the zero-magnon state
    bool include_zero = false;
    TauGrid grid;
    /// nullopt = per-kind default ({1,2,N} for P3, {1..r} for PAll, none
    /// otherwise); an explicit empty list forces the single-state overlap.
    std::optional<std::vector<int>> target_sites;
    /// (a, b) of the unknown-state transfer; adds a fidelity column.
    std::optional<std::pair<double, double>> fidelity_ab;
    bool keep_clusters = false;  // retain the full (phase, p) list per record

    UnitaryEigTolerances tolerances;
};

enum class SwapLabel { Exact, Partial, None };

std::string to_string(SwapLabel label);

struct ScanRecord {
    double tau = 0.0;
    double best_phase = 0.0;
    double best_p = 0.0;
    int cluster_dim = 0;
    SwapLabel label = SwapLabel::None;
    std::optional<double> fidelity;
    std::vector<ClusterProbability> all_clusters;  // filled when keep_clusters
};

struct ScanResult {
    std::vector<ScanRecord> records;  // ascending tau
    size_t best_index = 0;            // global maximizer of best_p
};

struct SweepRecord {
    int n = 0;
    double p_peak = 0.0;
    double tau_at_peak = 0.0;
};

/// W(tau) = P * U. The unitarity defect of the product is bounded by the sum
/// of the factors' defects plus roundoff.
ComplexMatrix compose_w(const ExchangeOperator& p, const ComplexMatrix& u);

/// Single-point evaluation through the reference path: build U(tau) and W,
/// run unitary_eig, project. Matches scan_tau records to solver tolerance.
ScanRecord swap_probability_profile(const ScanConfig& config, double tau);

/// Grid scan, OpenMP-parallel kernel: grid chunks are independent work items
/// distributed across threads; inside a chunk the eigensolver is warm-started
/// from the previous grid point, and W is block-split by the commuting ring
/// reflection when the operator kind has one. Records come out in tau order
/// and are bitwise deterministic for a fixed grid.
ScanResult scan_tau(const ScanConfig& config);

/// Serial reference: full-dimension, cold-start evaluation of every grid
/// point. Kept for testing against the parallel kernel (and as the simplest
/// statement of the algorithm).
ScanResult scan_tau_serial(const ScanConfig& config);

/// Peak swap probability per chain size, regenerating the figure data.
/// The peak is taken over tau > 0: at tau = 0 the operator W = P has not
/// evolved and eigenvector localization is trivial (for PAll the best
/// cluster support is exactly 1 there).
std::vector<SweepRecord> sweep_chain_sizes(const ExchangeSpec& kind_template,
                                           const std::vector<int>& ns, const TauGrid& grid,
                                           const ModelParams& params = xy_params());

/// |a^2 + b^2 e^{i w} <1|psi>| for the unknown-state transfer a|0> + b|1>.
/// a, b real non-negative with a^2 + b^2 = 1 (checked to 1e-12).
double joint_fidelity(double a, double b, double phase, cplx overlap);

/// Fidelity the scan path reports: the eigenvector's arbitrary global phase
/// is aligned to the zero-magnon branch, which turns the best reachable
/// modulus into a^2 + b^2 sqrt(best_p).
double best_joint_fidelity(double a, double b, double best_p);

struct ProductStateHit {
    double tau = 0.0;
    double phase = 0.0;
    double weight = 0.0;  // |<s|psi>|^2 on the sender site
    double defect = 0.0;  // second singular value of the sender-cut matrix
};

struct TransferCertificate {
    bool found = false;
    double tau = 0.0;  // maximizer of best_p over the grid
    double p = 0.0;
    std::string note;
    /// Eigenvectors whose sender-site cut factorizes (defect < 1e-8) with
    /// more than half their weight on the sender; the transfer-relevant
    /// product states of the exact-swap criterion.
    std::vector<ProductStateHit> product_states;
};

/// Grid search for best_p >= threshold; found = false certifies the negative
/// claim at grid resolution. Also checks the product-eigenstate criterion
/// directly on every eigenvector.
TransferCertificate exact_transfer_search(const ScanConfig& config, double threshold);

namespace detail {

/// Best cluster: maximal p; ties within 1e-9 go to the phase farther from 0
/// (at tau = 0 the +1/-1 eigenspaces of an involution tie at p = 1/2 and the
/// swap-signal branch is the phase-pi one).
size_t pick_best_cluster(const std::vector<ClusterProbability>& clusters);

SwapLabel classify(double p);

/// Target slots for the configured multi-site probability, already mapped to
/// basis slots; empty when the scan uses the initial-state projection.
std::vector<int> resolved_target_slots(const ScanConfig& config, const SectorBasis& basis);

ScanRecord make_scan_record(const ScanConfig& config, double tau,
                            const std::vector<ClusterProbability>& clusters);

}  // namespace detail

}  // namespace sws
