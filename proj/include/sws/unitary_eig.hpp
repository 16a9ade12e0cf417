#pragma once

#include <vector>

#include "sws/complex_matrix.hpp"

namespace sws {

/// Default numerical gates. W matrices here are small (dim <= a few hundred),
/// so these are loose against machine precision yet tight against any
/// physical gap met in scans.
struct UnitaryEigTolerances {
    double jacobi_tol = 1e-12;     // off-diagonal stop, relative to ||A||_F
    double cluster_tol = 1e-8;     // eigenphase clustering, radians
    double unitarity_gate = 1e-10; // reject W with ||W^dag W - I||_F above this
    double residual_gate = 1e-9;   // reject eigenpairs worse than this
};

/// Full eigensystem of a unitary matrix: eigenphases in (-pi, pi] sorted
/// ascending, orthonormal eigenvector columns, and the partition of indices
/// into clusters of (numerically) equal phase.
struct UnitaryEigensystem {
    std::vector<double> phases;
    ComplexMatrix vectors;
    std::vector<std::vector<int>> clusters;
    std::vector<double> cluster_phases;  // circular mean per cluster
    double residual = 0.0;               // max_m ||W v_m - e^{i w_m} v_m||
    double input_defect = 0.0;           // ||W^dag W - I||_F of the input
};

/// Diagonalize a unitary matrix via its commuting Hermitian parts:
/// H_R = (W+W^dag)/2 is diagonalized first; inside each (near-)degenerate
/// eigenspace of H_R the compressed H_I = (W-W^dag)/(2i) is diagonalized,
/// which separates the +w/-w phase pairs that collide in cos w. Phases are
/// recovered as atan2(<v|H_I|v>, <v|H_R|v>).
///
/// Throws numeric_error when the input fails the unitarity gate (this is how
/// un-completed exchange operators are caught) or when an eigenpair residual
/// exceeds the residual gate.
UnitaryEigensystem unitary_eig(const ComplexMatrix& w, double tol = 1e-12,
                               double cluster_tol = 1e-8);

struct ClusterProbability {
    double phase = 0.0;
    double p = 0.0;
    int dim = 0;
};

/// Per-cluster projection probability of a unit vector phi:
/// p = sum_{m in cluster} |<v_m|phi>|^2, the squared norm of the projection
/// onto the eigenspace. Basis-independent under degeneracy. The returned
/// probabilities sum to 1 (checked to 1e-10).
std::vector<ClusterProbability> eigenspace_projection_probability(
    const UnitaryEigensystem& sys, const std::vector<cplx>& phi);

/// Per-cluster best support on a set of coordinate slots: the largest
/// eigenvalue of the cluster-compressed slot projector. For a singleton
/// cluster this is sum_{j in slots} |v_j|^2; for a degenerate cluster it is
/// the best value any eigenvector choice inside the cluster can reach.
/// Always in [0, 1].
std::vector<ClusterProbability> eigenspace_support_probability(
    const UnitaryEigensystem& sys, const std::vector<int>& slots);

namespace detail {

/// Engine entry: identical to unitary_eig but optionally warm-started with a
/// previous eigenbasis (columns of `warm`), which makes Jacobi converge in a
/// couple of sweeps when W changes slowly along a scan.
UnitaryEigensystem unitary_eig_impl(const ComplexMatrix& w, const UnitaryEigTolerances& tols,
                                    const ComplexMatrix* warm);

}  // namespace detail

}  // namespace sws
