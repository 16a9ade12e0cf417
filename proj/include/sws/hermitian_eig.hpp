#pragma once

#include <vector>

#include "sws/complex_matrix.hpp"

namespace sws {

struct HermitianEig {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // column m belongs to values[m]
    int sweeps = 0;
};

/// Eigendecomposition of a complex Hermitian matrix by cyclic Jacobi sweeps.
///
/// Rotations are applied until the off-diagonal Frobenius norm drops below
/// tol * ||A||_F. Input is checked for Hermiticity (to 1e-12 relative);
/// eigenvalues come out ascending with orthonormal eigenvector columns.
HermitianEig hermitian_eig(const ComplexMatrix& a, double tol = 1e-12);

namespace detail {

/// Workhorse used by both hermitian_eig and the unitary solver: no input
/// check, optional warm start. If `warm` is non-null it must hold a unitary
/// guess basis V0; the iteration then runs on V0^dag A V0 and accumulates
/// on top of V0. Results are not sorted.
HermitianEig jacobi_eig_unsorted(const ComplexMatrix& a, double tol, const ComplexMatrix* warm);

}  // namespace detail

}  // namespace sws
