#include "sws/hermitian_eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sws {

namespace {

constexpr int kMaxSweeps = 60;

double off_diagonal_norm2(const ComplexMatrix& a) {
    int n = a.rows();
    double s = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) s += std::norm(a(i, j));
    return 2.0 * s;
}

}  // namespace

namespace detail {

HermitianEig jacobi_eig_unsorted(const ComplexMatrix& a, double tol, const ComplexMatrix* warm) {
    int n = a.rows();
    ComplexMatrix m = a;
    ComplexMatrix v = ComplexMatrix::identity(n);
    if (warm) {
        // run on V0^dag A V0 and accumulate rotations on top of V0
        v = *warm;
        ComplexMatrix t = a * v;
        ComplexMatrix w(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                cplx s = 0;
                for (int k = 0; k < n; ++k) s += std::conj(v(k, i)) * t(k, j);
                w(i, j) = s;
            }
        // re-symmetrize: the congruence is Hermitian up to roundoff
        for (int i = 0; i < n; ++i) {
            w(i, i) = w(i, i).real();
            for (int j = i + 1; j < n; ++j) {
                cplx h = 0.5 * (w(i, j) + std::conj(w(j, i)));
                w(i, j) = h;
                w(j, i) = std::conj(h);
            }
        }
        m = std::move(w);
    }

    double fro2 = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) fro2 += std::norm(m(i, j));

    HermitianEig out;
    out.vectors = std::move(v);
    out.values.resize(n);
    if (fro2 == 0) {
        out.sweeps = 0;
        return out;
    }

    const double stop2 = tol * tol * fro2;
    // elements below this cannot individually push off(A)^2 above the stop
    const double skip2 = stop2 / (2.0 * n * n);
    ComplexMatrix& mm = m;
    ComplexMatrix& vv = out.vectors;

    int sweeps = 0;
    for (; sweeps < kMaxSweeps; ++sweeps) {
        if (off_diagonal_norm2(mm) <= stop2) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                cplx apq = mm(p, q);
                double mag2 = std::norm(apq);
                if (mag2 <= skip2) continue;
                double mag = std::sqrt(mag2);
                cplx phase = apq / mag;
                double theta =
                    0.5 * std::atan2(2.0 * mag, mm(q, q).real() - mm(p, p).real());
                double c = std::cos(theta), sig = std::sin(theta);
                cplx s = sig * phase;
                cplx sb = std::conj(s);
                double app = mm(p, p).real(), aqq = mm(q, q).real();
                double dpp = c * c * app + sig * sig * aqq - 2.0 * c * sig * mag;
                double dqq = sig * sig * app + c * c * aqq + 2.0 * c * sig * mag;
                for (int k = 0; k < n; ++k) {
                    cplx apk = mm(p, k), aqk = mm(q, k);
                    mm(p, k) = c * apk - s * aqk;
                    mm(q, k) = sb * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    cplx akp = mm(k, p), akq = mm(k, q);
                    mm(k, p) = c * akp - sb * akq;
                    mm(k, q) = s * akp + c * akq;
                }
                mm(p, p) = dpp;
                mm(q, q) = dqq;
                mm(p, q) = 0.0;
                mm(q, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    cplx vkp = vv(k, p), vkq = vv(k, q);
                    vv(k, p) = c * vkp - sb * vkq;
                    vv(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (sweeps >= kMaxSweeps && off_diagonal_norm2(mm) > stop2) {
        throw numeric_error("jacobi did not converge after " + std::to_string(kMaxSweeps) +
                            " sweeps; off-diagonal residual " +
                            std::to_string(std::sqrt(off_diagonal_norm2(mm))));
    }
    out.sweeps = sweeps;
    for (int i = 0; i < n; ++i) out.values[i] = mm(i, i).real();
    return out;
}

}  // namespace detail

HermitianEig hermitian_eig(const ComplexMatrix& a, double tol) {
    if (a.rows() != a.cols()) throw validation_error("hermitian_eig: matrix not square");
    if (!a.all_finite()) throw validation_error("hermitian_eig: non-finite entries");
    int n = a.rows();
    double herm_defect = 0, scale = std::max(1.0, a.frobenius_norm());
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) herm_defect += std::norm(a(i, j) - std::conj(a(j, i)));
    if (std::sqrt(herm_defect) > 1e-12 * scale)
        throw validation_error("hermitian_eig: input is not Hermitian (defect " +
                               std::to_string(std::sqrt(herm_defect)) + ")");

    HermitianEig e = detail::jacobi_eig_unsorted(a, tol, nullptr);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return e.values[i] < e.values[j]; });
    HermitianEig out;
    out.sweeps = e.sweeps;
    out.values.resize(n);
    out.vectors = ComplexMatrix(n, n);
    for (int j = 0; j < n; ++j) {
        out.values[j] = e.values[order[j]];
        for (int i = 0; i < n; ++i) out.vectors(i, j) = e.vectors(i, order[j]);
    }
    return out;
}

}  // namespace sws
