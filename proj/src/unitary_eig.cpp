#include "sws/unitary_eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sws/hermitian_eig.hpp"

namespace sws {

namespace {

constexpr double kPi = 3.14159265358979323846;
// H_R eigenvalue grouping: just above Jacobi resolution so that exact
// degeneracies (and the cos collision of +w/-w) are always captured.
constexpr double kGroupTol = 1e-10;

double wrap_phase(double w) {
    while (w > kPi) w -= 2 * kPi;
    while (w <= -kPi) w += 2 * kPi;
    return w;
}

}  // namespace

namespace detail {

UnitaryEigensystem unitary_eig_impl(const ComplexMatrix& w, const UnitaryEigTolerances& tols,
                                    const ComplexMatrix* warm) {
    if (w.rows() != w.cols()) throw validation_error("unitary_eig: matrix not square");
    if (!w.all_finite()) throw validation_error("unitary_eig: non-finite entries");
    const int n = w.rows();

    UnitaryEigensystem sys;
    sys.input_defect = unitarity_defect(w);
    if (sys.input_defect > tols.unitarity_gate)
        throw numeric_error("unitary_eig: input is not unitary, ||W^dag W - I|| = " +
                            std::to_string(sys.input_defect));

    ComplexMatrix hr(n, n), hi(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx a = w(i, j), b = std::conj(w(j, i));
            hr(i, j) = 0.5 * (a + b);
            hi(i, j) = cplx(0.0, -0.5) * (a - b);
        }

    HermitianEig re = jacobi_eig_unsorted(hr, tols.jacobi_tol, warm);

    // sort by cos value
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return re.values[a] < re.values[b]; });
    ComplexMatrix v(n, n);
    std::vector<double> cosv(n);
    for (int j = 0; j < n; ++j) {
        cosv[j] = re.values[order[j]];
        for (int i = 0; i < n; ++i) v(i, j) = re.vectors(i, order[j]);
    }

    // split each degenerate cos group by the compressed anti-Hermitian part
    int g0 = 0;
    while (g0 < n) {
        int g1 = g0 + 1;
        while (g1 < n && cosv[g1] - cosv[g0] < kGroupTol) ++g1;
        int g = g1 - g0;
        if (g >= 2) {
            // M = Vg^dag H_I Vg  (g x g Hermitian)
            ComplexMatrix t(n, g);
            for (int i = 0; i < n; ++i)
                for (int jj = 0; jj < g; ++jj) {
                    cplx s = 0;
                    for (int k = 0; k < n; ++k) s += hi(i, k) * v(k, g0 + jj);
                    t(i, jj) = s;
                }
            ComplexMatrix m(g, g);
            for (int ii = 0; ii < g; ++ii)
                for (int jj = 0; jj < g; ++jj) {
                    cplx s = 0;
                    for (int k = 0; k < n; ++k) s += std::conj(v(k, g0 + ii)) * t(k, jj);
                    m(ii, jj) = s;
                }
            for (int ii = 0; ii < g; ++ii) {
                m(ii, ii) = m(ii, ii).real();
                for (int jj = ii + 1; jj < g; ++jj) {
                    cplx h = 0.5 * (m(ii, jj) + std::conj(m(jj, ii)));
                    m(ii, jj) = h;
                    m(jj, ii) = std::conj(h);
                }
            }
            HermitianEig se = jacobi_eig_unsorted(m, tols.jacobi_tol, nullptr);
            // rotate the group columns
            ComplexMatrix rot(n, g);
            for (int i = 0; i < n; ++i)
                for (int jj = 0; jj < g; ++jj) {
                    cplx s = 0;
                    for (int k = 0; k < g; ++k) s += v(i, g0 + k) * se.vectors(k, jj);
                    rot(i, jj) = s;
                }
            for (int i = 0; i < n; ++i)
                for (int jj = 0; jj < g; ++jj) v(i, g0 + jj) = rot(i, jj);
        }
        g0 = g1;
    }

    // phases and residuals from one pass of T = W * V:
    // <v|W|v> = <v|H_R|v> + i <v|H_I|v>, so atan2(Im, Re) is exactly the
    // prescribed Rayleigh-quotient phase.
    ComplexMatrix t = w * v;
    std::vector<double> phase(n);
    double worst = 0;
    for (int j = 0; j < n; ++j) {
        cplx rq = 0;
        for (int i = 0; i < n; ++i) rq += std::conj(v(i, j)) * t(i, j);
        double ww = std::atan2(rq.imag(), rq.real());
        if (ww <= -kPi) ww = kPi;  // convention: ties at pi go to +pi
        phase[j] = ww;
        cplx lam = std::polar(1.0, ww);
        double r2 = 0;
        for (int i = 0; i < n; ++i) r2 += std::norm(t(i, j) - lam * v(i, j));
        worst = std::max(worst, std::sqrt(r2));
    }
    sys.residual = worst;
    if (worst > tols.residual_gate)
        throw numeric_error("unitary_eig: eigenpair residual " + std::to_string(worst) +
                            " exceeds gate " + std::to_string(tols.residual_gate));

    // sort ascending by phase
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return phase[a] < phase[b]; });
    sys.phases.resize(n);
    sys.vectors = ComplexMatrix(n, n);
    for (int j = 0; j < n; ++j) {
        sys.phases[j] = phase[order[j]];
        for (int i = 0; i < n; ++i) sys.vectors(i, j) = v(i, order[j]);
    }

    // cluster on the circle: consecutive phases within cluster_tol of the
    // cluster's first member (bounds the cluster diameter), then a possible
    // wrap-around merge of the first and last clusters across +-pi.
    int c0 = 0;
    while (c0 < n) {
        int c1 = c0 + 1;
        while (c1 < n && sys.phases[c1] - sys.phases[c0] < tols.cluster_tol) ++c1;
        std::vector<int> cl(c1 - c0);
        std::iota(cl.begin(), cl.end(), c0);
        sys.clusters.push_back(std::move(cl));
        c0 = c1;
    }
    if (sys.clusters.size() > 1) {
        const auto& first = sys.clusters.front();
        const auto& last = sys.clusters.back();
        double span = (sys.phases[first.back()] + 2 * kPi) - sys.phases[last.front()];
        if (span < tols.cluster_tol) {
            std::vector<int> merged = last;
            merged.insert(merged.end(), first.begin(), first.end());
            sys.clusters.front() = std::move(merged);
            sys.clusters.pop_back();
        }
    }
    sys.cluster_phases.reserve(sys.clusters.size());
    for (const auto& cl : sys.clusters) {
        // circular mean relative to the first member
        double ref = sys.phases[cl.front()], acc = 0;
        for (int m : cl) acc += wrap_phase(sys.phases[m] - ref);
        double mean = wrap_phase(ref + acc / double(cl.size()));
        if (mean <= -kPi + 1e-300) mean = kPi;
        sys.cluster_phases.push_back(mean);
    }
    return sys;
}

}  // namespace detail

UnitaryEigensystem unitary_eig(const ComplexMatrix& w, double tol, double cluster_tol) {
    UnitaryEigTolerances tols;
    tols.jacobi_tol = tol;
    tols.cluster_tol = cluster_tol;
    return detail::unitary_eig_impl(w, tols, nullptr);
}

std::vector<ClusterProbability> eigenspace_projection_probability(
    const UnitaryEigensystem& sys, const std::vector<cplx>& phi) {
    const int n = sys.vectors.rows();
    if (int(phi.size()) != n)
        throw validation_error("eigenspace_projection_probability: dimension mismatch");
    double nrm2 = 0;
    for (const cplx& z : phi) nrm2 += std::norm(z);
    if (std::abs(nrm2 - 1.0) > 1e-10)
        throw validation_error("eigenspace_projection_probability: phi is not normalized");

    std::vector<ClusterProbability> out;
    out.reserve(sys.clusters.size());
    double total = 0;
    for (size_t c = 0; c < sys.clusters.size(); ++c) {
        double p = 0;
        for (int m : sys.clusters[c]) {
            cplx ov = 0;
            for (int i = 0; i < n; ++i) ov += std::conj(sys.vectors(i, m)) * phi[i];
            p += std::norm(ov);
        }
        total += p;
        out.push_back({sys.cluster_phases[c], p, int(sys.clusters[c].size())});
    }
    if (std::abs(total - 1.0) > 1e-10)
        throw numeric_error("eigenspace probabilities sum to " + std::to_string(total));
    return out;
}

std::vector<ClusterProbability> eigenspace_support_probability(
    const UnitaryEigensystem& sys, const std::vector<int>& slots) {
    const int n = sys.vectors.rows();
    for (int s : slots)
        if (s < 0 || s >= n)
            throw validation_error("eigenspace_support_probability: slot out of range");

    std::vector<ClusterProbability> out;
    out.reserve(sys.clusters.size());
    for (size_t c = 0; c < sys.clusters.size(); ++c) {
        const auto& cl = sys.clusters[c];
        int g = int(cl.size());
        double p = 0;
        if (g == 1) {
            for (int s : slots) p += std::norm(sys.vectors(s, cl[0]));
        } else {
            ComplexMatrix gram(g, g);
            for (int a = 0; a < g; ++a)
                for (int b = 0; b < g; ++b) {
                    cplx s = 0;
                    for (int j : slots)
                        s += std::conj(sys.vectors(j, cl[a])) * sys.vectors(j, cl[b]);
                    gram(a, b) = s;
                }
            HermitianEig ge = hermitian_eig(gram);
            p = ge.values.back();
        }
        p = std::clamp(p, 0.0, 1.0);
        out.push_back({sys.cluster_phases[c], p, g});
    }
    return out;
}

}  // namespace sws
