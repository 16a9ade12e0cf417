#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sws/analysis.hpp"
#include "sws/exchange.hpp"
#include "sws/hermitian_eig.hpp"
#include "sws/sector.hpp"
#include "sws/unitary_eig.hpp"

using namespace sws;

namespace {
constexpr double kPi = 3.14159265358979323846;

ComplexMatrix reconstruct(const UnitaryEigensystem& sys) {
    const int n = sys.vectors.rows();
    ComplexMatrix w(n, n);
    for (int m = 0; m < n; ++m) {
        cplx lam = std::polar(1.0, sys.phases[m]);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                w(i, j) += lam * sys.vectors(i, m) * std::conj(sys.vectors(j, m));
    }
    return w;
}
}  // namespace

TEST_CASE("hermitian_eig: identity and diagonal matrices") {
    HermitianEig e = hermitian_eig(ComplexMatrix::identity(4));
    for (double v : e.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

    ComplexMatrix d(3, 3);
    d(0, 0) = 3.0;
    d(1, 1) = 1.0;
    d(2, 2) = 2.0;
    e = hermitian_eig(d);
    CHECK(e.values[0] == doctest::Approx(1.0));
    CHECK(e.values[1] == doctest::Approx(2.0));
    CHECK(e.values[2] == doctest::Approx(3.0));
    // permutation columns
    CHECK(std::abs(e.vectors(1, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(e.vectors(2, 1)) == doctest::Approx(1.0));
    CHECK(std::abs(e.vectors(0, 2)) == doctest::Approx(1.0));
}

TEST_CASE("hermitian_eig rejects bad input") {
    CHECK_THROWS_AS(hermitian_eig(ComplexMatrix(2, 3)), validation_error);
    ComplexMatrix a(2, 2);
    a(0, 1) = cplx(1.0, 0.0);
    a(1, 0) = cplx(0.5, 0.0);
    CHECK_THROWS_AS(hermitian_eig(a), validation_error);
}

TEST_CASE("hermitian_eig matches the analytic XY spectrum at N=9") {
    SectorBasis basis = make_basis(9, false);
    ModelParams params = xy_params();
    HermitianEig e = hermitian_eig(one_magnon_hamiltonian(basis, params));
    std::vector<double> expect = sector_spectrum(basis, params).energies;
    std::sort(expect.begin(), expect.end());
    for (int m = 0; m < 9; ++m) CHECK(e.values[m] == doctest::Approx(expect[m]).epsilon(1e-10));
}

TEST_CASE("hermitian_eig agrees with inertia-bisection eigenvalues") {
    std::mt19937_64 rng(7);
    for (int n : {3, 6, 12}) {
        ComplexMatrix a = oracles::random_hermitian(n, rng);
        HermitianEig e = hermitian_eig(a);
        std::vector<double> ref = oracles::bisection_eigenvalues(a, 1e-10);
        for (int i = 0; i < n; ++i) CHECK(std::abs(e.values[i] - ref[i]) < 1e-8);
        // residual and orthonormality
        ComplexMatrix av = a * e.vectors;
        for (int m = 0; m < n; ++m) {
            double r = 0;
            for (int i = 0; i < n; ++i) r += std::norm(av(i, m) - e.values[m] * e.vectors(i, m));
            CHECK(std::sqrt(r) < 1e-10 * std::max(1.0, a.frobenius_norm()));
        }
        CHECK(unitarity_defect(e.vectors) < 1e-10);
    }
}

TEST_CASE("unitary_eig: identity is one cluster at phase 0") {
    UnitaryEigensystem sys = unitary_eig(ComplexMatrix::identity(5));
    CHECK(sys.clusters.size() == 1);
    CHECK(sys.cluster_phases[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sys.residual < 1e-12);
}

TEST_CASE("unitary_eig: slot swap has the 2-cycle eigenstructure") {
    ComplexMatrix w = ComplexMatrix::identity(3);
    w(0, 0) = w(1, 1) = 0.0;
    w(0, 1) = w(1, 0) = 1.0;
    UnitaryEigensystem sys = unitary_eig(w);
    REQUIRE(sys.clusters.size() == 2);
    CHECK(sys.cluster_phases[0] == doctest::Approx(0.0));
    CHECK(sys.cluster_phases[1] == doctest::Approx(kPi));
    // the phase-pi eigenvector is (e1 - e2)/sqrt(2)
    int m = sys.clusters[1][0];
    cplx v0 = sys.vectors(0, m), v1 = sys.vectors(1, m);
    CHECK(std::abs(v0 + v1) < 1e-12);
    CHECK(std::abs(std::abs(v0) - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(sys.vectors(2, m)) < 1e-12);
}

TEST_CASE("unitary_eig rejects non-unitary input with the defect attached") {
    ComplexMatrix w = ComplexMatrix::identity(3);
    w(0, 0) = 0.9;
    CHECK_THROWS_AS(unitary_eig(w), numeric_error);
}

TEST_CASE("unitary_eig on W = P1 U(0.07), N=7: residual and determinant") {
    SectorBasis basis = make_basis(7, false);
    SpectralData spec = sector_spectrum(basis, xy_params());
    ExchangeOperator p1 = build_exchange(parse_exchange("p1", 7), basis);
    ComplexMatrix w = compose_w(p1, propagator(spec, 0.07));
    UnitaryEigensystem sys = unitary_eig(w);
    CHECK(sys.residual < 1e-10);
    cplx prod = 1.0;
    for (double ph : sys.phases) prod *= std::polar(1.0, ph);
    cplx det = oracles::lu_determinant(w);
    CHECK(std::abs(prod - det) < 1e-8);
}

TEST_CASE("unitary_eig completeness on random unitaries") {
    std::mt19937_64 rng(11);
    for (int n : {4, 9, 16}) {
        ComplexMatrix w = oracles::random_unitary(n, rng);
        UnitaryEigensystem sys = unitary_eig(w);
        CHECK(frobenius_distance(reconstruct(sys), w) < 1e-9);
        CHECK(unitarity_defect(sys.vectors) < 1e-10);
    }
}

TEST_CASE("unitary_eig splits +w/-w pairs that collide in cos") {
    // diagonal unitary with phases {0.3, -0.3}: H_R is degenerate, H_I splits
    ComplexMatrix w(2, 2);
    w(0, 0) = std::polar(1.0, 0.3);
    w(1, 1) = std::polar(1.0, -0.3);
    UnitaryEigensystem sys = unitary_eig(w);
    REQUIRE(sys.clusters.size() == 2);
    CHECK(sys.phases[0] == doctest::Approx(-0.3).epsilon(1e-12));
    CHECK(sys.phases[1] == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("projection probability: eigenvector lands in its own cluster") {
    std::mt19937_64 rng(13);
    ComplexMatrix w = oracles::random_unitary(6, rng);
    UnitaryEigensystem sys = unitary_eig(w);
    std::vector<cplx> phi(6);
    for (int i = 0; i < 6; ++i) phi[i] = sys.vectors(i, 2);
    auto probs = eigenspace_projection_probability(sys, phi);
    double sum = 0;
    for (const auto& c : probs) sum += c.p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    bool found = false;
    for (size_t c = 0; c < sys.clusters.size(); ++c)
        for (int m : sys.clusters[c])
            if (m == 2) {
                CHECK(probs[c].p == doctest::Approx(1.0).epsilon(1e-10));
                found = true;
            }
    CHECK(found);
}

TEST_CASE("projection probability: swap(1,2) + identity splits e1 evenly") {
    ComplexMatrix w = ComplexMatrix::identity(3);
    w(0, 0) = w(1, 1) = 0.0;
    w(0, 1) = w(1, 0) = 1.0;
    UnitaryEigensystem sys = unitary_eig(w);
    std::vector<cplx> phi{1.0, 0.0, 0.0};
    auto probs = eigenspace_projection_probability(sys, phi);
    REQUIRE(probs.size() == 2);
    CHECK(probs[0].phase == doctest::Approx(0.0));
    CHECK(probs[0].p == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(probs[1].phase == doctest::Approx(kPi));
    CHECK(probs[1].p == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("projection probability rejects bad phi") {
    UnitaryEigensystem sys = unitary_eig(ComplexMatrix::identity(3));
    CHECK_THROWS_AS(eigenspace_projection_probability(sys, std::vector<cplx>(2, 0.0)),
                    validation_error);
    CHECK_THROWS_AS(eigenspace_projection_probability(sys, std::vector<cplx>(3, 1.0)),
                    validation_error);
}

TEST_CASE("paper anchor: P1 at tau=0.07, N=7 puts ~0.4997 on the pi cluster") {
    SectorBasis basis = make_basis(7, false);
    SpectralData spec = sector_spectrum(basis, xy_params());
    ExchangeOperator p1 = build_exchange(parse_exchange("p1", 7), basis);
    ComplexMatrix w = compose_w(p1, propagator(spec, 0.07));
    UnitaryEigensystem sys = unitary_eig(w);
    auto probs = eigenspace_projection_probability(sys, basis_state(basis, 1).amplitudes);
    size_t best = 0;
    for (size_t c = 1; c < probs.size(); ++c)
        if (probs[c].p > probs[best].p) best = c;
    CHECK(probs[best].p >= 0.49);
    CHECK(probs[best].p <= 0.50);
    CHECK(std::abs(std::abs(probs[best].phase) - kPi) < 0.05);
}

TEST_CASE("probability conservation on random states") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g;
    ComplexMatrix w = oracles::random_unitary(9, rng);
    UnitaryEigensystem sys = unitary_eig(w);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<cplx> phi(9);
        double nrm = 0;
        for (auto& z : phi) {
            z = cplx(g(rng), g(rng));
            nrm += std::norm(z);
        }
        for (auto& z : phi) z /= std::sqrt(nrm);
        auto probs = eigenspace_projection_probability(sys, phi);
        double sum = 0;
        for (const auto& c : probs) sum += c.p;
        CHECK(std::abs(sum - 1.0) < 1e-10);
    }
}

TEST_CASE("degeneracy robustness: rotating inside a cluster changes nothing") {
    // P1 at tau = 0 has an (N-1)-dimensional phase-0 cluster
    SectorBasis basis = make_basis(7, false);
    SpectralData spec = sector_spectrum(basis, xy_params());
    ExchangeOperator p1 = build_exchange(parse_exchange("p1", 7), basis);
    ComplexMatrix w = compose_w(p1, propagator(spec, 0.0));
    UnitaryEigensystem sys = unitary_eig(w);
    std::vector<cplx> phi = basis_state(basis, 1).amplitudes;
    auto before = eigenspace_projection_probability(sys, phi);

    std::mt19937_64 rng(23);
    for (const auto& cl : sys.clusters) {
        const int g = int(cl.size());
        if (g < 2) continue;
        ComplexMatrix rot = oracles::random_unitary(g, rng);
        ComplexMatrix mixed(7, g);
        for (int i = 0; i < 7; ++i)
            for (int a = 0; a < g; ++a) {
                cplx s = 0;
                for (int b = 0; b < g; ++b) s += sys.vectors(i, cl[b]) * rot(b, a);
                mixed(i, a) = s;
            }
        for (int i = 0; i < 7; ++i)
            for (int a = 0; a < g; ++a) sys.vectors(i, cl[a]) = mixed(i, a);
    }
    auto after = eigenspace_projection_probability(sys, phi);
    REQUIRE(before.size() == after.size());
    for (size_t c = 0; c < before.size(); ++c) {
        CHECK(std::abs(before[c].p - after[c].p) < 1e-10);
        CHECK(std::abs(before[c].phase - after[c].phase) < 1e-10);
    }
}

TEST_CASE("support probability stays within [0,1] and sees localized clusters") {
    ComplexMatrix w = ComplexMatrix::identity(4);
    w(0, 0) = w(1, 1) = 0.0;
    w(0, 1) = w(1, 0) = 1.0;  // swap slots 0,1; fix 2,3
    UnitaryEigensystem sys = unitary_eig(w);
    auto probs = eigenspace_support_probability(sys, {0, 1});
    for (const auto& c : probs) {
        CHECK(c.p >= 0.0);
        CHECK(c.p <= 1.0);
    }
    // the phase-0 cluster contains (e0+e1)/sqrt2, fully supported on {0,1}
    CHECK(probs[0].p == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(probs[1].p == doctest::Approx(1.0).epsilon(1e-12));
}
