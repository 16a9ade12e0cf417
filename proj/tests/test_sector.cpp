#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sws/hermitian_eig.hpp"
#include "sws/sector.hpp"

using namespace sws;

TEST_CASE("make_basis: dimensions, receiver, parity errors") {
    SectorBasis b = make_basis(3, false);
    CHECK(b.dim == 3);
    CHECK(b.receiver == 2);
    b = make_basis(7, true);
    CHECK(b.dim == 8);
    CHECK(b.receiver == 4);
    CHECK(b.slot(1) == 1);

    CHECK_THROWS_WITH_AS(make_basis(4, false),
                         doctest::Contains("N must be odd"), validation_error);
    CHECK_THROWS_AS(make_basis(1, false), validation_error);
}

TEST_CASE("basis_state places a single unit amplitude") {
    SectorBasis b = make_basis(5, false);
    SectorState s = basis_state(b, 1);
    CHECK(s.amplitudes[0] == cplx(1.0));
    for (int i = 1; i < 5; ++i) CHECK(s.amplitudes[i] == cplx(0.0));

    SectorBasis bz = make_basis(5, true);
    SectorState z = basis_state(bz, 0);
    CHECK(z.amplitudes[0] == cplx(1.0));

    CHECK_THROWS_AS(basis_state(b, 6), validation_error);
    CHECK_THROWS_AS(basis_state(b, 0), validation_error);  // no zero slot here
}

TEST_CASE("model params validation") {
    CHECK_THROWS_AS(xy_params(0.0), validation_error);
    ModelParams p = xy_params(2.0);
    CHECK(p.delta == 0.0);
    CHECK(p.h == 0.0);
}

TEST_CASE("XY spectrum at N=3: energies {1/2, 1/2, -1} and uniform Phi_3") {
    SectorBasis b = make_basis(3, false);
    SpectralData s = xy_spectrum(b, xy_params());
    CHECK(s.energies[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(s.energies[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(s.energies[2] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(s.zero_energy == 0.0);
    for (int j = 0; j < 3; ++j) {
        CHECK(s.modes(j, 2).real() == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
        CHECK(std::abs(s.modes(j, 2).imag()) < 1e-12);
    }
    CHECK_THROWS_AS(xy_spectrum(b, xxz_params(1, 0.5, 0)), validation_error);
}

TEST_CASE("mode columns are orthonormal and close the Hamiltonian, N <= 31") {
    for (int n = 3; n <= 31; n += 2) {
        SectorBasis b = make_basis(n, false);
        SpectralData s = xy_spectrum(b, xy_params());
        CHECK(unitarity_defect(s.modes) < 1e-12);
        ComplexMatrix h = one_magnon_hamiltonian(b, xy_params());
        ComplexMatrix rebuilt(n, n);
        for (int m = 0; m < n; ++m)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    rebuilt(i, j) += s.energies[m] * s.modes(i, m) * std::conj(s.modes(j, m));
        CHECK(frobenius_distance(rebuilt, h) < 1e-10);
    }
}

TEST_CASE("XY degeneracy structure: E_m = E_{N-m}, only m=N simple") {
    for (int n : {5, 9, 21}) {
        SpectralData s = xy_spectrum(make_basis(n, false), xy_params());
        for (int m = 1; m <= (n - 1) / 2; ++m)
            CHECK(s.energies[m - 1] == doctest::Approx(s.energies[n - m - 1]).epsilon(1e-14));
    }
}

TEST_CASE("one-magnon XY matrix: triangle at N=3, spectrum matches at N=5") {
    SectorBasis b3 = make_basis(3, false);
    ComplexMatrix h = one_magnon_hamiltonian(b3, xy_params());
    for (int i = 0; i < 3; ++i) {
        CHECK(h(i, i) == cplx(0.0));
        for (int j = 0; j < 3; ++j)
            if (i != j) CHECK(h(i, j) == cplx(-0.5));
    }

    SectorBasis b5 = make_basis(5, false);
    HermitianEig e = hermitian_eig(one_magnon_hamiltonian(b5, xy_params()));
    std::vector<double> expect = xy_spectrum(b5, xy_params()).energies;
    std::sort(expect.begin(), expect.end());
    for (int m = 0; m < 5; ++m) CHECK(std::abs(e.values[m] - expect[m]) < 1e-10);
}

TEST_CASE("XXZ with Delta = h = 0 is minus the XY matrix") {
    SectorBasis b = make_basis(5, false);
    ComplexMatrix hxy = one_magnon_hamiltonian(b, xy_params());
    ComplexMatrix hxxz = one_magnon_hamiltonian(b, xxz_params(1.0, 0.0, 0.0));
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) CHECK(hxxz(i, j) == -hxy(i, j));
}

TEST_CASE("XXZ diagonal constants") {
    SectorBasis b = make_basis(7, true);
    ModelParams p = xxz_params(1.0, 0.5, 0.2);
    ComplexMatrix h = one_magnon_hamiltonian(b, p);
    CHECK(h(0, 0).real() == doctest::Approx(0.5 * 7 / 4.0 - 0.2 * 7 / 2.0));
    CHECK(h(1, 1).real() == doctest::Approx(0.5 * 3 / 4.0 + 0.2 * (2 - 7) / 2.0));
    // spectrum of the one-magnon block matches the analytic shift
    SpectralData s = sector_spectrum(b, p);
    HermitianEig e = hermitian_eig(one_magnon_hamiltonian(make_basis(7, false), p));
    std::vector<double> expect = s.energies;
    std::sort(expect.begin(), expect.end());
    for (int m = 0; m < 7; ++m) CHECK(std::abs(e.values[m] - expect[m]) < 1e-12);
}

TEST_CASE("propagator: identity at tau=0 and the group property") {
    SpectralData s = xy_spectrum(make_basis(7, false), xy_params());
    CHECK(frobenius_distance(propagator(s, 0.0), ComplexMatrix::identity(7)) < 1e-12);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> un(-3.0, 3.0);
    for (int rep = 0; rep < 5; ++rep) {
        double t1 = un(rng), t2 = un(rng);
        ComplexMatrix u12 = propagator(s, t1) * propagator(s, t2);
        CHECK(frobenius_distance(u12, propagator(s, t1 + t2)) < 1e-10);
    }
}

TEST_CASE("propagator is unitary and matches the series oracle") {
    for (bool zero : {false, true}) {
        SectorBasis b = make_basis(5, zero);
        ModelParams p = xxz_params(1.0, 0.5, 0.2);
        SpectralData s = sector_spectrum(b, p);
        for (double tau : {0.3, 2.0}) {
            ComplexMatrix u = propagator(s, tau);
            CHECK(unitarity_defect(u) < 1e-12);
            ComplexMatrix ref = oracles::propagator_oracle(one_magnon_hamiltonian(b, p), tau);
            CHECK(frobenius_distance(u, ref) < 1e-11);
        }
    }
}

TEST_CASE("N=3 transfer amplitude has the closed three-level form") {
    SpectralData s = xy_spectrum(make_basis(3, false), xy_params());
    for (double tau : {0.3, 1.0, 2.5}) {
        ComplexMatrix u = propagator(s, tau);
        double p = std::norm(u(1, 0));
        double expect = std::norm(std::polar(1.0, tau) - std::polar(1.0, -tau / 2)) / 9.0;
        CHECK(p == doctest::Approx(expect).epsilon(1e-12));
        CHECK(p <= 4.0 / 9.0 + 1e-12);
    }
    // frozen value from the closed form at tau = 0.3
    CHECK(std::norm(propagator(s, 0.3)(1, 0)) ==
          doctest::Approx(0.022122866143849583).epsilon(1e-12));
}

TEST_CASE("diagonal shift multiplies the propagator by a global phase") {
    SectorBasis b = make_basis(7, false);
    SpectralData s = xy_spectrum(b, xy_params());
    const double c = 0.37, tau = 1.7;
    SpectralData shifted = s;
    for (double& e : shifted.energies) e += c;
    shifted.zero_energy += c;
    ComplexMatrix u = propagator(s, tau);
    ComplexMatrix us = propagator(shifted, tau);
    cplx f = std::polar(1.0, -c * tau);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) CHECK(std::abs(us(i, j) - f * u(i, j)) < 1e-10);
}
