#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hybridosc/fock.hpp"

using namespace hybridosc;

TEST_CASE("annihilation matrix elements") {
    Mat a1 = annihilation(1);
    CHECK(a1(0, 1).real() == doctest::Approx(1.0));
    CHECK(a1.col(0).norm() == 0.0);  // a|0> = 0

    Mat a = annihilation(6);
    CHECK(a(3, 4).real() == doctest::Approx(2.0));  // sqrt(4)
    for (int n = 1; n <= 6; ++n) CHECK(std::abs(a(n - 1, n) - std::sqrt(double(n))) < 1e-15);
    CHECK(a.cwiseAbs().sum() == doctest::Approx(a.diagonal(1).cwiseAbs().sum()));
}

TEST_CASE("displacement basics") {
    Mat d0 = displacement(0.0, 30);
    CHECK((d0 - Mat::Identity(31, 31)).norm() < 1e-14);

    // coherent-state overlap <0|D(alpha)|0> = exp(-|alpha|^2/2)
    Mat d = displacement(1.0, 60);
    CHECK(std::abs(std::abs(d(0, 0)) - std::exp(-0.5)) < 1e-10);

    // group inverse
    Mat dp = displacement(complexd(1.62, 0.0), 120);
    Mat dm = displacement(complexd(-1.62, 0.0), 120);
    CHECK((dp * dm - Mat::Identity(121, 121)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("displacement: scaling-and-squaring agrees with eigendecomposition route") {
    int n_max = 80;
    Mat a = annihilation(n_max);
    for (complexd alpha : {complexd(0.5, 0.0), complexd(1.5, -1.0), complexd(0.0, 3.0)}) {
        Mat gen = alpha * a.adjoint() - std::conj(alpha) * a;
        Mat via_pade = expm_general(gen);
        // i*gen is Hermitian, so exp(gen) = exp(-i * (i*gen))
        Mat via_eig = expm_hermitian_unitary(complexd(0, 1) * gen);
        CHECK((via_pade - via_eig).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("generalized squeeze: identity, unitarity, overlap closed form") {
    Mat g0 = generalized_squeeze(2, 0.0, 40);
    CHECK((g0 - Mat::Identity(41, 41)).norm() < 1e-13);

    int n_max = 400;
    double z = 1.12;
    Mat g = generalized_squeeze(2, z, n_max);

    // unitarity on the interior block
    int interior = n_max + 1 - truncation_band(n_max);
    Mat gtg = (g.adjoint() * g).topLeftCorner(interior, interior);
    CHECK((gtg - Mat::Identity(interior, interior)).cwiseAbs().maxCoeff() < 1e-9);

    // |<-zeta|zeta>| = 1/sqrt(cosh 2|zeta|)
    Vec plus = g.col(0);
    Vec minus = g.adjoint().col(0);  // G(-z)|0>
    double overlap = std::abs(minus.dot(plus));
    CHECK(overlap == doctest::Approx(1.0 / std::sqrt(std::cosh(2.0 * z))).epsilon(1e-6));
    CHECK(std::abs(overlap - 0.4588372) < 1e-6);
}

TEST_CASE("overlap closed form holds across |zeta| <= 1.7") {
    int n_max = 400;
    for (double z : {0.3, 0.8, 1.2, 1.7}) {
        Mat g = generalized_squeeze(2, z, n_max);
        double overlap = std::abs(Vec(g.adjoint().col(0)).dot(Vec(g.col(0))));
        CHECK(std::abs(overlap - 1.0 / std::sqrt(std::cosh(2.0 * z))) < 1e-8);
    }
}

TEST_CASE("Fock support of G_k(zeta)|0> lies on multiples of k") {
    struct Case {
        int k;
        double z;
        int n_max;
    };
    // k=3,4 states carry heavy Fock tails at these magnitudes; loosen the
    // guard, the lattice structure is exact at any truncation
    for (auto [k, z, n_max] : {Case{2, 1.12, 250}, Case{3, 0.74, 250}, Case{4, 0.16, 250}}) {
        Vec psi = generalized_squeeze(k, z, n_max, 1e-2).col(0);
        double off_lattice = 0.0;
        for (int n = 0; n <= n_max; ++n) {
            if (n % k != 0) off_lattice += std::norm(psi(n));
        }
        CHECK(off_lattice < 1e-12);
    }
}

TEST_CASE("squeezed vacuum Fock amplitudes") {
    Vec c0 = squeezed_vacuum_fock_amplitudes(0.0, 10);
    CHECK(std::abs(c0(0) - 1.0) < 1e-15);
    CHECK(c0.tail(10).norm() == 0.0);

    double z = 1.12;
    Vec c = squeezed_vacuum_fock_amplitudes(complexd(z, 0.0), 400);
    CHECK(std::abs(std::norm(c(0)) - 1.0 / std::cosh(z)) < 1e-9);

    // entrywise magnitude agreement with the matrix-exponential route
    Vec via_g = generalized_squeeze(2, complexd(z, 0.0), 400).col(0);
    for (int n = 0; n <= 400; ++n) {
        CHECK(std::abs(std::abs(c(n)) - std::abs(via_g(n))) < 1e-8);
    }
}

TEST_CASE("thermal populations") {
    Eigen::VectorXd p0 = thermal_populations(0.0, 20);
    CHECK(p0(0) == doctest::Approx(1.0));

    Eigen::VectorXd p = thermal_populations(0.1, 60);
    CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-14));
    double mean = 0.0;
    for (int n = 0; n < p.size(); ++n) mean += n * p(n);
    CHECK(std::abs(mean - 0.1) < 1e-10);
}

TEST_CASE("embed_spin_op") {
    // sigma_z |0_s> = -|0_s>
    Mat sz = embed_spin_op(pauli(PauliAxis::Z), 0, 1, 2);
    CHECK(sz(0, 0).real() == doctest::Approx(-1.0));
    CHECK(sz(1, 1).real() == doctest::Approx(1.0));

    Mat sx3 = embed_spin_op(pauli(PauliAxis::X), 0, 1, 3);
    CHECK(sx3(2, 2).real() == doctest::Approx(1.0));
    CHECK(sx3.row(2).cwiseAbs().sum() == doctest::Approx(1.0));
    CHECK(sx3.col(2).cwiseAbs().sum() == doctest::Approx(1.0));
    CHECK((sx3 * sx3 - Mat::Identity(3, 3)).norm() < 1e-15);

    CHECK_THROWS_AS(embed_spin_op(pauli(PauliAxis::X), 0, 0, 2), IndexError);
    CHECK_THROWS_AS(embed_spin_op(pauli(PauliAxis::X), 0, 2, 2), IndexError);
}

TEST_CASE("hermiticity checks on claimed-Hermitian operators") {
    Mat a = annihilation(50);
    Mat n_op = a.adjoint() * a;
    CHECK(is_hermitian(n_op));
    complexd zeta(0.7, 0.4);
    Mat a2 = a * a;
    Mat gen = 0.5 * (std::conj(zeta) * a2 + zeta * a2.adjoint());
    CHECK(is_hermitian(gen));
    CHECK_FALSE(is_hermitian(a));
}

TEST_CASE("leakage guard turns truncation error into a hard error") {
    CHECK_THROWS_AS(displacement(4.0, 20), LeakageError);
    CHECK_THROWS_AS(generalized_squeeze(2, 2.5, 40), LeakageError);
}

TEST_CASE("quadrature convention: [x,p] = i on the interior block") {
    int n_max = 40;
    Mat a = annihilation(n_max);
    Mat x = (a + Mat(a.adjoint())) / std::sqrt(2.0);
    Mat p = (a - Mat(a.adjoint())) / complexd(0, std::sqrt(2.0));
    Mat comm = x * p - p * x;
    int interior = n_max;  // commutator breaks only at the very top level
    Mat inner = comm.topLeftCorner(interior, interior);
    CHECK((inner - complexd(0, 1) * Mat::Identity(interior, interior)).cwiseAbs().maxCoeff() <
          1e-12);
}

TEST_CASE("HybridState basics and validation") {
    HybridState s = HybridState::ground(2, 30, 0, 0.1);
    CHECK(s.dim() == 62);
    CHECK(s.rho().trace().real() == doctest::Approx(1.0));
    CHECK(s.mean_phonon() == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(s.spin_populations()(0) == doctest::Approx(1.0));
    s.validate();

    Vec psi = Vec::Zero(62);
    psi(0) = 1.0 / std::sqrt(2.0);
    psi(31) = 1.0 / std::sqrt(2.0);
    HybridState pure = HybridState::from_pure(2, 30, psi);
    CHECK(pure.purity() == doctest::Approx(1.0));
    CHECK(pure.spin_populations()(1) == doctest::Approx(0.5));
    CHECK(pure.fock_populations()(0) == doctest::Approx(1.0));

    CHECK_THROWS_AS(HybridState::ground(4, 10, 0), DomainError);
    CHECK_THROWS_AS(HybridState::ground(2, 10, 2), IndexError);
}
