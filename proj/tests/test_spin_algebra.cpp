#include "dicke/spin_algebra.hpp"
#include "dicke/states.hpp"

#include <doctest.h>

#include <numbers>

using namespace dicke;

namespace {
constexpr double kPi = std::numbers::pi;

double max_abs(const MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }
} // namespace

TEST_CASE("jz is diagonal with entries N/2 - n") {
    const SpinOperators ops = build_spin_operators(SpinSector(2));
    CHECK(std::real(ops.jz(0, 0)) == doctest::Approx(1.0));
    CHECK(std::real(ops.jz(1, 1)) == doctest::Approx(0.0));
    CHECK(std::real(ops.jz(2, 2)) == doctest::Approx(-1.0));
    CHECK(max_abs(ops.jz - ops.jz.adjoint()) < 1e-12);
}

TEST_CASE("su(2) commutators and Casimir for all N <= 256") {
    for (int n = 0; n <= 256; ++n) {
        const SpinSector sector(n);
        const SpinOperators ops = build_spin_operators(sector);
        const cxd i(0.0, 1.0);
        const MatrixXcd cxy = ops.jx * ops.jy - ops.jy * ops.jx - i * ops.jz;
        REQUIRE(max_abs(cxy) < 1e-12 * std::max(1, n));
        const MatrixXcd cyz = ops.jy * ops.jz - ops.jz * ops.jy - i * ops.jx;
        REQUIRE(max_abs(cyz) < 1e-12 * std::max(1, n));
        const MatrixXcd czx = ops.jz * ops.jx - ops.jx * ops.jz - i * ops.jy;
        REQUIRE(max_abs(czx) < 1e-12 * std::max(1, n));
        const double j = sector.spin_j();
        const MatrixXcd casimir = ops.jx * ops.jx + ops.jy * ops.jy + ops.jz * ops.jz -
                                  j * (j + 1.0) * MatrixXcd::Identity(n + 1, n + 1);
        REQUIRE(max_abs(casimir) < 1e-10 * std::max(1.0, j * j));
    }
}

TEST_CASE("rotation basics") {
    const SpinOperators ops = build_spin_operators(SpinSector(6));

    SUBCASE("angle 0 gives the identity") {
        CHECK(max_abs(rotation(ops.jy, 0.0) - MatrixXcd::Identity(7, 7)) < 1e-14);
    }
    SUBCASE("group inverse") {
        const UnitaryFactor jy(ops.jy);
        const MatrixXcd prod = jy.evolve(0.7) * jy.evolve(-0.7);
        CHECK(max_abs(prod - MatrixXcd::Identity(7, 7)) < 1e-12);
    }
    SUBCASE("unitarity") {
        const MatrixXcd u = rotation(ops.jy, 1.3);
        CHECK(max_abs(u * u.adjoint() - MatrixXcd::Identity(7, 7)) < 1e-12);
    }
    SUBCASE("angle addition") {
        const UnitaryFactor jy(ops.jy);
        CHECK(max_abs(jy.evolve(0.4) * jy.evolve(0.9) - jy.evolve(1.3)) < 1e-11);
    }
    SUBCASE("non-Hermitian generator is rejected") {
        CHECK_THROWS_AS(rotation(ops.jplus, 0.1), std::invalid_argument);
    }
}

TEST_CASE("pi rotation about jy returns |1,1> to itself up to phase") {
    // series oracle for the 3x3 exponential e^{-i pi Jy}
    const SpinSector sector(2);
    const SpinOperators ops = build_spin_operators(sector);
    MatrixXcd series = MatrixXcd::Identity(3, 3);
    MatrixXcd term = MatrixXcd::Identity(3, 3);
    const MatrixXcd a = cxd(0.0, -kPi) * ops.jy;
    for (int k = 1; k < 60; ++k) {
        term = term * a / static_cast<double>(k);
        series += term;
    }
    const MatrixXcd u = rotation(ops.jy, kPi);
    REQUIRE(max_abs(u - series) < 1e-12);

    const PureState tf = dicke_state(sector, 0.0);
    const VectorXcd rotated = u * tf.amplitudes;
    CHECK(std::abs(tf.amplitudes.dot(rotated)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::real(tf.amplitudes.dot(rotated)) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("parity operator") {
    const SpinSector sector(2);
    const MatrixXcd p = parity_operator(sector);
    CHECK(std::real(p(0, 0)) == doctest::Approx(1.0));
    CHECK(std::real(p(1, 1)) == doctest::Approx(-1.0));
    CHECK(std::real(p(2, 2)) == doctest::Approx(1.0));

    const SpinSector big(9);
    const MatrixXcd pb = parity_operator(big);
    CHECK(max_abs(pb * pb - MatrixXcd::Identity(10, 10)) < 1e-15);
    for (int n = 0; n <= 9; ++n) {
        const double expect = (n % 2 == 0) ? 1.0 : -1.0;
        CHECK(std::real(pb(n, n)) == doctest::Approx(expect)); // spectrum in {-1, +1}
    }
}

TEST_CASE("quadratic observables") {
    const SpinSector sector(64);
    const auto obs = quadratic_observables(sector);
    REQUIRE(obs.size() == 4);
    for (const auto& o : obs)
        CHECK(hermiticity_defect(o) < 1e-12);

    SUBCASE("Jz^2 annihilates the TF state") {
        const PureState tf = dicke_state(sector, 0.0);
        CHECK(std::abs(tf.amplitudes.dot(obs[0] * tf.amplitudes)) < 1e-14);
    }
    SUBCASE("(J+^2 + h.c.)/2 couples indices two apart") {
        const MatrixXcd& jp2 = obs[1];
        for (int a = 0; a < sector.dim(); ++a)
            for (int b = 0; b < sector.dim(); ++b)
                if (std::abs(a - b) != 2)
                    CHECK(std::abs(jp2(a, b)) < 1e-14);
    }
    SUBCASE("N=2 corner element is 1") {
        const auto small = quadratic_observables(SpinSector(2));
        CHECK(std::real(small[1](0, 2)) == doctest::Approx(1.0));
        CHECK(std::real(small[1](2, 0)) == doctest::Approx(1.0));
        CHECK(std::abs(small[1](1, 1)) < 1e-14);
    }
}

TEST_CASE("cyclic shift and phase basis conventions") {
    const SpinSector sector(5);
    const int d = sector.dim();
    const MatrixXcd c = cyclic_shift(sector);

    SUBCASE("shift moves weight to the next Dicke index with wraparound") {
        VectorXcd e0 = VectorXcd::Zero(d);
        e0(5) = 1.0;
        const VectorXcd shifted = c * e0;
        CHECK(std::abs(shifted(0) - cxd(1.0)) < 1e-15);
    }
    SUBCASE("Fourier vectors diagonalize the shift with eigenvalue e^{-2pi i k/(N+1)}") {
        for (int k = 0; k < d; ++k) {
            VectorXcd f(d);
            for (int n = 0; n < d; ++n) {
                const double phi = 2.0 * kPi * n * k / d;
                f(n) = cxd(std::cos(phi), std::sin(phi)) / std::sqrt(double(d));
            }
            const cxd expected = std::exp(cxd(0.0, -2.0 * kPi * k / d));
            CHECK((c * f - expected * f).norm() < 1e-12);
        }
    }
}

TEST_CASE("phase basis is orthonormal and complete") {
    for (int n : {1, 5, 16}) {
        const SpinSector sector(n);
        const auto basis = phase_basis(sector);
        const int d = sector.dim();
        REQUIRE(static_cast<int>(basis.size()) == d);
        MatrixXcd gram(d, d);
        MatrixXcd completeness = MatrixXcd::Zero(d, d);
        for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b)
                gram(a, b) = basis[a].dot(basis[b]);
            completeness += basis[a] * basis[a].adjoint();
        }
        CHECK(max_abs(gram - MatrixXcd::Identity(d, d)) < 1e-10);
        CHECK(max_abs(completeness - MatrixXcd::Identity(d, d)) < 1e-10);
    }
}

TEST_CASE("unitary factor exposes a faithful eigendecomposition") {
    const SpinOperators ops = build_spin_operators(SpinSector(12));
    const UnitaryFactor f(ops.jx);
    const MatrixXcd recon =
        f.eigenvectors() * f.eigenvalues().asDiagonal() * f.eigenvectors().adjoint();
    CHECK(max_abs(recon - ops.jx) < 1e-10);
    CHECK(max_abs(f.eigenvectors().adjoint() * f.eigenvectors() -
                  MatrixXcd::Identity(13, 13)) < 1e-12);
}
