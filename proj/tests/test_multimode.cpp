#include "dicke/multimode.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace dicke;

namespace {
constexpr double kPi = std::numbers::pi;

// dense four-mode weights vector over a basis
Eigen::VectorXd weights_over_basis(const FourModeWeights& w, const FourModeBasis& basis) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(basis.dim());
    for (const auto& [t, p] : w.weights)
        out(basis.index_of(t)) = p;
    return out;
}
} // namespace

TEST_CASE("four-mode basis enumeration") {
    const auto basis = FourModeBasis::build(6);
    CHECK(basis->dim() == 84); // C(9,3)
    // lexicographic and unique
    for (int i = 1; i < basis->dim(); ++i)
        CHECK(basis->tuple(i - 1) < basis->tuple(i));
    for (int i = 0; i < basis->dim(); ++i)
        CHECK(basis->index_of(basis->tuple(i)) == i);
}

TEST_CASE("split state") {
    SUBCASE("N=2 expansion") {
        const FourModePure s = split_state(2);
        const auto& b = *s.basis;
        CHECK(std::abs(s.amplitudes(b.index_of({1, 1, 0, 0})) - cxd(0.5)) < 1e-12);
        CHECK(std::abs(s.amplitudes(b.index_of({1, 0, 0, 1})) - cxd(0.5)) < 1e-12);
        CHECK(std::abs(s.amplitudes(b.index_of({0, 1, 1, 0})) - cxd(0.5)) < 1e-12);
        CHECK(std::abs(s.amplitudes(b.index_of({0, 0, 1, 1})) - cxd(0.5)) < 1e-12);
    }
    SUBCASE("norm and particle number") {
        for (int n : {8, 32, 64}) {
            const FourModePure s = split_state(n);
            CHECK(s.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-12));
            double total = 0.0;
            for (int i = 0; i < s.basis->dim(); ++i) {
                const auto& t = s.basis->tuple(i);
                total += std::norm(s.amplitudes(i)) * (t[0] + t[1] + t[2] + t[3]);
            }
            CHECK(total == doctest::Approx(static_cast<double>(n)).epsilon(1e-12));
        }
    }
    SUBCASE("odd N rejected") { CHECK_THROWS_AS(split_state(7), std::invalid_argument); }
}

TEST_CASE("doubled TF state") {
    const FourModePure s = doubled_tf(4);
    CHECK(std::abs(s.amplitudes(s.basis->index_of({1, 1, 1, 1})) - cxd(1.0)) < 1e-15);
    CHECK_THROWS_AS(doubled_tf(6), std::invalid_argument);

    SUBCASE("QFI matrix is diag((N^2+4N)/8) and theta-independent by construction") {
        const Eigen::Matrix2d f = four_mode_qfi_matrix(doubled_tf(64));
        CHECK(f(0, 0) == doctest::Approx(544.0).epsilon(1e-10));
        CHECK(f(1, 1) == doctest::Approx(544.0).epsilon(1e-10));
        CHECK(std::abs(f(0, 1)) < 1e-10);
        // dB gain over the per-interferometer SQL N/2
        CHECK(10.0 * std::log10(f(0, 0) / 32.0) ==
              doctest::Approx(10.0 * std::log10(17.0)).epsilon(1e-12));
    }
}

TEST_CASE("local generators") {
    const auto basis = FourModeBasis::build(8);
    const LocalGenerators g = local_generators(basis);

    SUBCASE("pair generators commute and are Hermitian") {
        CHECK((g.jy[0] * g.jy[1] - g.jy[1] * g.jy[0]).cwiseAbs().maxCoeff() < 1e-12);
        for (int p = 0; p < 2; ++p) {
            CHECK(hermiticity_defect(g.jy[p]) < 1e-12);
            CHECK(hermiticity_defect(g.jx[p]) < 1e-12);
            CHECK(hermiticity_defect(g.jz_squared[p]) < 1e-12);
            CHECK(hermiticity_defect(g.jplus_sq_hc[p]) < 1e-12);
            CHECK(hermiticity_defect(g.jz_jplus_hc[p]) < 1e-12);
        }
    }
    SUBCASE("Jy1 restricted to a fixed pair-2 occupation is the two-mode Jy") {
        const std::array<int, 4> fixed2{0, 0, 1, 2}; // pair-2 part (1,2), M1 = 5
        const int m1 = 5;
        const SpinOperators two_mode = build_spin_operators(SpinSector(m1));
        MatrixXcd restricted(m1 + 1, m1 + 1);
        for (int r = 0; r <= m1; ++r)
            for (int c = 0; c <= m1; ++c) {
                // Dicke index = mode-b1 occupation
                const std::array<int, 4> tr{m1 - r, r, fixed2[2], fixed2[3]};
                const std::array<int, 4> tc{m1 - c, c, fixed2[2], fixed2[3]};
                restricted(r, c) = g.jy[0](basis->index_of(tr), basis->index_of(tc));
            }
        CHECK((restricted - two_mode.jy).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("Jz1 annihilates the doubled TF state") {
        const FourModePure s = doubled_tf(8);
        CHECK((g.jz[0] * s.amplitudes).norm() < 1e-13);
    }
}

TEST_CASE("pair blocks partition the lossy weights") {
    const FourModeWeights w = four_mode_loss({4, 4, 4, 4}, 3);
    const auto blocks = pair_blocks(w);
    double total = 0.0;
    for (const auto& b : blocks) {
        CHECK(b.m1 + b.m2 == w.total_particles);
        for (const auto& [key, p] : b.weights) {
            CHECK(key.first <= b.m1);
            CHECK(key.second <= b.m2);
            total += p;
        }
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rotated doubled TF keeps the same diagonal QFI matrix") {
    // local rotations factorize, so U(t1,t2)|doubled> is a product of rotated
    // pair states; the QFI matrix must not depend on the angles
    for (int n : {8, 16}) {
        const int half = n / 2;
        const auto basis = FourModeBasis::build(n);
        const SpinOperators pair_ops = build_spin_operators(SpinSector(half));
        const UnitaryFactor pair_jy(pair_ops.jy);
        const VectorXcd tf0 = dicke_state(SpinSector(half), 0.0).amplitudes;
        const double expect = n * (n + 4.0) / 8.0;
        for (auto [t1, t2] : {std::pair{0.0, 0.0}, {0.3, 0.8}, {-1.2, 2.1}}) {
            const VectorXcd v1 = pair_jy.evolve(t1, tf0);
            const VectorXcd v2 = pair_jy.evolve(t2, tf0);
            VectorXcd psi = VectorXcd::Zero(basis->dim());
            for (int b1 = 0; b1 <= half; ++b1)
                for (int b2 = 0; b2 <= half; ++b2)
                    psi(basis->index_of({half - b1, b1, half - b2, b2})) = v1(b1) * v2(b2);
            const Eigen::Matrix2d f = four_mode_qfi_matrix(FourModePure(basis, psi));
            CHECK(f(0, 0) == doctest::Approx(expect).epsilon(1e-10));
            CHECK(f(1, 1) == doctest::Approx(expect).epsilon(1e-10));
            CHECK(std::abs(f(0, 1)) < 1e-10 * expect);
        }
    }
}

TEST_CASE("blockwise lossy QFI matches the dense spectral computation") {
    for (int n : {8}) {
        for (int k = 0; k <= 5; ++k) {
            const FourModeWeights w = four_mode_loss({n / 4, n / 4, n / 4, n / 4}, k);
            const auto basis = FourModeBasis::build(n - k);
            const LocalGenerators g = local_generators(basis);
            const Eigen::VectorXd lam = weights_over_basis(w, *basis);
            const double dense1 = qfi_spectral_diagonal(lam, g.jy[0]);
            const double dense2 = qfi_spectral_diagonal(lam, g.jy[1]);
            const DoubledQfiDiagonal block = lossy_doubled_qfi_diagonal(n, k);
            REQUIRE(block.f11 == doctest::Approx(dense1).epsilon(1e-10));
            REQUIRE(block.f22 == doctest::Approx(dense2).epsilon(1e-10));
        }
    }
}

TEST_CASE("dense four-mode oracle matches the first-quantized loss at N=4") {
    // end-to-end small check: first-quantized trace -> weights -> dense QFI
    const auto fq = oracle::symmetrize_four_mode({1, 1, 1, 1});
    const auto reduced = oracle::trace_out_particles(fq, 1);
    const auto wmap = oracle::four_mode_weights(reduced);
    const auto basis = FourModeBasis::build(3);
    Eigen::VectorXd lam = Eigen::VectorXd::Zero(basis->dim());
    for (const auto& [t, p] : wmap)
        lam(basis->index_of(t)) = p;
    const LocalGenerators g = local_generators(basis);
    const double dense = qfi_spectral_diagonal(lam, g.jy[0]);
    CHECK(dense == doctest::Approx(lossy_doubled_qfi11(4, 1)).epsilon(1e-10));
}

TEST_CASE("lossy doubled QFI anchors and symmetry") {
    CHECK(lossy_doubled_qfi11(64, 0) == doctest::Approx(544.0).epsilon(1e-12));
    CHECK(lossy_doubled_qfi11(8, 0) == doctest::Approx(12.0).epsilon(1e-12));

    SUBCASE("K=1 at N=64 sits strictly between the SQL and the lossless value") {
        const double f = lossy_doubled_qfi11(64, 1);
        CHECK(f > 32.0);
        CHECK(f < 544.0);
        // one lost particle branches evenly into the two pair sectors
        CHECK(f == doctest::Approx(0.5 * 255.0 + 0.5 * 544.0).epsilon(1e-10));
    }
    SUBCASE("QFI matrix stays a scalar multiple of the identity under loss") {
        for (int k = 0; k <= 6; ++k) {
            const DoubledQfiDiagonal d = lossy_doubled_qfi_diagonal(32, k);
            REQUIRE(d.f11 == doctest::Approx(d.f22).epsilon(1e-10));
        }
        // full spectral matrix at dense scale: off-diagonal vanishes because
        // Jy1 and Jy2 never couple the same index pair
        for (int k : {1, 2}) {
            const auto basis = FourModeBasis::build(8 - k);
            const LocalGenerators g = local_generators(basis);
            const FourModeWeights w = four_mode_loss({2, 2, 2, 2}, k);
            const Eigen::VectorXd lam = weights_over_basis(w, *basis);
            const Eigen::MatrixXd f = qfi_matrix_diagonal(lam, {g.jy[0], g.jy[1]});
            const DoubledQfiDiagonal d = lossy_doubled_qfi_diagonal(8, k);
            CHECK(f(0, 0) == doctest::Approx(d.f11).epsilon(1e-10));
            CHECK(f(1, 1) == doctest::Approx(d.f22).epsilon(1e-10));
            CHECK(std::abs(f(0, 1)) < 1e-12);
        }
    }
}

TEST_CASE("split-state inverse QFI entries scale as 1/N") {
    std::vector<double> ns = {16, 32, 64};
    std::vector<std::array<double, 3>> inv_entries;
    for (double n : ns) {
        const Eigen::Matrix2d f = four_mode_qfi_matrix(split_state(static_cast<int>(n)));
        const Eigen::Matrix2d inv = f.inverse();
        inv_entries.push_back({inv(0, 0), inv(0, 1), inv(1, 1)});
    }
    for (int entry = 0; entry < 3; ++entry) {
        // log-log slope over the three sizes
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (size_t i = 0; i < ns.size(); ++i) {
            const double x = std::log(ns[i]);
            const double y = std::log(std::abs(inv_entries[i][entry]));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double slope =
            (ns.size() * sxy - sx * sy) / (ns.size() * sxx - sx * sx);
        CHECK(slope == doctest::Approx(-1.0).epsilon(0.1));
    }
}

TEST_CASE("gradiometry moment matrix") {
    SUBCASE("closed forms match direct matrix elements at N in {8,16}") {
        for (int n : {8, 16}) {
            const int half = n / 2;
            const auto basis = FourModeBasis::build(n);
            const SpinOperators pair_ops = build_spin_operators(SpinSector(half));
            const UnitaryFactor pair_jy(pair_ops.jy);
            const VectorXcd tf = dicke_state(SpinSector(half), 0.0).amplitudes;
            for (double theta1 : {0.2, 0.9}) {
                // local rotations factorize over the pairs
                const VectorXcd v1 = pair_jy.evolve(theta1, tf);
                const VectorXcd v2 = pair_jy.evolve(0.4, tf);
                VectorXcd psi = VectorXcd::Zero(basis->dim());
                for (int b1 = 0; b1 <= half; ++b1)
                    for (int b2 = 0; b2 <= half; ++b2)
                        psi(basis->index_of({half - b1, b1, half - b2, b2})) =
                            v1(b1) * v2(b2);
                REQUIRE(std::abs(psi.norm() - 1.0) < 1e-12);

                auto apply = [&](ObservableKind kind, const VectorXcd& v) {
                    return apply_pair_operator(*basis, 0, kind, v);
                };
                const VectorXcd o1psi = apply(ObservableKind::JzSquared, psi);
                const VectorXcd o2psi = apply(ObservableKind::JplusSquaredHc, psi);
                const double e1 = std::real(psi.dot(o1psi));
                const double e2 = std::real(psi.dot(o2psi));
                const double c11 = std::real(o1psi.dot(o1psi)) - e1 * e1;
                const double c22 = std::real(o2psi.dot(o2psi)) - e2 * e2;
                const double c12 = std::real(o1psi.dot(o2psi)) - e1 * e2;
                const VectorXcd jy_o1 = apply_pair_jy(*basis, 0, o1psi);
                const VectorXcd jy_o2 = apply_pair_jy(*basis, 0, o2psi);
                const VectorXcd o1_jy =
                    apply(ObservableKind::JzSquared, apply_pair_jy(*basis, 0, psi));
                const VectorXcd o2_jy =
                    apply(ObservableKind::JplusSquaredHc, apply_pair_jy(*basis, 0, psi));
                const double d1 = std::real(psi.dot(cxd(0, 1) * (jy_o1 - o1_jy)));
                const double d2 = std::real(psi.dot(cxd(0, 1) * (jy_o2 - o2_jy)));

                const GradiometryMoment m = gradiometry_moment_matrix(n, theta1);
                REQUIRE(m.covariance_upper(0, 0) == doctest::Approx(c11).epsilon(1e-8));
                REQUIRE(m.covariance_upper(1, 1) == doctest::Approx(c22).epsilon(1e-8));
                REQUIRE(m.covariance_upper(0, 1) == doctest::Approx(c12).epsilon(1e-8));
                REQUIRE(m.derivative(0) == doctest::Approx(d1).epsilon(1e-8));
                REQUIRE(m.derivative(1) == doctest::Approx(d2).epsilon(1e-8));
                REQUIRE(m.m11 ==
                        doctest::Approx(n * (n + 4.0) / 8.0).epsilon(1e-10));
            }
        }
    }
    SUBCASE("N=64 closed-form anchors") {
        const GradiometryMoment m = gradiometry_moment_matrix(64, 0.3);
        CHECK(m.m11 == doctest::Approx(544.0).epsilon(1e-9));
        const double x = 16.0;
        const double det_expect = std::pow(std::sin(0.6), 2) / 16.0 * x * x * (x + 1) *
                                  (x + 1) * (x + 2) * (x - 1);
        CHECK(m.covariance_upper.determinant() ==
              doctest::Approx(det_expect).epsilon(1e-10));
        const double sum_expect = 0.5 * x * (x + 2) * (x + 1) * (x - 1);
        CHECK(m.covariance_upper(0, 0) + m.covariance_upper(1, 1) +
                  2.0 * m.covariance_upper(0, 1) ==
              doctest::Approx(sum_expect).epsilon(1e-10));
    }
    SUBCASE("theta-independence of M11") {
        const double ref = gradiometry_moment_matrix(32, 0.17).m11;
        for (double t : {0.6, 1.2, 2.9})
            CHECK(gradiometry_moment_matrix(32, t).m11 ==
                  doctest::Approx(ref).epsilon(1e-10));
    }
    SUBCASE("degenerate angle returns the limit with a flag") {
        const GradiometryMoment m = gradiometry_moment_matrix(16, 0.0);
        CHECK(m.at_degenerate_angle);
        CHECK(m.m11 == doctest::Approx(16.0 * 20.0 / 8.0).epsilon(1e-12));
    }
}

TEST_CASE("sequential two-interferometer identity") {
    CHECK(sequential_identity_check(8, 0.7, 0.7));
    CHECK(sequential_identity_check(8, 0.5, 0.1));
    std::mt19937 rng(5150);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (int trial = 0; trial < 5; ++trial)
        CHECK(sequential_identity_check(16, angle(rng), angle(rng)));

    SUBCASE("equal angles compose to the identity") {
        const SpinOperators ops = build_spin_operators(SpinSector(8));
        const UnitaryFactor jy(ops.jy);
        CHECK((jy.evolve(0.0) - MatrixXcd::Identity(9, 9)).cwiseAbs().maxCoeff() <
              1e-14);
    }
}

TEST_CASE("pair-1 marginal of the lossy doubled state") {
    const BlockEnsemble blocks = lossy_doubled_pair1_marginal(16, 2);
    double total = 0.0;
    for (const auto& b : blocks) {
        CHECK(b.weights.size() == b.sector.dim());
        CHECK(b.weights.minCoeff() >= 0.0);
        total += b.weights.sum();
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    // K=0 reduces to the single TF block of N/2 particles
    const BlockEnsemble noiseless = lossy_doubled_pair1_marginal(16, 0);
    REQUIRE(noiseless.size() == 1);
    CHECK(noiseless[0].sector.n_particles == 8);
    CHECK(noiseless[0].weights(4) == doctest::Approx(1.0));
}
