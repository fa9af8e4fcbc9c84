#include "dicke/multimode.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace dicke {

FourModeBasis::FourModeBasis(int total) : total_(total) {
    for (int a1 = 0; a1 <= total; ++a1)
        for (int b1 = 0; b1 <= total - a1; ++b1)
            for (int a2 = 0; a2 <= total - a1 - b1; ++a2) {
                const int b2 = total - a1 - b1 - a2;
                tuples_.push_back({a1, b1, a2, b2});
            }
    for (int i = 0; i < static_cast<int>(tuples_.size()); ++i)
        index_[tuples_[i]] = i;
}

std::shared_ptr<const FourModeBasis> FourModeBasis::build(int total_particles) {
    if (total_particles < 0)
        throw std::invalid_argument("FourModeBasis: negative particle number");
    return std::shared_ptr<const FourModeBasis>(new FourModeBasis(total_particles));
}

int FourModeBasis::index_of(const std::array<int, 4>& t) const {
    const auto it = index_.find(t);
    if (it == index_.end())
        throw std::invalid_argument("FourModeBasis: tuple not in basis");
    return it->second;
}

FourModePure::FourModePure(std::shared_ptr<const FourModeBasis> b, VectorXcd a)
    : basis(std::move(b)), amplitudes(std::move(a)) {
    if (!basis || amplitudes.size() != basis->dim())
        throw std::invalid_argument("FourModePure: amplitude dimension mismatch");
    if (std::abs(amplitudes.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("FourModePure: amplitudes not unit norm");
}

namespace {

double log_binom(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

} // namespace

FourModePure split_state(int n_particles) {
    if (n_particles <= 0 || n_particles % 2 != 0)
        throw std::invalid_argument("split_state: N must be positive and even");
    const int half = n_particles / 2;
    auto basis = FourModeBasis::build(n_particles);
    VectorXcd a = VectorXcd::Zero(basis->dim());
    for (int k = 0; k <= half; ++k) {
        for (int l = 0; l <= half; ++l) {
            // sqrt(C(half,k) C(half,l)) / 2^{half}
            const double amp = std::exp(
                0.5 * (log_binom(half, k) + log_binom(half, l)) - half * std::numbers::ln2);
            a(basis->index_of({k, l, half - k, half - l})) = amp;
        }
    }
    a /= a.norm();
    return FourModePure(std::move(basis), std::move(a));
}

FourModePure doubled_tf(int n_particles) {
    if (n_particles <= 0 || n_particles % 4 != 0)
        throw std::invalid_argument("doubled_tf: N must be positive and divisible by 4");
    const int q = n_particles / 4;
    auto basis = FourModeBasis::build(n_particles);
    VectorXcd a = VectorXcd::Zero(basis->dim());
    a(basis->index_of({q, q, q, q})) = 1.0;
    return FourModePure(std::move(basis), std::move(a));
}

namespace {

// ladder amplitudes within a pair: J+ = a^dag b on (na, nb)
inline double jplus_coeff(int na, int nb) {
    return std::sqrt(static_cast<double>(na + 1) * nb);
}

} // namespace

VectorXcd apply_pair_operator(const FourModeBasis& basis, int pair,
                              ObservableKind kind, const VectorXcd& v) {
    if (pair != 0 && pair != 1)
        throw std::invalid_argument("apply_pair_operator: pair must be 0 or 1");
    if (v.size() != basis.dim())
        throw std::invalid_argument("apply_pair_operator: vector dimension mismatch");
    const int ia = 2 * pair;
    const int ib = 2 * pair + 1;
    const int d = basis.dim();
    VectorXcd out = VectorXcd::Zero(d);
    const cxd half_over_i(0.0, -0.5); // 1/(2i)

    auto add_jplus = [&](const cxd& w) {
        for (int i = 0; i < d; ++i) {
            if (v(i) == cxd(0.0) || basis.tuple(i)[ib] == 0)
                continue;
            std::array<int, 4> t = basis.tuple(i);
            const double c = jplus_coeff(t[ia], t[ib]);
            ++t[ia];
            --t[ib];
            out(basis.index_of(t)) += w * c * v(i);
        }
    };
    auto add_jminus = [&](const cxd& w) {
        for (int i = 0; i < d; ++i) {
            if (v(i) == cxd(0.0) || basis.tuple(i)[ia] == 0)
                continue;
            std::array<int, 4> t = basis.tuple(i);
            const double c = jplus_coeff(t[ia] - 1, t[ib] + 1);
            --t[ia];
            ++t[ib];
            out(basis.index_of(t)) += w * c * v(i);
        }
    };

    switch (kind) {
    case ObservableKind::Jx:
        add_jplus(0.5);
        add_jminus(0.5);
        return out;
    case ObservableKind::Jz:
        for (int i = 0; i < d; ++i) {
            const auto& t = basis.tuple(i);
            out(i) = 0.5 * (t[ia] - t[ib]) * v(i);
        }
        return out;
    case ObservableKind::JzSquared:
        for (int i = 0; i < d; ++i) {
            const auto& t = basis.tuple(i);
            const double mz = 0.5 * (t[ia] - t[ib]);
            out(i) = mz * mz * v(i);
        }
        return out;
    case ObservableKind::JplusSquaredHc: {
        // (J+^2 + J-^2)/2: two-step ladders
        for (int i = 0; i < d; ++i) {
            if (v(i) == cxd(0.0))
                continue;
            std::array<int, 4> t = basis.tuple(i);
            if (t[ib] >= 2) {
                const double c = jplus_coeff(t[ia], t[ib]) * jplus_coeff(t[ia] + 1, t[ib] - 1);
                std::array<int, 4> t2 = t;
                t2[ia] += 2;
                t2[ib] -= 2;
                out(basis.index_of(t2)) += 0.5 * c * v(i);
            }
            if (t[ia] >= 2) {
                const double c = jplus_coeff(t[ia] - 1, t[ib] + 1) * jplus_coeff(t[ia] - 2, t[ib] + 2);
                std::array<int, 4> t2 = t;
                t2[ia] -= 2;
                t2[ib] += 2;
                out(basis.index_of(t2)) += 0.5 * c * v(i);
            }
        }
        return out;
    }
    case ObservableKind::JzJplusHc: {
        // (Jz J+ + J- Jz)/2
        out.setZero();
        for (int i = 0; i < d; ++i) {
            if (v(i) == cxd(0.0))
                continue;
            const auto& t = basis.tuple(i);
            if (t[ib] >= 1) {
                const double c = jplus_coeff(t[ia], t[ib]);
                const double mz_after = 0.5 * ((t[ia] + 1) - (t[ib] - 1));
                std::array<int, 4> t2 = t;
                ++t2[ia];
                --t2[ib];
                out(basis.index_of(t2)) += 0.5 * c * mz_after * v(i);
            }
            if (t[ia] >= 1) {
                const double c = jplus_coeff(t[ia] - 1, t[ib] + 1);
                const double mz_before = 0.5 * (t[ia] - t[ib]);
                std::array<int, 4> t2 = t;
                --t2[ia];
                ++t2[ib];
                out(basis.index_of(t2)) += 0.5 * c * mz_before * v(i);
            }
        }
        return out;
    }
    case ObservableKind::Parity:
        for (int i = 0; i < d; ++i) {
            const auto& t = basis.tuple(i);
            out(i) = (t[ib] % 2 == 0 ? 1.0 : -1.0) * v(i);
        }
        return out;
    }
    throw std::invalid_argument("apply_pair_operator: unknown kind");
}

VectorXcd apply_pair_jy(const FourModeBasis& basis, int pair, const VectorXcd& v) {
    const int ia = 2 * pair;
    const int ib = 2 * pair + 1;
    const int d = basis.dim();
    VectorXcd out = VectorXcd::Zero(d);
    const cxd plus_w(0.0, -0.5);  // J+/(2i)
    const cxd minus_w(0.0, 0.5);  // -J-/(2i)
    for (int i = 0; i < d; ++i) {
        if (v(i) == cxd(0.0))
            continue;
        const auto& t = basis.tuple(i);
        if (t[ib] > 0) {
            std::array<int, 4> t2 = t;
            ++t2[ia];
            --t2[ib];
            out(basis.index_of(t2)) += plus_w * jplus_coeff(t[ia], t[ib]) * v(i);
        }
        if (t[ia] > 0) {
            std::array<int, 4> t2 = t;
            --t2[ia];
            ++t2[ib];
            out(basis.index_of(t2)) += minus_w * jplus_coeff(t[ia] - 1, t[ib] + 1) * v(i);
        }
    }
    return out;
}

LocalGenerators local_generators(std::shared_ptr<const FourModeBasis> basis) {
    LocalGenerators g;
    g.basis = basis;
    const int d = basis->dim();
    auto densify = [&](int pair, ObservableKind kind) {
        MatrixXcd m(d, d);
        VectorXcd e = VectorXcd::Zero(d);
        for (int c = 0; c < d; ++c) {
            e(c) = 1.0;
            m.col(c) = apply_pair_operator(*basis, pair, kind, e);
            e(c) = 0.0;
        }
        return m;
    };
    auto densify_jy = [&](int pair) {
        MatrixXcd m(d, d);
        VectorXcd e = VectorXcd::Zero(d);
        for (int c = 0; c < d; ++c) {
            e(c) = 1.0;
            m.col(c) = apply_pair_jy(*basis, pair, e);
            e(c) = 0.0;
        }
        return m;
    };
    for (int p = 0; p < 2; ++p) {
        g.jy[p] = densify_jy(p);
        g.jx[p] = densify(p, ObservableKind::Jx);
        g.jz[p] = densify(p, ObservableKind::Jz);
        g.jz_squared[p] = densify(p, ObservableKind::JzSquared);
        g.jplus_sq_hc[p] = densify(p, ObservableKind::JplusSquaredHc);
        g.jz_jplus_hc[p] = densify(p, ObservableKind::JzJplusHc);
    }
    return g;
}

Eigen::Matrix2d four_mode_qfi_matrix(const FourModePure& state) {
    const FourModeBasis& b = *state.basis;
    const VectorXcd g1 = apply_pair_jy(b, 0, state.amplitudes);
    const VectorXcd g2 = apply_pair_jy(b, 1, state.amplitudes);
    const double m1 = std::real(state.amplitudes.dot(g1));
    const double m2 = std::real(state.amplitudes.dot(g2));
    Eigen::Matrix2d f;
    f(0, 0) = 4.0 * (std::real(g1.dot(g1)) - m1 * m1);
    f(1, 1) = 4.0 * (std::real(g2.dot(g2)) - m2 * m2);
    f(0, 1) = f(1, 0) = 4.0 * (std::real(g1.dot(g2)) - m1 * m2);
    return f;
}

std::vector<PairBlock> pair_blocks(const FourModeWeights& w) {
    std::map<int, PairBlock> by_split;
    for (const auto& [t, p] : w.weights) {
        const int m1 = t[0] + t[1];
        auto& block = by_split[m1];
        block.m1 = m1;
        block.m2 = w.total_particles - m1;
        block.weights[{t[1], t[3]}] += p; // Dicke indices = mode-b occupations
    }
    std::vector<PairBlock> out;
    out.reserve(by_split.size());
    for (auto& [m1, block] : by_split)
        out.push_back(std::move(block));
    return out;
}

namespace {

// |<n+1|Jy|n>|^2 in the sector with nsec particles
inline double jy_coupling_sq(int nsec, int n) {
    const double j = 0.5 * nsec;
    const double m = j - (n + 1);
    return 0.25 * (j * (j + 1.0) - m * (m + 1.0));
}

// spectral QFI of one block under the pair-1 (axis = 0) or pair-2 (axis = 1)
// local Jy: weights are diagonal, the generator couples adjacent indices on
// one axis only. Zero-weight neighbors inside the block grid contribute
// through their (lambda, 0) pairs.
double block_qfi_axis(const PairBlock& block, int axis, double support_tol) {
    const int msec = (axis == 0) ? block.m1 : block.m2;
    double f = 0.0;
    for (const auto& [key, p] : block.weights) {
        const int n = (axis == 0) ? key.first : key.second;
        const int other = (axis == 0) ? key.second : key.first;
        // pair (n, n+1): counted once, from the lower index
        if (n + 1 <= msec) {
            const auto up = (axis == 0) ? std::make_pair(n + 1, other)
                                        : std::make_pair(other, n + 1);
            const auto it = block.weights.find(up);
            const double q = (it == block.weights.end()) ? 0.0 : it->second;
            const double den = p + q;
            if (den > support_tol)
                f += 4.0 * (p - q) * (p - q) / den * jy_coupling_sq(msec, n);
        }
        // pair (n-1, n) when the lower element is absent from the map
        if (n - 1 >= 0) {
            const auto down = (axis == 0) ? std::make_pair(n - 1, other)
                                          : std::make_pair(other, n - 1);
            if (block.weights.find(down) == block.weights.end() && p > support_tol)
                f += 4.0 * p * jy_coupling_sq(msec, n - 1);
        }
    }
    return f;
}

} // namespace

DoubledQfiDiagonal lossy_doubled_qfi_diagonal(int n_particles, int loss_count,
                                              double support_tol) {
    if (n_particles <= 0 || n_particles % 4 != 0)
        throw std::invalid_argument("lossy_doubled_qfi_diagonal: N must be divisible by 4");
    if (loss_count < 0 || loss_count >= n_particles)
        throw std::invalid_argument("lossy_doubled_qfi_diagonal: need 0 <= K < N");
    const int q = n_particles / 4;
    const FourModeWeights w = four_mode_loss({q, q, q, q}, loss_count);
    const std::vector<PairBlock> blocks = pair_blocks(w);
    DoubledQfiDiagonal out;
    for (const auto& block : blocks) {
        out.f11 += block_qfi_axis(block, 0, support_tol);
        out.f22 += block_qfi_axis(block, 1, support_tol);
    }
    return out;
}

double lossy_doubled_qfi11(int n_particles, int loss_count, double support_tol) {
    const DoubledQfiDiagonal d =
        lossy_doubled_qfi_diagonal(n_particles, loss_count, support_tol);
    const double scale = std::max({1.0, std::abs(d.f11), std::abs(d.f22)});
    if (std::abs(d.f11 - d.f22) > 1e-10 * scale) {
        std::ostringstream os;
        os << "lossy_doubled_qfi11: 1<->2 symmetry violated, f11=" << d.f11
           << " f22=" << d.f22;
        throw std::runtime_error(os.str());
    }
    return d.f11;
}

BlockEnsemble lossy_doubled_pair1_marginal(int n_particles, int loss_count) {
    if (n_particles <= 0 || n_particles % 4 != 0)
        throw std::invalid_argument("lossy_doubled_pair1_marginal: N must be divisible by 4");
    const int q = n_particles / 4;
    const FourModeWeights w = four_mode_loss({q, q, q, q}, loss_count);
    std::map<int, Eigen::VectorXd> acc;
    for (const auto& [t, p] : w.weights) {
        const int m1 = t[0] + t[1];
        auto [it, inserted] = acc.try_emplace(m1, Eigen::VectorXd::Zero(m1 + 1));
        it->second(t[1]) += p;
    }
    BlockEnsemble out;
    out.reserve(acc.size());
    for (auto& [m1, weights] : acc)
        out.push_back({SpinSector(m1), std::move(weights)});
    return out;
}

GradiometryMoment gradiometry_moment_matrix(int n_particles, double theta1) {
    if (n_particles <= 0 || n_particles % 4 != 0)
        throw std::invalid_argument("gradiometry_moment_matrix: N must be divisible by 4");
    const double x = n_particles / 4.0;
    const double t = 0.5 * x * (x + 1.0);
    const double g = (3.0 * x * x * x * x + 6.0 * x * x * x + x * x - 2.0 * x) / 8.0;
    const double h = (x * x * x * x + 2.0 * x * x * x + 3.0 * x * x + 2.0 * x) / 8.0;
    const double s2 = std::sin(theta1) * std::sin(theta1);
    const double c2 = std::cos(theta1) * std::cos(theta1);
    const double limit = n_particles * (n_particles + 4.0) / 8.0;

    GradiometryMoment out;
    const double dcoef = (n_particles / 8.0) * (x + 1.0) * std::sin(2.0 * theta1);
    out.derivative << dcoef, -dcoef, 0.0, 0.0;
    out.covariance_upper(0, 0) = s2 * s2 * g + t * c2 * s2 - t * t * s2 * s2;
    out.covariance_upper(1, 1) =
        (1.0 + c2 * c2) * g + t * c2 * s2 - 2.0 * h * c2 - t * t * s2 * s2;
    out.covariance_upper(0, 1) = out.covariance_upper(1, 0) =
        c2 * s2 * (g - t) - h * s2 + t * t * s2 * s2;

    if (std::abs(std::sin(2.0 * theta1)) < 1e-12) {
        out.at_degenerate_angle = true;
        out.m11 = limit;
        return out;
    }
    const double det = out.covariance_upper.determinant();
    const double quad = out.covariance_upper(0, 0) + out.covariance_upper(1, 1) +
                        2.0 * out.covariance_upper(0, 1);
    out.m11 = dcoef * dcoef * quad / det;
    return out;
}

bool sequential_identity_check(int n_particles, double theta1, double theta2,
                               double tol) {
    const SpinSector sector(n_particles);
    const SpinOperators ops = build_spin_operators(sector);
    const UnitaryFactor jx(ops.jx);
    const UnitaryFactor jy(ops.jy);
    const int d = sector.dim();
    MatrixXcd rz1 = MatrixXcd::Zero(d, d);
    MatrixXcd rz2 = MatrixXcd::Zero(d, d);
    for (int n = 0; n < d; ++n) {
        const double m = sector.jz_eigenvalue(n);
        rz1(n, n) = std::exp(cxd(0.0, -theta1 * m));
        rz2(n, n) = std::exp(cxd(0.0, -theta2 * m));
    }
    const MatrixXcd half_plus = jx.evolve(-std::numbers::pi / 2.0);  // e^{+i pi/2 Jx}
    const MatrixXcd half_minus = jx.evolve(std::numbers::pi / 2.0);  // e^{-i pi/2 Jx}
    const MatrixXcd lhs =
        half_minus * rz2 * half_plus * half_plus * rz1 * half_minus;
    const MatrixXcd rhs = jy.evolve(theta1 - theta2);
    return (lhs - rhs).norm() <= tol;
}

} // namespace dicke
