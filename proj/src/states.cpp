#include "dicke/states.hpp"

#include <cmath>
#include <numbers>

namespace dicke {

namespace {
constexpr double kNormTol = 1e-12;
} // namespace

PureState::PureState(SpinSector s, VectorXcd a) : sector(s), amplitudes(std::move(a)) {
    if (amplitudes.size() != sector.dim())
        throw std::invalid_argument("PureState: amplitude dimension does not match sector");
    if (std::abs(amplitudes.norm() - 1.0) > kNormTol)
        throw std::invalid_argument("PureState: amplitudes are not unit norm");
}

DickeMixture::DickeMixture(SpinSector s, VectorXd w) : sector(s), weights(std::move(w)) {
    if (weights.size() != sector.dim())
        throw std::invalid_argument("DickeMixture: weight dimension does not match sector");
    if (weights.minCoeff() < -1e-14)
        throw std::invalid_argument("DickeMixture: negative weight");
    if (std::abs(weights.sum() - 1.0) > kNormTol)
        throw std::invalid_argument("DickeMixture: weights do not sum to 1");
}

PureState dicke_state(SpinSector sector, double imbalance_m) {
    const int n = sector.index_of_imbalance(imbalance_m);
    VectorXcd a = VectorXcd::Zero(sector.dim());
    a(n) = 1.0;
    return PureState(sector, std::move(a));
}

PureState oat_state(SpinSector sector, double t) {
    const int N = sector.n_particles;
    const int d = sector.dim();
    VectorXcd a(d);
    // +x coherent state: sqrt(C(N,n))/2^{N/2}; log-space for large N
    for (int n = 0; n < d; ++n) {
        const double logc = std::lgamma(N + 1.0) - std::lgamma(n + 1.0) -
                            std::lgamma(N - n + 1.0);
        const double amp = std::exp(0.5 * logc - 0.5 * N * std::numbers::ln2);
        const double m = sector.jz_eigenvalue(n);
        const double phi = -t * m * m;
        a(n) = amp * cxd(std::cos(phi), std::sin(phi));
    }
    a /= a.norm();
    return PureState(sector, std::move(a));
}

PureState phase_diffused(SpinSector sector, double chi) {
    const int N = sector.n_particles;
    if (N % 2 != 0)
        throw std::invalid_argument("phase_diffused: N must be even");
    const SpinOperators ops = build_spin_operators(sector);
    const PureState tf = dicke_state(sector, 0.0);
    VectorXcd a = UnitaryFactor(ops.jy).evolve(std::numbers::pi / 2.0, tf.amplitudes);
    for (int n = 0; n < sector.dim(); ++n) {
        const double m = sector.jz_eigenvalue(n);
        const double phi = -chi * m * m;
        a(n) *= cxd(std::cos(phi), std::sin(phi));
    }
    a /= a.norm();
    return PureState(sector, std::move(a));
}

double overlap_modulus(const PureState& a, const PureState& b) {
    if (a.sector != b.sector)
        throw std::invalid_argument("overlap_modulus: sector mismatch");
    return std::abs(a.amplitudes.dot(b.amplitudes));
}

} // namespace dicke
