#include "dicke/spin_algebra.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <sstream>

namespace dicke {

namespace {
constexpr double kHermTol = 1e-12;
constexpr double kReconstructTol = 1e-10;
} // namespace

int SpinSector::index_of_imbalance(double m) const {
    const double n_real = 0.5 * n_particles - m;
    const double n_round = std::round(n_real);
    if (std::abs(n_real - n_round) > 1e-9 || n_round < 0 || n_round > n_particles) {
        std::ostringstream os;
        os << "imbalance m=" << m << " invalid for N=" << n_particles
           << " (need |m| <= N/2 with N/2 +- m integers)";
        throw std::invalid_argument(os.str());
    }
    return static_cast<int>(n_round);
}

double hermiticity_defect(const MatrixXcd& a) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

HermitianOperator::HermitianOperator(SpinSector s, MatrixXcd m)
    : sector(s), matrix(std::move(m)) {
    if (matrix.rows() != sector.dim() || matrix.cols() != sector.dim())
        throw std::invalid_argument("HermitianOperator: matrix dimension does not match sector");
    if (hermiticity_defect(matrix) > kHermTol)
        throw std::invalid_argument("HermitianOperator: matrix is not Hermitian to 1e-12");
}

SpinOperators build_spin_operators(SpinSector sector) {
    const int d = sector.dim();
    const double j = sector.spin_j();
    SpinOperators ops;
    ops.sector = sector;
    ops.jz = MatrixXcd::Zero(d, d);
    ops.jplus = MatrixXcd::Zero(d, d);
    for (int n = 0; n < d; ++n)
        ops.jz(n, n) = sector.jz_eigenvalue(n);
    // J+|n> = sqrt(j(j+1) - m(m+1)) |n-1> with m = j - n
    for (int n = 1; n < d; ++n) {
        const double m = sector.jz_eigenvalue(n);
        ops.jplus(n - 1, n) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    }
    ops.jminus = ops.jplus.adjoint();
    ops.jx = 0.5 * (ops.jplus + ops.jminus);
    ops.jy = (ops.jplus - ops.jminus) / cxd(0.0, 2.0);
    return ops;
}

UnitaryFactor::UnitaryFactor(const MatrixXcd& generator) {
    if (generator.rows() != generator.cols())
        throw std::invalid_argument("UnitaryFactor: generator must be square");
    if (hermiticity_defect(generator) > kHermTol)
        throw std::invalid_argument("UnitaryFactor: generator is not Hermitian to 1e-12");
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(generator);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("UnitaryFactor: eigensolver did not converge");
    eigenvalues_ = es.eigenvalues();
    eigenvectors_ = es.eigenvectors();
    const double scale = std::max(1.0, generator.cwiseAbs().maxCoeff());
    const double residual =
        (eigenvectors_ * eigenvalues_.asDiagonal() * eigenvectors_.adjoint() - generator)
            .cwiseAbs()
            .maxCoeff();
    if (residual > kReconstructTol * scale) {
        std::ostringstream os;
        os << "UnitaryFactor: reconstruction residual " << residual
           << " exceeds tolerance " << kReconstructTol * scale;
        throw std::runtime_error(os.str());
    }
}

MatrixXcd UnitaryFactor::evolve(double angle) const {
    const VectorXcd phases =
        (cxd(0.0, -angle) * eigenvalues_.cast<cxd>().array()).exp();
    return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

VectorXcd UnitaryFactor::evolve(double angle, const VectorXcd& state) const {
    if (state.size() != eigenvalues_.size())
        throw std::invalid_argument("UnitaryFactor::evolve: state dimension mismatch");
    const VectorXcd phases =
        (cxd(0.0, -angle) * eigenvalues_.cast<cxd>().array()).exp();
    return eigenvectors_ * (phases.cwiseProduct(eigenvectors_.adjoint() * state));
}

MatrixXcd rotation(const MatrixXcd& generator, double angle) {
    return UnitaryFactor(generator).evolve(angle);
}

MatrixXcd parity_operator(SpinSector sector) {
    const int d = sector.dim();
    MatrixXcd p = MatrixXcd::Zero(d, d);
    for (int n = 0; n < d; ++n)
        p(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
    return p;
}

MatrixXcd build_observable(SpinSector sector, ObservableKind kind) {
    const SpinOperators ops = build_spin_operators(sector);
    switch (kind) {
    case ObservableKind::Jx:
        return ops.jx;
    case ObservableKind::Jz:
        return ops.jz;
    case ObservableKind::JzSquared:
        return ops.jz * ops.jz;
    case ObservableKind::JplusSquaredHc:
        return 0.5 * (ops.jplus * ops.jplus + ops.jminus * ops.jminus);
    case ObservableKind::JzJplusHc:
        return 0.5 * (ops.jz * ops.jplus + ops.jminus * ops.jz);
    case ObservableKind::Parity:
        return parity_operator(sector);
    }
    throw std::invalid_argument("build_observable: unknown kind");
}

std::vector<MatrixXcd> quadratic_observables(SpinSector sector) {
    return {build_observable(sector, ObservableKind::JzSquared),
            build_observable(sector, ObservableKind::JplusSquaredHc),
            build_observable(sector, ObservableKind::JzJplusHc),
            build_observable(sector, ObservableKind::Jx)};
}

MatrixXcd cyclic_shift(SpinSector sector) {
    const int d = sector.dim();
    MatrixXcd c = MatrixXcd::Zero(d, d);
    for (int n = 0; n < d; ++n)
        c((n + 1) % d, n) = 1.0;
    return c;
}

std::vector<VectorXcd> phase_basis(SpinSector sector) {
    const int d = sector.dim();
    const SpinOperators ops = build_spin_operators(sector);
    // e^{+i pi/2 Jx}
    const MatrixXcd rot = UnitaryFactor(ops.jx).evolve(-std::numbers::pi / 2.0);
    std::vector<VectorXcd> basis;
    basis.reserve(d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (int k = 0; k < d; ++k) {
        VectorXcd f(d);
        for (int n = 0; n < d; ++n) {
            const double phi = 2.0 * std::numbers::pi * n * k / d;
            f(n) = norm * cxd(std::cos(phi), std::sin(phi));
        }
        basis.push_back(rot * f);
    }
    return basis;
}

} // namespace dicke
