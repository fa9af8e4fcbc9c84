#pragma once

#include "dicke/spin_sector.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace dicke {

using MatrixXcd = Eigen::MatrixXcd;
using VectorXcd = Eigen::VectorXcd;
using VectorXd = Eigen::VectorXd;
using cxd = std::complex<double>;

/// Dense Hermitian operator tagged with the sector it acts on.
/// Hermiticity is validated on construction (1e-12 max-norm) and then trusted.
struct HermitianOperator {
    SpinSector sector;
    MatrixXcd matrix;

    HermitianOperator() = default;
    HermitianOperator(SpinSector s, MatrixXcd m);
};

/// Collective spin operators in the (N+1)-dim Dicke basis.
/// jz is diagonal with entries N/2 - n; jplus has the standard ladder
/// elements sqrt(j(j+1) - m(m+1)); jx = (J+ + J-)/2, jy = (J+ - J-)/(2i).
struct SpinOperators {
    SpinSector sector;
    MatrixXcd jx, jy, jz;
    MatrixXcd jplus, jminus; // ladders, not Hermitian
};

SpinOperators build_spin_operators(SpinSector sector);

/// Cached eigendecomposition of a Hermitian generator, used to apply
/// e^{-i theta G} for many theta. Immutable after construction; thread-safe.
class UnitaryFactor {
  public:
    /// Factorizes the generator. Throws std::runtime_error carrying the
    /// reconstruction residual if the eigensolver fails the 1e-10 check.
    explicit UnitaryFactor(const MatrixXcd& generator);

    int dim() const { return static_cast<int>(eigenvalues_.size()); }
    const VectorXd& eigenvalues() const { return eigenvalues_; }
    const MatrixXcd& eigenvectors() const { return eigenvectors_; }

    /// e^{-i angle G}
    MatrixXcd evolve(double angle) const;
    VectorXcd evolve(double angle, const VectorXcd& state) const;

  private:
    VectorXd eigenvalues_;
    MatrixXcd eigenvectors_;
};

/// One-shot e^{-i angle G}; factorizes on every call. Use UnitaryFactor
/// when sweeping angles.
MatrixXcd rotation(const MatrixXcd& generator, double angle);

/// Single-mode parity (-1)^{b^dag b}: diagonal with entry (-1)^n.
MatrixXcd parity_operator(SpinSector sector);

enum class ObservableKind {
    Jx,
    Jz,
    JzSquared,
    JplusSquaredHc,  // (J+^2 + h.c.)/2
    JzJplusHc,       // (Jz J+ + h.c.)/2
    Parity,
};

MatrixXcd build_observable(SpinSector sector, ObservableKind kind);

/// The quadratic readout set {Jz^2, (J+^2 + h.c.)/2, (Jz J+ + h.c.)/2, Jx}.
std::vector<MatrixXcd> quadratic_observables(SpinSector sector);

/// Cyclic shift C|N-n,n> = |N-n-1,n+1> with n = N -> 0 wraparound.
MatrixXcd cyclic_shift(SpinSector sector);

/// J_y phase basis: k-th vector = (N+1)^{-1/2} sum_n e^{2 pi i n k/(N+1)}
/// e^{i pi/2 Jx} |N-n,n>, k = 0..N. Orthonormal and complete.
std::vector<VectorXcd> phase_basis(SpinSector sector);

/// max |A - A^dag| entry
double hermiticity_defect(const MatrixXcd& a);

} // namespace dicke
