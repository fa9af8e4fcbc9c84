#pragma once

#include "dicke/loss.hpp"
#include "dicke/metrology.hpp"

#include <map>
#include <memory>

namespace dicke {

/// Occupation basis of two mode pairs (a1,b1,a2,b2) at fixed total particle
/// number M: all 4-tuples summing to M in ascending lexicographic order.
/// Dimension C(M+3,3).
class FourModeBasis {
  public:
    static std::shared_ptr<const FourModeBasis> build(int total_particles);

    int total_particles() const { return total_; }
    int dim() const { return static_cast<int>(tuples_.size()); }
    const std::vector<std::array<int, 4>>& tuples() const { return tuples_; }
    const std::array<int, 4>& tuple(int i) const { return tuples_[i]; }
    int index_of(const std::array<int, 4>& t) const;

  private:
    explicit FourModeBasis(int total);
    int total_;
    std::vector<std::array<int, 4>> tuples_;
    std::map<std::array<int, 4>, int> index_;
};

/// Pure four-mode state: amplitudes over a FourModeBasis, unit norm.
struct FourModePure {
    std::shared_ptr<const FourModeBasis> basis;
    VectorXcd amplitudes;

    FourModePure() = default;
    FourModePure(std::shared_ptr<const FourModeBasis> b, VectorXcd a);
};

/// Spatially split twin Fock probe ((a1+a2)/sqrt2)^{N/2}((b1+b2)/sqrt2)^{N/2}|0>.
/// N must be even.
FourModePure split_state(int n_particles);

/// Doubled twin Fock probe |N/4,N/4,N/4,N/4>. N must be divisible by 4.
FourModePure doubled_tf(int n_particles);

/// Apply the pair-local spin operator (pair 0 = (a1,b1), pair 1 = (a2,b2))
/// to an amplitude vector without materializing the matrix.
VectorXcd apply_pair_operator(const FourModeBasis& basis, int pair,
                              ObservableKind kind, const VectorXcd& v);
VectorXcd apply_pair_jy(const FourModeBasis& basis, int pair, const VectorXcd& v);

/// Dense pair-local generator and readout matrices; dimension C(M+3,3), so
/// meant for small-N tests and cross-checks only.
struct LocalGenerators {
    std::shared_ptr<const FourModeBasis> basis;
    std::array<MatrixXcd, 2> jy, jx, jz, jz_squared, jplus_sq_hc, jz_jplus_hc;
};
LocalGenerators local_generators(std::shared_ptr<const FourModeBasis> basis);

/// 2x2 QFI matrix of a pure four-mode probe under the commuting local
/// generators (Jy1, Jy2): F_ij = 4 Re Cov(Jy_i, Jy_j).
Eigen::Matrix2d four_mode_qfi_matrix(const FourModePure& state);

/// Block of the lossy four-mode state at fixed pair particle split (m1, m2):
/// joint weights over (Dicke index in pair 1, Dicke index in pair 2).
struct PairBlock {
    int m1 = 0;
    int m2 = 0;
    std::map<std::pair<int, int>, double> weights;
};

/// Group four-mode loss weights by pair particle split. Local generators
/// preserve the split, so the QFI decomposes over these blocks.
std::vector<PairBlock> pair_blocks(const FourModeWeights& w);

struct DoubledQfiDiagonal {
    double f11 = 0.0;
    double f22 = 0.0;
};

/// Diagonal of the QFI matrix of E_K(doubled TF) under local Jy generators,
/// computed blockwise (Jy1 is tridiagonal in the pair-1 Dicke index within
/// each block). The off-diagonal element vanishes structurally.
DoubledQfiDiagonal lossy_doubled_qfi_diagonal(int n_particles, int loss_count,
                                              double support_tol = 1e-12);

/// (1,1) element; throws if the 1<->2 symmetry check f11 == f22 fails (1e-10).
double lossy_doubled_qfi11(int n_particles, int loss_count,
                           double support_tol = 1e-12);

/// Reduced pair-1 ensemble of E_K(doubled TF): sector-indexed Dicke weights
/// obtained by marginalizing the four-mode weights over pair 2. Feeds the
/// pair-local readout analysis (generalized_snr_blocks).
BlockEnsemble lossy_doubled_pair1_marginal(int n_particles, int loss_count);

struct GradiometryMoment {
    Eigen::RowVector4d derivative;    // d<(O1,O2,O3,O4)>/dtheta1
    Eigen::Matrix2d covariance_upper; // (O1,O2) block; the (O3,O4) block mirrors it
    double m11 = 0.0;                 // equals N(N+4)/8 for all theta1
    bool at_degenerate_angle = false; // sin(2 theta1) = 0: limit value returned
};

/// Closed-form moment matrix element M(theta)_11 for the doubled TF probe
/// with the pair-1 readouts {Jz^2, (J+^2+h.c.)/2}; derivative
/// (N/8)(N/4+1) sin(2 theta1) (1,-1,0,0).
GradiometryMoment gradiometry_moment_matrix(int n_particles, double theta1);

/// Checks e^{-i pi/2 Jx} e^{-i t2 Jz} e^{i pi/2 Jx} e^{i pi/2 Jx} e^{-i t1 Jz}
/// e^{-i pi/2 Jx} = e^{-i(t1-t2) Jy} on the two-mode sector, in Frobenius norm.
bool sequential_identity_check(int n_particles, double theta1, double theta2,
                               double tol = 1e-10);

} // namespace dicke
