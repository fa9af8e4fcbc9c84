#pragma once

#include "dicke/states.hpp"

#include <vector>

namespace dicke {

/// Probe for a unitary family e^{-i theta G}: either a pure state or a
/// Dicke-diagonal mixture in one sector.
struct Probe {
    SpinSector sector;
    VectorXcd amplitudes; // nonempty for pure probes
    VectorXd weights;     // nonempty for diagonal mixtures

    static Probe pure(const PureState& s) { return {s.sector, s.amplitudes, {}}; }
    static Probe mixed(const DickeMixture& m) { return {m.sector, {}, m.weights}; }
    bool is_pure() const { return amplitudes.size() > 0; }
};

/// Block-diagonal ensemble across sectors (weights over Dicke projectors per
/// sector; total weight 1). Used for the pair-local reduction of lossy
/// four-mode probes.
struct SectorBlock {
    SpinSector sector;
    VectorXd weights;
};
using BlockEnsemble = std::vector<SectorBlock>;

/// QFI of a pure state under generator G: 4(<G^2> - <G>^2). Theta-independent
/// for unitary families.
double qfi_pure(const PureState& state, const MatrixXcd& generator);

/// Spectral QFI of a state diagonal in the basis the generator is written in:
/// 2 sum_{j,k} (l_j - l_k)^2/(l_j + l_k) |G_jk|^2, pairs with
/// l_j + l_k <= support_tol dropped.
double qfi_spectral_diagonal(const VectorXd& weights, const MatrixXcd& generator,
                             double support_tol = 1e-12);

double qfi_mixed(const DickeMixture& mixture, const MatrixXcd& generator,
                 double support_tol = 1e-12);

/// Fast path for generator = sector J_y: the mixture eigenvectors are Dicke
/// vectors and J_y couples adjacent indices only, so the spectral sum is O(dim).
double qfi_mixed_jy(const SpinSector& sector, const VectorXd& weights,
                    double support_tol = 1e-12);
double qfi_mixed_jy(const DickeMixture& mixture, double support_tol = 1e-12);

/// QFI matrix of a pure state under commuting generators:
/// F_ij = 4 Re Cov(G_i, G_j). Throws if the generators fail to commute.
Eigen::MatrixXd qfi_matrix(const PureState& state,
                           const std::vector<MatrixXcd>& generators);

/// QFI matrix of a state diagonal in the basis the generators are written in:
/// F_ij = 2 sum (l_a - l_b)^2/(l_a + l_b) Re[(G_i)_ab (G_j)_ba].
Eigen::MatrixXd qfi_matrix_diagonal(const VectorXd& weights,
                                    const std::vector<MatrixXcd>& generators,
                                    double support_tol = 1e-12);

/// Classical FI of a projective measurement on the rotated probe:
/// sum_l q^{-1} (dq/dtheta)^2 with a central finite difference (default step
/// 1e-5 rad); outcomes with q < 1e-14 dropped. The measurement must be a
/// complete orthonormal basis (checked to 1e-10).
double classical_fisher(const Probe& probe, const MatrixXcd& generator,
                        const std::vector<VectorXcd>& measurement, double theta,
                        double fd_step = 1e-5);

/// Number-basis (Jz eigenbasis) measurement.
double classical_fisher_number_basis(const Probe& probe, const MatrixXcd& generator,
                                     double theta, double fd_step = 1e-5);

struct MomError {
    double value = 0.0;
    bool infinite = false; // derivative vanishes at this theta
};

/// Method-of-moments error Var(A)/(d<A>/dtheta)^2 at theta, with the exact
/// commutator derivative d<A>/dtheta = i<[G,A]>.
MomError mom_error(const Probe& probe, const MatrixXcd& generator,
                   const MatrixXcd& observable, double theta);

struct Jz2MomentLimits {
    double error_at_zero = 0.0; // theta->0 method-of-moments error of Jz^2
    double ratio_to_qfi = 0.0;  // (1 - 2m^2/(N^2/4 - m^2 + N/2))^2 / (4m^2 + 1)
    bool degenerate = false;    // derivative prefactor N^2/4 - 3m^2 + N/2 = 0
};

/// Closed forms for the Jz^2 readout on the Dicke probe |N/2+m, N/2-m>.
Jz2MomentLimits jz2_moment_limits(int n_particles, double imbalance_m);

struct MomentMatrixResult {
    Eigen::VectorXd derivative;  // d<O_i>/dtheta
    Eigen::MatrixXd covariance;  // Jordan-symmetrized
    double snr = 0.0;            // d Cov^+ d^T
    bool limit_convention_used = false; // removable 0/0 point, value from theta +- 1e-3
    bool zero_information = false;      // derivative outside retained covariance range
};

/// Generalized signal-to-noise ratio of an observable list. Covariance
/// eigenvalues below cov_cutoff x max are truncated (pseudo-inverse). When
/// truncation removes directions (the covariance degenerates exactly where
/// the matching signal components vanish, sin 2theta = 0 for these probes),
/// the removable 0/0 limit is taken from theta +- 1e-3 and flagged if it
/// differs from the direct value. Full accuracy between the degenerate
/// points needs |sin 2theta| >~ 1e-4.
MomentMatrixResult generalized_snr(const Probe& probe,
                                   const std::vector<MatrixXcd>& observables,
                                   const MatrixXcd& generator, double theta,
                                   double cov_cutoff = 1e-10);

/// Same quadratic form for a multi-sector ensemble; observables are built per
/// sector from the kind list and the generator is each sector's J_y.
MomentMatrixResult generalized_snr_blocks(const BlockEnsemble& blocks,
                                          const std::vector<ObservableKind>& kinds,
                                          double theta, double cov_cutoff = 1e-10);

/// One-shot Bayesian posterior for the phase-diffused probe: likelihood
/// L(theta) = |<ref| e^{-i(theta - theta_true) Jy} |psi_N(chi)>|^2 with
/// ref = e^{-i pi/2 Jy}|N/2,N/2>, normalized on the grid by the trapezoid
/// rule. Empty prior means uniform.
Eigen::VectorXd bayes_posterior(SpinSector sector, double chi, double theta_true,
                                const Eigen::VectorXd& theta_grid,
                                const Eigen::VectorXd& prior = {});

/// qfi_pure of phase_diffused(N, chi) with generator J_y, per grid point.
Eigen::VectorXd qfi_vs_chi(SpinSector sector, const Eigen::VectorXd& chi_grid);

} // namespace dicke
