#pragma once

#include "dicke/spin_algebra.hpp"
#include "dicke/spin_sector.hpp"

namespace dicke {

/// Pure two-mode state: complex amplitude vector over the Dicke basis.
/// Unit 2-norm (1e-12) enforced on construction.
struct PureState {
    SpinSector sector;
    VectorXcd amplitudes;

    PureState() = default;
    PureState(SpinSector s, VectorXcd a);
};

/// Diagonal mixed state: probability weights over Dicke projectors of one
/// sector (the lossy probe rho_{N,K}). Weights >= 0, sum 1 (1e-12).
struct DickeMixture {
    SpinSector sector;
    VectorXd weights;

    DickeMixture() = default;
    DickeMixture(SpinSector s, VectorXd w);
};

/// |N/2 - m mode-b occupation>, i.e. the Dicke state with Jz eigenvalue m.
/// m = 0 gives the twin Fock state (N even).
PureState dicke_state(SpinSector sector, double imbalance_m);

/// One-axis twisted probe e^{-i t Jz^2} |+x coherent>.
PureState oat_state(SpinSector sector, double t);

/// Phase-diffused probe e^{-i chi Jz^2} e^{-i pi/2 Jy} |N/2,N/2>. N must be even.
PureState phase_diffused(SpinSector sector, double chi);

/// <psi|phi| overlap modulus (global-phase-free comparison).
double overlap_modulus(const PureState& a, const PureState& b);

} // namespace dicke
