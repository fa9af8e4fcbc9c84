#pragma once

// Brute-force first-quantized reference implementations used to validate the
// loss Markov chain, channel/rotation commutativity, and small-N QFI values.
// Test-only; hard size caps keep the d^N representations small.

#include "dicke/spin_algebra.hpp"

#include <array>
#include <map>

namespace dicke::oracle {

/// Per-particle tensor representation of a permutation-symmetric state.
/// Pure states carry the d^N amplitude vector; mixed states the dense d^N
/// density matrix.
struct FirstQuantizedState {
    int n_particles = 0;
    int local_dim = 2; // 2 = two-mode, 4 = four-mode
    VectorXcd psi;     // nonempty for pure states
    MatrixXcd rho;     // nonempty for mixed states

    bool is_pure() const { return psi.size() > 0; }
    MatrixXcd density() const;
    long long dim() const;
};

/// Uniform superposition over Hamming-weight-n strings of N qubits.
/// Cap: N <= 10.
FirstQuantizedState symmetrize_dicke(int n_particles, int occupation_b);

/// Symmetrized four-mode state with the given occupation tuple. Cap: total <= 6.
FirstQuantizedState symmetrize_four_mode(const std::array<int, 4>& occupation);

/// Partial trace over the last k particle slots.
FirstQuantizedState trace_out_particles(const FirstQuantizedState& state, int k);

/// Partial trace over one chosen slot (0-based); used for the
/// permutation-symmetry checks.
FirstQuantizedState trace_out_particle_at(const FirstQuantizedState& state, int slot);

/// Dicke-projector weights <N-n,n| rho |N-n,n> of a two-mode state.
Eigen::VectorXd dicke_weights(const FirstQuantizedState& state);

/// Occupation-tuple weights of a four-mode state.
std::map<std::array<int, 4>, double> four_mode_weights(const FirstQuantizedState& state);

/// Collective rotation e^{-i phi n.J} with J = sum over particles of sigma/2
/// (two-mode states only).
FirstQuantizedState rotate_collective(const FirstQuantizedState& state, double phi,
                                      const Eigen::Vector3d& axis);

/// Reduced one-particle density matrix (trace over all but the first slot).
Eigen::MatrixXcd one_particle_state(const FirstQuantizedState& state);

} // namespace dicke::oracle
