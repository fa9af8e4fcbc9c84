#pragma once

#include "dicke/states.hpp"

#include <array>
#include <map>

namespace dicke {

/// One step of the particle-loss Markov chain: the (m+1)x(m+1) bidiagonal
/// column-stochastic matrix of weights flowing from Dicke index i to i and
/// i-1 when one particle is lost out of n_k. 1-based elements
/// (Q)_{i,i} = 1-(i-1)/n_k, (Q)_{i,i+1} = i/n_k.
Eigen::MatrixXd loss_step_matrix(int n_k, int m_support);

/// Chain of step matrices for loss of K particles starting from N with start
/// Dicke index m (support {0..m}).
struct LossChain {
    int start_particles = 0;
    int start_index = 0;
    int loss_count = 0;
    std::vector<Eigen::MatrixXd> steps; // Q_0 .. Q_{K-1}
};

LossChain build_loss_chain(int n_particles, int start_index, int loss_count);

/// E_K applied to the Dicke state with occupation index start_index
/// (start_index = N/2 for the twin Fock probe): the weight vector p_K over
/// Dicke indices 0..start_index of sector N-K, zero-padded to dim N-K+1.
/// Requires loss_count < n_particles - start_index.
DickeMixture apply_loss(int n_particles, int start_index, int loss_count);

/// Sparse probability map over occupation 4-tuples (n_a1, n_b1, n_a2, n_b2);
/// all tuples carry the same total particle number.
struct FourModeWeights {
    int total_particles = 0;
    std::map<std::array<int, 4>, double> weights;

    double sum() const;
};

/// Loss of K particles from a four-mode Fock state: each step moves weight
/// from tuple l to l - e_j with probability l_j / |l|.
FourModeWeights four_mode_loss(const std::array<int, 4>& start, int loss_count);

} // namespace dicke
