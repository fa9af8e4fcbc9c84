#include "dicke/loss.hpp"

#include <sstream>

namespace dicke {

Eigen::MatrixXd loss_step_matrix(int n_k, int m_support) {
    if (n_k < 1)
        throw std::invalid_argument("loss_step_matrix: cannot lose a particle from vacuum (n_k < 1)");
    if (m_support < 0)
        throw std::invalid_argument("loss_step_matrix: negative support");
    const int d = m_support + 1;
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(d, d);
    for (int r = 0; r < d; ++r) {
        q(r, r) = 1.0 - static_cast<double>(r) / n_k; // 1-based (i,i) = 1-(i-1)/n_k
        if (r + 1 < d)
            q(r, r + 1) = static_cast<double>(r + 1) / n_k; // (i,i+1) = i/n_k
    }
    return q;
}

LossChain build_loss_chain(int n_particles, int start_index, int loss_count) {
    if (start_index < 0 || start_index > n_particles)
        throw std::invalid_argument("build_loss_chain: start index outside sector");
    if (loss_count < 0 || loss_count >= n_particles - start_index) {
        std::ostringstream os;
        os << "build_loss_chain: need 0 <= K < N - m, got K=" << loss_count
           << " N=" << n_particles << " m=" << start_index;
        throw std::invalid_argument(os.str());
    }
    LossChain chain;
    chain.start_particles = n_particles;
    chain.start_index = start_index;
    chain.loss_count = loss_count;
    chain.steps.reserve(loss_count);
    for (int k = 0; k < loss_count; ++k)
        chain.steps.push_back(loss_step_matrix(n_particles - k, start_index));
    return chain;
}

DickeMixture apply_loss(int n_particles, int start_index, int loss_count) {
    const LossChain chain = build_loss_chain(n_particles, start_index, loss_count);
    Eigen::VectorXd p = Eigen::VectorXd::Zero(start_index + 1);
    p(start_index) = 1.0;
    for (const auto& q : chain.steps)
        p = q * p;
    const SpinSector out(n_particles - loss_count);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(out.dim());
    w.head(start_index + 1) = p;
    return DickeMixture(out, std::move(w));
}

double FourModeWeights::sum() const {
    double s = 0.0;
    for (const auto& [t, p] : weights)
        s += p;
    return s;
}

FourModeWeights four_mode_loss(const std::array<int, 4>& start, int loss_count) {
    int total = 0;
    for (int v : start) {
        if (v < 0)
            throw std::invalid_argument("four_mode_loss: negative occupation");
        total += v;
    }
    if (loss_count < 0 || loss_count >= total)
        throw std::invalid_argument("four_mode_loss: need 0 <= K < ||start||_1");

    FourModeWeights out;
    out.weights[start] = 1.0;
    out.total_particles = total;
    for (int k = 0; k < loss_count; ++k) {
        const double norm = static_cast<double>(total - k);
        std::map<std::array<int, 4>, double> next;
        for (const auto& [t, p] : out.weights) {
            for (int j = 0; j < 4; ++j) {
                if (t[j] == 0)
                    continue;
                std::array<int, 4> t2 = t;
                --t2[j];
                next[t2] += p * t[j] / norm;
            }
        }
        out.weights = std::move(next);
        out.total_particles = total - k - 1;
    }
    return out;
}

} // namespace dicke
