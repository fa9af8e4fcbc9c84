#include "dicke/metrology.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace dicke {

namespace {

// sum_n w_n Re[(A)_nn]
double weighted_real_diag(const VectorXd& w, const MatrixXcd& a) {
    double s = 0.0;
    for (int n = 0; n < w.size(); ++n)
        s += w(n) * std::real(a(n, n));
    return s;
}

MatrixXcd commutator_derivative(const MatrixXcd& g, const MatrixXcd& a) {
    return cxd(0.0, 1.0) * (g * a - a * g);
}

struct Moments {
    Eigen::VectorXd mean;
    Eigen::VectorXd deriv;
    Eigen::MatrixXd cov; // Jordan-symmetrized
};

// First and symmetrized second moments of the observable list on the rotated
// probe, plus the exact commutator derivatives.
Moments observable_moments(const Probe& probe, const std::vector<MatrixXcd>& obs,
                           const UnitaryFactor& gen_factor, const MatrixXcd& generator,
                           double theta) {
    const int nobs = static_cast<int>(obs.size());
    Moments out;
    out.mean.resize(nobs);
    out.deriv.resize(nobs);
    out.cov.resize(nobs, nobs);

    if (probe.is_pure()) {
        const VectorXcd psi = gen_factor.evolve(theta, probe.amplitudes);
        std::vector<VectorXcd> opsi(nobs);
        for (int i = 0; i < nobs; ++i) {
            opsi[i] = obs[i] * psi;
            out.mean(i) = std::real(psi.dot(opsi[i]));
            out.deriv(i) = std::real(psi.dot(commutator_derivative(generator, obs[i]) * psi));
        }
        for (int i = 0; i < nobs; ++i)
            for (int j = i; j < nobs; ++j) {
                const double sym = std::real(opsi[i].dot(opsi[j]));
                const double c = sym - out.mean(i) * out.mean(j);
                out.cov(i, j) = c;
                out.cov(j, i) = c;
            }
        return out;
    }

    const MatrixXcd u = gen_factor.evolve(theta);
    std::vector<MatrixXcd> rot(nobs); // U^dag O U
    for (int i = 0; i < nobs; ++i) {
        rot[i] = u.adjoint() * obs[i] * u;
        out.mean(i) = weighted_real_diag(probe.weights, rot[i]);
        out.deriv(i) = weighted_real_diag(
            probe.weights, u.adjoint() * commutator_derivative(generator, obs[i]) * u);
    }
    for (int i = 0; i < nobs; ++i)
        for (int j = i; j < nobs; ++j) {
            // diag of the Jordan product: Re diag(rot_i rot_j) for Hermitian factors
            const MatrixXcd prod = rot[i] * rot[j];
            const double sym = weighted_real_diag(probe.weights, prod);
            const double c = sym - out.mean(i) * out.mean(j);
            out.cov(i, j) = c;
            out.cov(j, i) = c;
        }
    return out;
}

MomentMatrixResult snr_from_moments(const Moments& m, double cov_cutoff,
                                    bool* truncated = nullptr) {
    MomentMatrixResult res;
    res.derivative = m.deriv;
    res.covariance = m.cov;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.cov);
    const Eigen::VectorXd ev = es.eigenvalues();
    const Eigen::MatrixXd v = es.eigenvectors();
    const double mx = std::max(ev.maxCoeff(), 0.0);
    if (mx <= 0.0) {
        res.zero_information = m.deriv.squaredNorm() > 0.0;
        if (truncated)
            *truncated = true;
        return res;
    }
    double snr = 0.0;
    double kept_proj = 0.0;
    bool any_truncated = false;
    for (int i = 0; i < ev.size(); ++i) {
        if (ev(i) > cov_cutoff * mx) {
            const double p = v.col(i).dot(m.deriv);
            snr += p * p / ev(i);
            kept_proj += p * p;
        } else {
            any_truncated = true;
        }
    }
    res.snr = snr;
    const double dn = m.deriv.squaredNorm();
    if (dn > 0.0 && kept_proj <= 1e-20 * dn)
        res.zero_information = true;
    if (truncated)
        *truncated = any_truncated;
    return res;
}

} // namespace

double qfi_pure(const PureState& state, const MatrixXcd& generator) {
    if (generator.rows() != state.sector.dim())
        throw std::invalid_argument("qfi_pure: generator dimension mismatch");
    const VectorXcd gpsi = generator * state.amplitudes;
    const double g2 = std::real(gpsi.dot(gpsi));
    const double g1 = std::real(state.amplitudes.dot(gpsi));
    return 4.0 * (g2 - g1 * g1);
}

double qfi_spectral_diagonal(const VectorXd& weights, const MatrixXcd& generator,
                             double support_tol) {
    const int d = static_cast<int>(weights.size());
    if (generator.rows() != d || generator.cols() != d)
        throw std::invalid_argument("qfi_spectral_diagonal: dimension mismatch");
    double f = 0.0;
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            const double den = weights(i) + weights(j);
            if (den <= support_tol)
                continue;
            const double num = weights(i) - weights(j);
            f += 4.0 * (num * num / den) * std::norm(generator(i, j));
        }
    }
    return f;
}

double qfi_mixed(const DickeMixture& mixture, const MatrixXcd& generator,
                 double support_tol) {
    if (generator.rows() != mixture.sector.dim())
        throw std::invalid_argument("qfi_mixed: generator dimension mismatch");
    return qfi_spectral_diagonal(mixture.weights, generator, support_tol);
}

double qfi_mixed_jy(const SpinSector& sector, const VectorXd& weights,
                    double support_tol) {
    const int d = sector.dim();
    if (weights.size() != d)
        throw std::invalid_argument("qfi_mixed_jy: weight dimension mismatch");
    if (std::abs(weights.sum() - 1.0) > 1e-10)
        throw std::invalid_argument("qfi_mixed_jy: weights not normalized");
    const double j = sector.spin_j();
    double f = 0.0;
    for (int n = 0; n + 1 < d; ++n) {
        const double den = weights(n) + weights(n + 1);
        if (den <= support_tol)
            continue;
        const double num = weights(n) - weights(n + 1);
        const double m = sector.jz_eigenvalue(n + 1);
        const double csq = j * (j + 1.0) - m * (m + 1.0); // |<n|J+|n+1>|^2
        f += 4.0 * (num * num / den) * 0.25 * csq;        // |<n|Jy|n+1>|^2 = csq/4
    }
    return f;
}

double qfi_mixed_jy(const DickeMixture& mixture, double support_tol) {
    return qfi_mixed_jy(mixture.sector, mixture.weights, support_tol);
}

Eigen::MatrixXd qfi_matrix(const PureState& state,
                           const std::vector<MatrixXcd>& generators) {
    const int k = static_cast<int>(generators.size());
    if (k == 0)
        throw std::invalid_argument("qfi_matrix: empty generator list");
    const double scale_tol = 1e-10;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            const MatrixXcd comm = generators[i] * generators[j] - generators[j] * generators[i];
            const double scale =
                std::max(1.0, generators[i].cwiseAbs().maxCoeff() *
                                  generators[j].cwiseAbs().maxCoeff());
            if (comm.cwiseAbs().maxCoeff() > scale_tol * scale)
                throw std::invalid_argument(
                    "qfi_matrix: pure-covariance path requires commuting generators");
        }
    Eigen::MatrixXd f(k, k);
    std::vector<VectorXcd> gpsi(k);
    Eigen::VectorXd mean(k);
    for (int i = 0; i < k; ++i) {
        gpsi[i] = generators[i] * state.amplitudes;
        mean(i) = std::real(state.amplitudes.dot(gpsi[i]));
    }
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) {
            const double v = 4.0 * (std::real(gpsi[i].dot(gpsi[j])) - mean(i) * mean(j));
            f(i, j) = v;
            f(j, i) = v;
        }
    return f;
}

Eigen::MatrixXd qfi_matrix_diagonal(const VectorXd& weights,
                                    const std::vector<MatrixXcd>& generators,
                                    double support_tol) {
    const int k = static_cast<int>(generators.size());
    if (k == 0)
        throw std::invalid_argument("qfi_matrix_diagonal: empty generator list");
    const int d = static_cast<int>(weights.size());
    for (const auto& g : generators)
        if (g.rows() != d || g.cols() != d)
            throw std::invalid_argument("qfi_matrix_diagonal: generator dimension mismatch");
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(k, k);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            const double den = weights(a) + weights(b);
            if (den <= support_tol)
                continue;
            const double num = weights(a) - weights(b);
            const double factor = 2.0 * num * num / den;
            for (int i = 0; i < k; ++i)
                for (int j = i; j < k; ++j) {
                    const double v =
                        factor * std::real(generators[i](a, b) * generators[j](b, a));
                    f(i, j) += v;
                    if (j != i)
                        f(j, i) += v;
                }
        }
    return f;
}

namespace {

// outcome probabilities of a projective measurement on the rotated probe
Eigen::VectorXd outcome_probs(const Probe& probe, const UnitaryFactor& gen_factor,
                              const MatrixXcd& basis_adjoint, double theta) {
    if (probe.is_pure()) {
        const VectorXcd psi = gen_factor.evolve(theta, probe.amplitudes);
        return (basis_adjoint * psi).cwiseAbs2();
    }
    const MatrixXcd u = gen_factor.evolve(theta);
    const MatrixXcd amp = basis_adjoint * u; // amp(l, n) = <b_l|U|n>
    return amp.cwiseAbs2() * probe.weights;
}

} // namespace

double classical_fisher(const Probe& probe, const MatrixXcd& generator,
                        const std::vector<VectorXcd>& measurement, double theta,
                        double fd_step) {
    const int d = probe.sector.dim();
    const int nout = static_cast<int>(measurement.size());
    MatrixXcd basis(d, nout);
    for (int l = 0; l < nout; ++l) {
        if (measurement[l].size() != d)
            throw std::invalid_argument("classical_fisher: measurement vector dimension mismatch");
        basis.col(l) = measurement[l];
    }
    const MatrixXcd completeness = basis * basis.adjoint();
    if ((completeness - MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("classical_fisher: measurement does not resolve the identity");

    const UnitaryFactor factor(generator);
    const MatrixXcd basis_adj = basis.adjoint();
    const Eigen::VectorXd q0 = outcome_probs(probe, factor, basis_adj, theta);
    const Eigen::VectorXd qp = outcome_probs(probe, factor, basis_adj, theta + fd_step);
    const Eigen::VectorXd qm = outcome_probs(probe, factor, basis_adj, theta - fd_step);
    double fi = 0.0;
    for (int l = 0; l < nout; ++l) {
        if (q0(l) < 1e-14)
            continue;
        const double dq = (qp(l) - qm(l)) / (2.0 * fd_step);
        fi += dq * dq / q0(l);
    }
    return fi;
}

double classical_fisher_number_basis(const Probe& probe, const MatrixXcd& generator,
                                     double theta, double fd_step) {
    const int d = probe.sector.dim();
    std::vector<VectorXcd> basis(d);
    for (int l = 0; l < d; ++l) {
        basis[l] = VectorXcd::Zero(d);
        basis[l](l) = 1.0;
    }
    return classical_fisher(probe, generator, basis, theta, fd_step);
}

MomError mom_error(const Probe& probe, const MatrixXcd& generator,
                   const MatrixXcd& observable, double theta) {
    const UnitaryFactor factor(generator);
    const Moments m =
        observable_moments(probe, {observable}, factor, generator, theta);
    const double var = m.cov(0, 0);
    const double deriv = m.deriv(0);
    MomError out;
    if (std::abs(deriv) < 1e-10 * std::max(1.0, std::abs(var))) {
        out.value = std::numeric_limits<double>::infinity();
        out.infinite = true;
        return out;
    }
    out.value = var / (deriv * deriv);
    return out;
}

Jz2MomentLimits jz2_moment_limits(int n_particles, double imbalance_m) {
    if (n_particles <= 0 || n_particles % 2 != 0)
        throw std::invalid_argument("jz2_moment_limits: N must be positive and even");
    const double N = n_particles;
    const double m = imbalance_m;
    if (std::abs(m) > N / 2.0)
        throw std::invalid_argument("jz2_moment_limits: need |m| <= N/2");

    Jz2MomentLimits res;
    const double a = N * N / 4.0 - m * m + N / 2.0;     // F(m)/2
    const double d = N * N / 4.0 - 3.0 * m * m + N / 2.0; // derivative prefactor
    const double r = 1.0 - 2.0 * m * m / a;
    res.ratio_to_qfi = r * r / (4.0 * m * m + 1.0);
    if (std::abs(d) <= 1e-12 * (N * N / 4.0 + N / 2.0)) {
        res.degenerate = true;
        res.error_at_zero = std::numeric_limits<double>::infinity();
        return res;
    }
    double s = 0.0;
    for (int u = 0; u < 2; ++u) {
        const double sign = (u == 0) ? 1.0 : -1.0;
        const double f = 1.0 + sign * 2.0 * m;
        s += f * f * (N / 2.0 + sign * m + 1.0) * (N / 2.0 - sign * m);
    }
    res.error_at_zero = s / (4.0 * d * d);
    return res;
}

MomentMatrixResult generalized_snr(const Probe& probe,
                                   const std::vector<MatrixXcd>& observables,
                                   const MatrixXcd& generator, double theta,
                                   double cov_cutoff) {
    if (observables.empty())
        throw std::invalid_argument("generalized_snr: empty observable list");
    const UnitaryFactor factor(generator);
    const Moments m = observable_moments(probe, observables, factor, generator, theta);
    bool truncated = false;
    MomentMatrixResult res = snr_from_moments(m, cov_cutoff, &truncated);
    if (!truncated)
        return res;

    // A truncated covariance direction signals a (possibly partial) 0/0 point:
    // signal and noise vanish together there while their ratio stays finite.
    // Take the two-sided limit; keep the direct value when it already agrees.
    const double delta = 1e-3;
    const Moments mp =
        observable_moments(probe, observables, factor, generator, theta + delta);
    const Moments mm =
        observable_moments(probe, observables, factor, generator, theta - delta);
    const double limit =
        0.5 * (snr_from_moments(mp, cov_cutoff).snr + snr_from_moments(mm, cov_cutoff).snr);
    if (std::abs(limit - res.snr) > 1e-6 * std::max({1.0, limit, res.snr})) {
        res.snr = limit;
        res.limit_convention_used = true;
        res.zero_information = false;
    }
    return res;
}

MomentMatrixResult generalized_snr_blocks(const BlockEnsemble& blocks,
                                          const std::vector<ObservableKind>& kinds,
                                          double theta, double cov_cutoff) {
    if (blocks.empty())
        throw std::invalid_argument("generalized_snr_blocks: empty ensemble");
    if (kinds.empty())
        throw std::invalid_argument("generalized_snr_blocks: empty observable list");
    double total = 0.0;
    for (const auto& b : blocks)
        total += b.weights.sum();
    if (std::abs(total - 1.0) > 1e-10)
        throw std::invalid_argument("generalized_snr_blocks: ensemble weight not 1");

    const int nobs = static_cast<int>(kinds.size());
    auto accumulate = [&](double th, Moments& acc) {
        acc.mean = Eigen::VectorXd::Zero(nobs);
        acc.deriv = Eigen::VectorXd::Zero(nobs);
        Eigen::MatrixXd second = Eigen::MatrixXd::Zero(nobs, nobs);
        for (const auto& block : blocks) {
            const double bw = block.weights.sum();
            if (bw <= 0.0)
                continue;
            std::vector<MatrixXcd> obs(nobs);
            for (int i = 0; i < nobs; ++i)
                obs[i] = build_observable(block.sector, kinds[i]);
            const SpinOperators ops = build_spin_operators(block.sector);
            Probe p;
            p.sector = block.sector;
            p.weights = block.weights / bw;
            const UnitaryFactor factor(ops.jy);
            const Moments m = observable_moments(p, obs, factor, ops.jy, th);
            acc.mean += bw * m.mean;
            acc.deriv += bw * m.deriv;
            // recover the raw symmetrized second moments before re-centering
            second += bw * (m.cov + m.mean * m.mean.transpose());
        }
        acc.cov = second - acc.mean * acc.mean.transpose();
    };

    Moments m;
    accumulate(theta, m);
    bool truncated = false;
    MomentMatrixResult res = snr_from_moments(m, cov_cutoff, &truncated);
    if (!truncated)
        return res;
    const double delta = 1e-3;
    Moments mp, mm;
    accumulate(theta + delta, mp);
    accumulate(theta - delta, mm);
    const double limit = 0.5 * (snr_from_moments(mp, cov_cutoff).snr +
                                snr_from_moments(mm, cov_cutoff).snr);
    if (std::abs(limit - res.snr) > 1e-6 * std::max({1.0, limit, res.snr})) {
        res.snr = limit;
        res.limit_convention_used = true;
        res.zero_information = false;
    }
    return res;
}

Eigen::VectorXd bayes_posterior(SpinSector sector, double chi, double theta_true,
                                const Eigen::VectorXd& theta_grid,
                                const Eigen::VectorXd& prior) {
    const int npts = static_cast<int>(theta_grid.size());
    if (npts < 2)
        throw std::invalid_argument("bayes_posterior: need at least 2 grid points");
    for (int i = 1; i < npts; ++i)
        if (theta_grid(i) <= theta_grid(i - 1))
            throw std::invalid_argument("bayes_posterior: grid must be strictly increasing");
    if (prior.size() != 0 && prior.size() != npts)
        throw std::invalid_argument("bayes_posterior: prior size mismatch");

    const SpinOperators ops = build_spin_operators(sector);
    const UnitaryFactor jy(ops.jy);
    const PureState probe = phase_diffused(sector, chi);
    const VectorXcd ref = jy.evolve(std::numbers::pi / 2.0,
                                    dicke_state(sector, 0.0).amplitudes);
    Eigen::VectorXd post(npts);
    for (int i = 0; i < npts; ++i) {
        const VectorXcd rotated = jy.evolve(theta_grid(i) - theta_true, probe.amplitudes);
        const double like = std::norm(ref.dot(rotated));
        post(i) = (prior.size() ? prior(i) : 1.0) * like;
    }
    double integral = 0.0;
    for (int i = 0; i + 1 < npts; ++i)
        integral += 0.5 * (post(i) + post(i + 1)) * (theta_grid(i + 1) - theta_grid(i));
    if (integral <= 0.0)
        throw std::runtime_error("bayes_posterior: likelihood integrates to zero");
    return post / integral;
}

Eigen::VectorXd qfi_vs_chi(SpinSector sector, const Eigen::VectorXd& chi_grid) {
    if (sector.n_particles % 2 != 0)
        throw std::invalid_argument("qfi_vs_chi: N must be even");
    const SpinOperators ops = build_spin_operators(sector);
    const UnitaryFactor jy(ops.jy);
    const VectorXcd rotated_tf =
        jy.evolve(std::numbers::pi / 2.0, dicke_state(sector, 0.0).amplitudes);
    Eigen::VectorXd out(chi_grid.size());
    for (int i = 0; i < chi_grid.size(); ++i) {
        VectorXcd a = rotated_tf;
        for (int n = 0; n < sector.dim(); ++n) {
            const double m = sector.jz_eigenvalue(n);
            const double phi = -chi_grid(i) * m * m;
            a(n) *= cxd(std::cos(phi), std::sin(phi));
        }
        a /= a.norm();
        out(i) = qfi_pure(PureState(sector, std::move(a)), ops.jy);
    }
    return out;
}

} // namespace dicke
