#include "dicke/experiments.hpp"
#include "dicke/loss.hpp"
#include "dicke/metrology.hpp"
#include "dicke/multimode.hpp"
#include "dicke/spin_algebra.hpp"
#include "dicke/states.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace dicke;

namespace {

PureState make_pure(int n, const VectorXcd& amplitudes) {
    return PureState(SpinSector(n), amplitudes);
}

DickeMixture make_mixture(int n, const VectorXd& weights) {
    return DickeMixture(SpinSector(n), weights);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fisher information, method-of-moments and loss-channel numerics "
              "for twin Fock / Dicke interferometry";

    // ---- spin algebra ----
    m.def(
        "spin_operators",
        [](int n) {
            const SpinOperators ops = build_spin_operators(SpinSector(n));
            py::dict d;
            d["jx"] = ops.jx;
            d["jy"] = ops.jy;
            d["jz"] = ops.jz;
            d["jplus"] = ops.jplus;
            d["jminus"] = ops.jminus;
            return d;
        },
        py::arg("n"), "Collective spin operators in the (N+1)-dim Dicke basis");
    m.def(
        "rotation", [](const MatrixXcd& g, double angle) { return rotation(g, angle); },
        py::arg("generator"), py::arg("angle"), "e^{-i angle G} for Hermitian G");
    m.def(
        "parity", [](int n) { return parity_operator(SpinSector(n)); }, py::arg("n"));
    m.def(
        "quadratic_observables",
        [](int n) { return quadratic_observables(SpinSector(n)); }, py::arg("n"),
        "{Jz^2, (J+^2+h.c.)/2, (Jz J+ + h.c.)/2, Jx}");
    m.def(
        "phase_basis",
        [](int n) {
            const auto basis = phase_basis(SpinSector(n));
            py::list out;
            for (const auto& v : basis)
                out.append(v);
            return out;
        },
        py::arg("n"), "J_y phase basis vectors");

    // ---- states ----
    m.def(
        "dicke_state",
        [](int n, double m) { return dicke_state(SpinSector(n), m).amplitudes; },
        py::arg("n"), py::arg("m") = 0.0, "Dicke state amplitudes for imbalance m");
    m.def(
        "oat_state", [](int n, double t) { return oat_state(SpinSector(n), t).amplitudes; },
        py::arg("n"), py::arg("t"));
    m.def(
        "phase_diffused",
        [](int n, double chi) { return phase_diffused(SpinSector(n), chi).amplitudes; },
        py::arg("n"), py::arg("chi"));

    // ---- loss ----
    m.def("loss_step_matrix", &loss_step_matrix, py::arg("n_k"), py::arg("m_support"));
    m.def(
        "apply_loss",
        [](int n, int start_index, int k) { return apply_loss(n, start_index, k).weights; },
        py::arg("n"), py::arg("start_index"), py::arg("k"),
        "Dicke weights of E_K applied to |N-m, m| (start_index = mode-b occupation)");
    m.def(
        "four_mode_loss",
        [](const std::array<int, 4>& start, int k) {
            const FourModeWeights w = four_mode_loss(start, k);
            py::dict d;
            for (const auto& [t, p] : w.weights)
                d[py::make_tuple(t[0], t[1], t[2], t[3])] = p;
            return d;
        },
        py::arg("start"), py::arg("k"));

    // ---- metrology ----
    m.def(
        "qfi_pure",
        [](int n, const VectorXcd& amplitudes, const MatrixXcd& g) {
            return qfi_pure(make_pure(n, amplitudes), g);
        },
        py::arg("n"), py::arg("amplitudes"), py::arg("generator"));
    m.def(
        "qfi_mixed",
        [](int n, const VectorXd& weights, const MatrixXcd& g, double support_tol) {
            return qfi_mixed(make_mixture(n, weights), g, support_tol);
        },
        py::arg("n"), py::arg("weights"), py::arg("generator"),
        py::arg("support_tol") = 1e-12);
    m.def(
        "qfi_mixed_jy",
        [](int n, const VectorXd& weights, double support_tol) {
            return qfi_mixed_jy(SpinSector(n), weights, support_tol);
        },
        py::arg("n"), py::arg("weights"), py::arg("support_tol") = 1e-12);
    m.def(
        "qfi_matrix",
        [](int n, const VectorXcd& amplitudes, const std::vector<MatrixXcd>& gens) {
            return qfi_matrix(make_pure(n, amplitudes), gens);
        },
        py::arg("n"), py::arg("amplitudes"), py::arg("generators"));
    m.def("qfi_matrix_diagonal", &qfi_matrix_diagonal, py::arg("weights"),
          py::arg("generators"), py::arg("support_tol") = 1e-12);
    m.def(
        "classical_fisher_number_basis",
        [](int n, const VectorXd& weights, const MatrixXcd& g, double theta, double h) {
            return classical_fisher_number_basis(Probe::mixed(make_mixture(n, weights)), g,
                                                 theta, h);
        },
        py::arg("n"), py::arg("weights"), py::arg("generator"), py::arg("theta"),
        py::arg("fd_step") = 1e-5);
    m.def(
        "mom_error",
        [](int n, const VectorXcd& amplitudes, const MatrixXcd& g, const MatrixXcd& a,
           double theta) {
            const MomError e = mom_error(Probe::pure(make_pure(n, amplitudes)), g, a, theta);
            return py::make_tuple(e.value, e.infinite);
        },
        py::arg("n"), py::arg("amplitudes"), py::arg("generator"), py::arg("observable"),
        py::arg("theta"), "(error, derivative_vanished)");
    m.def(
        "jz2_moment_limits",
        [](int n, double m) {
            const Jz2MomentLimits r = jz2_moment_limits(n, m);
            py::dict d;
            d["error_at_zero"] = r.error_at_zero;
            d["ratio_to_qfi"] = r.ratio_to_qfi;
            d["degenerate"] = r.degenerate;
            return d;
        },
        py::arg("n"), py::arg("m"));
    m.def(
        "generalized_snr_pure",
        [](int n, const VectorXcd& amplitudes, const std::vector<MatrixXcd>& obs,
           const MatrixXcd& g, double theta) {
            const MomentMatrixResult r =
                generalized_snr(Probe::pure(make_pure(n, amplitudes)), obs, g, theta);
            py::dict d;
            d["snr"] = r.snr;
            d["derivative"] = r.derivative;
            d["covariance"] = r.covariance;
            d["limit_convention_used"] = r.limit_convention_used;
            d["zero_information"] = r.zero_information;
            return d;
        },
        py::arg("n"), py::arg("amplitudes"), py::arg("observables"), py::arg("generator"),
        py::arg("theta"));
    m.def(
        "generalized_snr_mixed",
        [](int n, const VectorXd& weights, const std::vector<MatrixXcd>& obs,
           const MatrixXcd& g, double theta) {
            const MomentMatrixResult r =
                generalized_snr(Probe::mixed(make_mixture(n, weights)), obs, g, theta);
            py::dict d;
            d["snr"] = r.snr;
            d["derivative"] = r.derivative;
            d["covariance"] = r.covariance;
            d["limit_convention_used"] = r.limit_convention_used;
            d["zero_information"] = r.zero_information;
            return d;
        },
        py::arg("n"), py::arg("weights"), py::arg("observables"), py::arg("generator"),
        py::arg("theta"));
    m.def(
        "bayes_posterior",
        [](int n, double chi, double theta_true, const VectorXd& grid, const VectorXd& prior) {
            return bayes_posterior(SpinSector(n), chi, theta_true, grid, prior);
        },
        py::arg("n"), py::arg("chi"), py::arg("theta_true"), py::arg("theta_grid"),
        py::arg("prior") = VectorXd());
    m.def(
        "qfi_vs_chi",
        [](int n, const VectorXd& grid) { return qfi_vs_chi(SpinSector(n), grid); },
        py::arg("n"), py::arg("chi_grid"));

    // ---- multimode ----
    m.def(
        "split_state",
        [](int n) {
            const FourModePure s = split_state(n);
            return py::make_tuple(s.basis->tuples(), s.amplitudes);
        },
        py::arg("n"), "(tuples, amplitudes) of the split TF probe");
    m.def(
        "doubled_tf",
        [](int n) {
            const FourModePure s = doubled_tf(n);
            return py::make_tuple(s.basis->tuples(), s.amplitudes);
        },
        py::arg("n"));
    m.def(
        "four_mode_qfi_matrix_split",
        [](int n) { return four_mode_qfi_matrix(split_state(n)); }, py::arg("n"));
    m.def(
        "four_mode_qfi_matrix_doubled",
        [](int n) { return four_mode_qfi_matrix(doubled_tf(n)); }, py::arg("n"));
    m.def("lossy_doubled_qfi11", &lossy_doubled_qfi11, py::arg("n"), py::arg("k"),
          py::arg("support_tol") = 1e-12);
    m.def(
        "gradiometry_moment_matrix",
        [](int n, double theta1) {
            const GradiometryMoment g = gradiometry_moment_matrix(n, theta1);
            py::dict d;
            d["derivative"] = g.derivative;
            d["covariance_upper"] = g.covariance_upper;
            d["m11"] = g.m11;
            d["at_degenerate_angle"] = g.at_degenerate_angle;
            return d;
        },
        py::arg("n"), py::arg("theta1"));
    m.def("sequential_identity_check", &sequential_identity_check, py::arg("n"),
          py::arg("theta1"), py::arg("theta2"), py::arg("tol") = 1e-10);

    // ---- experiments ----
    m.def(
        "run_scenario",
        [](const std::string& scenario, const py::kwargs& kwargs) {
            experiments::RunConfig c;
            c.scenario = scenario;
            if (kwargs.contains("n"))
                c.n_values = kwargs["n"].cast<std::vector<int>>();
            if (kwargs.contains("k_max"))
                c.k_max = kwargs["k_max"].cast<int>();
            if (kwargs.contains("theta_grid"))
                c.theta_grid = experiments::parse_grid(kwargs["theta_grid"].cast<std::string>());
            if (kwargs.contains("chi"))
                c.chi_values = kwargs["chi"].cast<std::vector<double>>();
            if (kwargs.contains("m"))
                c.m_values = kwargs["m"].cast<std::vector<double>>();
            if (kwargs.contains("theta1"))
                c.theta1 = kwargs["theta1"].cast<double>();
            if (kwargs.contains("workers"))
                c.workers = kwargs["workers"].cast<int>();
            const auto tables = experiments::run_scenario(c);
            py::list out;
            for (const auto& t : tables) {
                py::dict d;
                d["name"] = t.name;
                d["columns"] = t.columns;
                d["rows"] = t.rows;
                py::dict meta;
                for (const auto& [k, v] : t.metadata)
                    meta[py::str(k)] = v;
                d["metadata"] = meta;
                out.append(d);
            }
            return out;
        },
        py::arg("scenario"),
        "Run a sweep scenario (fig1a, fig1bc, fig2a, fig2b, fig2c, fig2d, qfi, mom, snr)");
}
