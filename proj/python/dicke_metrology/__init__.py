"""Fisher-information and method-of-moments numerics for Mach-Zehnder
interferometry with twin Fock / Dicke probes, including particle loss and
two-interferometer (four-mode) distributed sensing."""

from ._core import (
    apply_loss,
    bayes_posterior,
    classical_fisher_number_basis,
    dicke_state,
    doubled_tf,
    four_mode_loss,
    four_mode_qfi_matrix_doubled,
    four_mode_qfi_matrix_split,
    generalized_snr_mixed,
    generalized_snr_pure,
    gradiometry_moment_matrix,
    jz2_moment_limits,
    loss_step_matrix,
    lossy_doubled_qfi11,
    mom_error,
    oat_state,
    parity,
    phase_basis,
    phase_diffused,
    qfi_matrix,
    qfi_matrix_diagonal,
    qfi_mixed,
    qfi_mixed_jy,
    qfi_pure,
    qfi_vs_chi,
    quadratic_observables,
    rotation,
    run_scenario,
    sequential_identity_check,
    spin_operators,
    split_state,
)

__all__ = [
    "apply_loss",
    "bayes_posterior",
    "classical_fisher_number_basis",
    "dicke_state",
    "doubled_tf",
    "four_mode_loss",
    "four_mode_qfi_matrix_doubled",
    "four_mode_qfi_matrix_split",
    "generalized_snr_mixed",
    "generalized_snr_pure",
    "gradiometry_moment_matrix",
    "jz2_moment_limits",
    "loss_step_matrix",
    "lossy_doubled_qfi11",
    "mom_error",
    "oat_state",
    "parity",
    "phase_basis",
    "phase_diffused",
    "qfi_matrix",
    "qfi_matrix_diagonal",
    "qfi_mixed",
    "qfi_mixed_jy",
    "qfi_pure",
    "qfi_vs_chi",
    "quadratic_observables",
    "rotation",
    "run_scenario",
    "sequential_identity_check",
    "spin_operators",
    "split_state",
]
