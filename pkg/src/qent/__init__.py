"""Two-qubit entanglement detection from local Pauli correlations.

The central quantity is the 3x3 block ``T`` of the correlation matrix
``R_ij = Tr(rho sigma_i (x) sigma_j)``. Its trace norm is at most 1 for every
separable state, and exceeds 1 for every state that violates a CHSH
inequality.
"""
from .criteria import (
    BellSettings,
    CriterionReport,
    bell_expectation,
    bell_maximize,
    chsh_horodecki,
    chsh_optimal_settings,
    partial_transpose,
    ppt_test,
    run_all,
    trace_norm_test,
    witness_from_diagonal_signs,
    witness_matrix,
    witness_test,
)
from .measure_sim import (
    MeasurementPlan,
    MeasurementRecord,
    StatVerdict,
    cost_accounting,
    estimate_pure_concurrence,
    estimate_schmidt_family,
    estimate_trace_norm,
    make_plan,
    run_plan,
    sample_setting,
)
from .measures import (
    EntanglementSummary,
    bloch_norm_check,
    concurrence,
    concurrence_lower_bound,
    concurrence_pure,
    eof,
    summarize,
)
from .numerics import TOL, eig_hermitian, kron, sqrtm_psd, svd3, trace_norm3
from .pauli import PAULI, bloch_vectors, correlation_matrix, density_from_correlation, t_matrix
from .states import (
    bell_state,
    density_from_pure,
    depolarized_schmidt,
    random_mixed,
    random_pure,
    random_separable,
    validate,
    werner,
)

__version__ = "0.1.0"
