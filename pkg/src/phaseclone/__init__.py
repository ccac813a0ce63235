"""Multi-phase quantum Fisher information for equatorial qudits sent
through cloning channels.

The library builds d-dimensional equatorial states, passes them through
universal or phase-covariant 1->2 cloning machines (or any channel with a
shrinking-form single-copy output), and computes the quantum Fisher
information matrix of the result in closed form, via a spectral
decomposition, and via a definition-level finite-difference oracle.  It also
evaluates Cramer-Rao total-variance bounds and the attainability matrix that
certifies simultaneous estimation of all phases.
"""

from .channels import (
    FULL_UNITARY_DMAX,
    CloningModel,
    eta_pqcm,
    eta_uqcm,
    pqcm_coefficients,
    pqcm_full_output,
    reduce_first_qudit,
    shrink_output,
    uqcm_full_output,
    validate_density_matrix,
)
from .crb import (
    VarianceBound,
    attainability_closed,
    qfim_eigenvalues,
    total_variance_bound,
)
from .oracle import (
    DEFAULT_FD_STEP,
    ParamChannel,
    attainability_numeric,
    qfim_numeric,
    rho_derivative,
    sld_solve,
)
from .qfim import (
    SUPPORT_TOL,
    SpectralDecomposition,
    equatorial_structure_residuals,
    qfim_from_spectral,
    qfim_pqcm_closed,
    qfim_pqcm_entries,
    qfim_pure,
    qfim_pure_entries,
    qfim_shrink_closed,
    qfim_shrink_entries,
    qfim_shrink_spectral,
    qfim_uqcm_closed,
    qfim_uqcm_entries,
    reconstruct_density,
    spectral_output,
    uqcm_diagonal_terms,
)
from .states import (
    PhaseVector,
    basis_derivative,
    basis_derivatives,
    complement_basis,
    equatorial_state,
    phase_shift_unitary,
    state_derivative,
)
from .verify import CheckResult, run_verification

__version__ = "0.1.0"

__all__ = [
    "CheckResult",
    "CloningModel",
    "DEFAULT_FD_STEP",
    "FULL_UNITARY_DMAX",
    "ParamChannel",
    "PhaseVector",
    "SUPPORT_TOL",
    "SpectralDecomposition",
    "VarianceBound",
    "attainability_closed",
    "attainability_numeric",
    "basis_derivative",
    "basis_derivatives",
    "complement_basis",
    "equatorial_state",
    "equatorial_structure_residuals",
    "eta_pqcm",
    "eta_uqcm",
    "phase_shift_unitary",
    "pqcm_coefficients",
    "pqcm_full_output",
    "qfim_eigenvalues",
    "qfim_from_spectral",
    "qfim_numeric",
    "qfim_pqcm_closed",
    "qfim_pqcm_entries",
    "qfim_pure",
    "qfim_pure_entries",
    "qfim_shrink_closed",
    "qfim_shrink_entries",
    "qfim_shrink_spectral",
    "qfim_uqcm_closed",
    "qfim_uqcm_entries",
    "reconstruct_density",
    "reduce_first_qudit",
    "rho_derivative",
    "run_verification",
    "shrink_output",
    "sld_solve",
    "spectral_output",
    "state_derivative",
    "total_variance_bound",
    "uqcm_diagonal_terms",
    "uqcm_full_output",
    "validate_density_matrix",
]
