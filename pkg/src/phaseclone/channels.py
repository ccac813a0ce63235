"""Symmetric 1->2 cloning channels for qudits.

Both machines implemented here admit an exact single-copy description: the
reduced output of one clone is the input projector shrunk toward the
maximally mixed state,

    rho_out = eta * |psi><psi| + ((1 - eta)/d) * I,

with a machine-specific shrinking factor eta(d).  The full tripartite
unitaries (original x copy x ancilla, ancilla dimension d) are implemented as
well, so the scaling form can be validated independently via partial trace.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import PhaseVector, equatorial_state

# vector length d**3 caps the explicit tripartite path; closed forms cover larger d
FULL_UNITARY_DMAX = 32


def _check_dim(d: int) -> None:
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {d!r}")


def _check_eta(eta: float) -> None:
    if not (0.0 < eta <= 1.0):
        raise ValueError(f"shrinking factor must lie in (0, 1], got {eta}")


def eta_uqcm(d: int) -> float:
    """Shrinking factor (d+2)/(2(d+1)) of the universal cloner."""
    _check_dim(d)
    return (d + 2) / (2.0 * (d + 1))


def eta_pqcm(d: int) -> float:
    """Shrinking factor (d-2+sqrt(d^2+4d-4))/(4(d-1)) of the phase-covariant cloner."""
    _check_dim(d)
    return (d - 2 + np.sqrt(d * d + 4.0 * d - 4.0)) / (4.0 * (d - 1))


def shrink_output(p: PhaseVector, eta: float) -> np.ndarray:
    """Single-copy output eta*|psi><psi| + ((1-eta)/d)*I as a (d, d) matrix."""
    _check_eta(eta)
    psi = equatorial_state(p)
    return eta * np.outer(psi, psi.conj()) + (1.0 - eta) / p.dim * np.eye(p.dim)


def pqcm_coefficients(d: int) -> tuple[float, float]:
    """Amplitudes (alpha, beta) of the phase-covariant cloning unitary.

    alpha^2 = 1/2 - (d-2)/(2*sqrt(d^2+4d-4)) and beta^2 is its complement,
    so alpha^2 + beta^2 = 1.
    """
    _check_dim(d)
    gamma = np.sqrt(d * d + 4.0 * d - 4.0)
    alpha = np.sqrt(0.5 - (d - 2) / (2.0 * gamma))
    beta = np.sqrt(0.5 + (d - 2) / (2.0 * gamma))
    return alpha, beta


def _check_full_unitary_dim(d: int) -> None:
    _check_dim(d)
    if d > FULL_UNITARY_DMAX:
        raise ValueError(
            f"full tripartite outputs are capped at d={FULL_UNITARY_DMAX}, got {d}"
        )


def uqcm_full_output(p: PhaseVector) -> np.ndarray:
    """Tripartite output of the universal cloner on an equatorial input.

    Each basis input transforms as

        |i>|0>|X> -> alpha |ii>|X_i> + beta sum_{j != i} (|ij> + |ji>)|X_j>

    with alpha = 2/sqrt(2(d+1)) and beta = 1/sqrt(2(d+1)); the map is
    extended linearly to equatorial_state(p).  Returned as a flat length-d^3
    unit vector over clone A x clone B x ancilla.
    """
    d = p.dim
    _check_full_unitary_dim(d)
    a = equatorial_state(p)
    alpha = 2.0 / np.sqrt(2.0 * (d + 1))
    beta = 1.0 / np.sqrt(2.0 * (d + 1))
    out = np.zeros((d, d, d), dtype=complex)
    for i in range(d):
        out[i, i, i] += alpha * a[i]
        for j in range(d):
            if j != i:
                out[i, j, j] += beta * a[i]
                out[j, i, j] += beta * a[i]
    return out.reshape(d**3)


def pqcm_full_output(p: PhaseVector) -> np.ndarray:
    """Tripartite output of the phase-covariant cloner on an equatorial input.

    Basis inputs transform as

        |j>|Q> -> alpha |jj>|R_j>
                  + (beta/sqrt(2(d-1))) sum_{l != j} (|jl> + |lj>)|R_l>

    with (alpha, beta) from pqcm_coefficients(d).
    """
    d = p.dim
    _check_full_unitary_dim(d)
    a = equatorial_state(p)
    alpha, beta = pqcm_coefficients(d)
    scale = beta / np.sqrt(2.0 * (d - 1))
    out = np.zeros((d, d, d), dtype=complex)
    for j in range(d):
        out[j, j, j] += alpha * a[j]
        for l in range(d):
            if l != j:
                out[j, l, l] += scale * a[j]
                out[l, j, l] += scale * a[j]
    return out.reshape(d**3)


def reduce_first_qudit(psi: np.ndarray) -> np.ndarray:
    """Reduced density matrix of the first qudit of a tripartite pure state.

    The input is a flat vector of length d^3; rho[i, i'] sums
    psi[i, j, k] * conj(psi[i', j, k]) over the other two slots.
    """
    psi = np.asarray(psi)
    n = psi.shape[0]
    d = round(n ** (1.0 / 3.0))
    if d < 2 or d**3 != n:
        raise ValueError(f"state length {n} is not a qudit-cube d**3 with d >= 2")
    m = psi.reshape(d, d * d)
    return m @ m.conj().T


def validate_density_matrix(rho: np.ndarray, tol: float = 1e-12) -> None:
    """Raise ValueError unless rho is Hermitian, unit-trace, and PSD within tol."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {rho.shape}")
    herm = np.abs(rho - rho.conj().T).max()
    if herm > tol:
        raise ValueError(f"matrix is not Hermitian (deviation {herm:.3e})")
    tr = abs(np.trace(rho) - 1.0)
    if tr > tol:
        raise ValueError(f"trace deviates from 1 by {tr:.3e}")
    lam_min = np.linalg.eigvalsh(rho)[0]
    if lam_min < -tol:
        raise ValueError(f"matrix has negative eigenvalue {lam_min:.3e}")


@dataclass(frozen=True)
class CloningModel:
    """A cloning machine identified by its shrinking behaviour.

    kind is one of "uqcm", "pqcm", or "shrink"; eta is stored only for the
    generic "shrink" kind (for the two machines it is a derived quantity of
    the dimension and is never stored).
    """

    kind: str
    eta: float | None = None

    def __post_init__(self):
        if self.kind not in ("uqcm", "pqcm", "shrink"):
            raise ValueError(f"unknown cloning model kind {self.kind!r}")
        if self.kind == "shrink":
            if self.eta is None:
                raise ValueError("generic shrink model requires eta")
            _check_eta(self.eta)
        elif self.eta is not None:
            raise ValueError(f"eta is a derived quantity for {self.kind!r}")

    def shrinking_factor(self, d: int) -> float:
        if self.kind == "uqcm":
            return eta_uqcm(d)
        if self.kind == "pqcm":
            return eta_pqcm(d)
        return float(self.eta)

    def output(self, p: PhaseVector) -> np.ndarray:
        """Single-copy output density matrix in the scaling form."""
        return shrink_output(p, self.shrinking_factor(p.dim))
