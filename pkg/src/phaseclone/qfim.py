"""Closed-form quantum Fisher information matrices for cloned equatorial states.

For the equatorial family every information matrix produced here has constant
diagonal entries, constant off-diagonal entries, and the two are locked
together by F_diag = -(d-1) * F_offdiag.  The module provides the closed
forms for the pure input, the generic shrinking channel, and both cloning
machines, together with the spectral-decomposition route that rebuilds the
same matrices from eigenvalue and eigenvector derivatives,

    F_mn = sum_i (d_m lam_i)(d_n lam_i)/lam_i
         + sum_i 4 lam_i Re<d_m psi_i|d_n psi_i>
         - sum_{i,j} (8 lam_i lam_j/(lam_i+lam_j))
                     Re <d_m psi_i|psi_j><psi_j|d_n psi_i>,

with every sum restricted to the support of the density matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import _check_dim, _check_eta, eta_uqcm
from .states import PhaseVector, basis_derivative, basis_derivatives, complement_basis

# eigenvalues at or below this are treated as outside the support
SUPPORT_TOL = 1e-12

# polynomial numerators stay well inside float range up to here
CLOSED_FORM_DMAX = 10**6


def _check_closed_form_dim(d: int) -> None:
    _check_dim(d)
    if d > CLOSED_FORM_DMAX:
        raise ValueError(f"closed forms are limited to d <= {CLOSED_FORM_DMAX}, got {d}")


def _structured_matrix(d: int, fdiag: float, foff: float) -> np.ndarray:
    out = np.full((d - 1, d - 1), foff)
    np.fill_diagonal(out, fdiag)
    return out


def qfim_pure_entries(d: int) -> tuple[float, float]:
    """(diagonal, off-diagonal) entries 4(delta/d - 1/d^2) for the pure input."""
    _check_closed_form_dim(d)
    return 4.0 * (1.0 / d - 1.0 / d**2), -4.0 / d**2


def qfim_pure(d: int) -> np.ndarray:
    """QFIM of the pure equatorial state; independent of the phases."""
    fdiag, foff = qfim_pure_entries(d)
    return _structured_matrix(d, fdiag, foff)


def qfim_shrink_entries(d: int, eta: float) -> tuple[float, float]:
    """Entries of the QFIM for the generic shrinking-channel output.

    F_diag = 4(d-1)eta^2 / (d[2+(d-2)eta]) and F_off = -F_diag/(d-1).
    """
    _check_closed_form_dim(d)
    _check_eta(eta)
    denom = d * (2.0 + (d - 2) * eta)
    return 4.0 * (d - 1) * eta**2 / denom, -4.0 * eta**2 / denom


def qfim_shrink_closed(d: int, eta: float) -> np.ndarray:
    fdiag, foff = qfim_shrink_entries(d, eta)
    return _structured_matrix(d, fdiag, foff)


def qfim_uqcm_entries(d: int) -> tuple[float, float]:
    """Entries of the universal-cloner QFIM.

    F_diag = 2(d-1)(d+2)^2 / ((d+1)(d+4)d^2); F_off = -F_diag/(d-1).
    """
    _check_closed_form_dim(d)
    denom = (d + 1) * (d + 4) * d**2
    return 2.0 * (d - 1) * (d + 2) ** 2 / denom, -2.0 * (d + 2) ** 2 / denom


def qfim_uqcm_closed(d: int) -> np.ndarray:
    fdiag, foff = qfim_uqcm_entries(d)
    return _structured_matrix(d, fdiag, foff)


def qfim_pqcm_entries(d: int) -> tuple[float, float]:
    """Entries of the phase-covariant-cloner QFIM.

    With g = sqrt(d^2+4d-4),
    F_diag = 2(d^2 + d*g - 2g) / (d[d^2 + d(g+4) - 2(g+2)]); the off-diagonal
    entry follows from the structural relation F_off = -F_diag/(d-1).
    """
    _check_closed_form_dim(d)
    g = np.sqrt(d * d + 4.0 * d - 4.0)
    fdiag = 2.0 * (d * d + d * g - 2.0 * g) / (d * (d * d + d * (g + 4.0) - 2.0 * (g + 2.0)))
    return fdiag, -fdiag / (d - 1)


def qfim_pqcm_closed(d: int) -> np.ndarray:
    fdiag, foff = qfim_pqcm_entries(d)
    return _structured_matrix(d, fdiag, foff)


def equatorial_structure_residuals(f: np.ndarray) -> tuple[float, float, float]:
    """How far a matrix is from the equatorial-family QFIM structure.

    Returns (diagonal spread, off-diagonal spread, relation residual), where
    the relation residual is max |F_diag + (d-1) F_off|.  All three are zero
    for d = 2 up to the diagonal spread.
    """
    f = np.asarray(f)
    n = f.shape[0]
    diag = np.diag(f)
    dspread = float(diag.max() - diag.min())
    if n == 1:
        return dspread, 0.0, 0.0
    off = f[~np.eye(n, dtype=bool)]
    ospread = float(off.max() - off.min())
    relation = float(np.abs(diag.mean() + n * off.mean()).max())
    return dspread, ospread, relation


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigen-decomposition of a density matrix restricted to what the
    information formulas need.

    eigenvalues are stored in descending order; eigenvectors is a (d, d)
    array whose row i is the eigenvector of eigenvalues[i]; support_rank
    counts eigenvalues above SUPPORT_TOL.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    support_rank: int

    @property
    def dim(self) -> int:
        return self.eigenvectors.shape[1]


def spectral_output(p: PhaseVector, eta: float) -> SpectralDecomposition:
    """Spectral decomposition of the shrinking-channel output.

    The equatorial state itself is an eigenvector with eigenvalue
    eta + (1-eta)/d, and each complement-basis vector carries (1-eta)/d.
    """
    _check_eta(eta)
    d = p.dim
    lam = np.concatenate(([eta + (1.0 - eta) / d], np.full(d - 1, (1.0 - eta) / d)))
    vecs = complement_basis(p)
    rank = int(np.sum(lam > SUPPORT_TOL))
    return SpectralDecomposition(lam, vecs, rank)


def reconstruct_density(sd: SpectralDecomposition) -> np.ndarray:
    """Rebuild sum_i lam_i |psi_i><psi_i| from a spectral decomposition."""
    v = sd.eigenvectors
    return (v.T * sd.eigenvalues) @ v.conj()


def qfim_from_spectral(
    sd: SpectralDecomposition,
    dvecs: np.ndarray,
    dlams: np.ndarray | None = None,
) -> np.ndarray:
    """QFIM from a spectral decomposition and its parameter derivatives.

    dvecs has shape (nparams, d, d) with dvecs[m, i] the derivative of
    eigenvector i with respect to parameter m (see basis_derivatives);
    dlams, shape (nparams, d), holds the eigenvalue derivatives and defaults
    to zero (the shrinking-channel eigenvalues carry no phase dependence, so
    the classical contribution vanishes).  All sums run over the support
    only.
    """
    lam = sd.eigenvalues
    vecs = sd.eigenvectors
    dvecs = np.asarray(dvecs)
    nparams = dvecs.shape[0]
    sup = np.flatnonzero(lam > SUPPORT_TOL)
    if sup.size == 0:
        raise ValueError("density matrix has empty support")
    ls = lam[sup]
    dsup = dvecs[:, sup, :]

    f = np.zeros((nparams, nparams))
    if dlams is not None:
        dl = np.asarray(dlams)[:, sup]
        f += np.einsum("mi,ni,i->mn", dl, dl, 1.0 / ls)

    # sum_i 4 lam_i Re <d_m psi_i | d_n psi_i>
    weighted = (dsup.conj() * ls[None, :, None]).reshape(nparams, -1)
    f += 4.0 * (weighted @ dsup.reshape(nparams, -1).T).real

    # sum_ij (8 lam_i lam_j/(lam_i+lam_j)) Re <d_m psi_i|psi_j><psi_j|d_n psi_i>
    g = np.einsum("mic,jc->mij", dsup.conj(), vecs[sup])
    w = 8.0 * np.outer(ls, ls) / (ls[:, None] + ls[None, :])
    gw = (g * w[None, :, :]).reshape(nparams, -1)
    f -= (gw @ g.conj().reshape(nparams, -1).T).real
    return f


def qfim_shrink_spectral(p: PhaseVector, eta: float) -> np.ndarray:
    """Spectral-route QFIM of the shrinking-channel output at phases p."""
    return qfim_from_spectral(spectral_output(p, eta), basis_derivatives(p))


def uqcm_diagonal_terms(d: int, p: PhaseVector | None = None) -> tuple[float, float]:
    """The two quantum sums making up the first diagonal QFIM entry of the
    universal-cloner output, evaluated numerically at phases p.

    Returns (first, second) with

        first  = sum_n 4 lam_n <d_1 psi_n | d_1 psi_n>
        second = sum_{n,m} (8 lam_n lam_m/(lam_n+lam_m)) |<psi_m|d_1 psi_n>|^2

    so that first - second equals the closed-form diagonal entry.  In closed
    form first = 4/d and second = 2(d^3+7d^2+8d+4)/((d+1)(d+4)d^2).
    """
    if p is None:
        p = PhaseVector.zero(d)
    sd = spectral_output(p, eta_uqcm(d))
    lam = sd.eigenvalues
    d1 = np.array([basis_derivative(p, n, 1) for n in range(d)])
    delta = np.einsum("nc,nc->n", d1.conj(), d1).real
    first = float(np.sum(4.0 * lam * delta))
    g = d1.conj() @ sd.eigenvectors.T
    theta = (g * g.conj()).real
    w = 8.0 * np.outer(lam, lam) / (lam[:, None] + lam[None, :])
    second = float(np.sum(w * theta))
    return first, second
