"""Cramer-Rao machinery: attainability matrix, structured QFIM eigenvalues,
and total-variance lower bounds.

The simultaneous bound for all phases is attainable exactly when the
commutator-trace matrix

    L_mn = Im Tr(rho L_m L_n)
         = sum_k 4 lam_k Im<d_m psi_k|d_n psi_k>
         - sum_{k,l} (8 lam_k lam_l (lam_k-lam_l)/(lam_k+lam_l)^2)
                     Im <d_m psi_k|psi_l><psi_l|d_n psi_k>

vanishes; for the equatorial family it does, entrywise, because every inner
product entering it is real.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qfim import SUPPORT_TOL, SpectralDecomposition, qfim_shrink_closed, qfim_shrink_entries


def _support_blocks(sd: SpectralDecomposition, dvecs: np.ndarray):
    lam = sd.eigenvalues
    dvecs = np.asarray(dvecs)
    sup = np.flatnonzero(lam > SUPPORT_TOL)
    if sup.size == 0:
        raise ValueError("density matrix has empty support")
    ls = lam[sup]
    dsup = dvecs[:, sup, :]
    g = np.einsum("mkc,lc->mkl", dsup.conj(), sd.eigenvectors[sup])
    return ls, dsup, g


def attainability_closed(sd: SpectralDecomposition, dvecs: np.ndarray) -> np.ndarray:
    """Imaginary parts of the commutator traces, as a real antisymmetric matrix.

    The bound for simultaneous estimation is attainable iff every entry
    vanishes.  dvecs is laid out as in qfim_from_spectral.
    """
    ls, dsup, g = _support_blocks(sd, dvecs)
    nparams = dsup.shape[0]

    weighted = (dsup.conj() * ls[None, :, None]).reshape(nparams, -1)
    out = 4.0 * (weighted @ dsup.reshape(nparams, -1).T).imag

    w = 8.0 * np.outer(ls, ls) * (ls[:, None] - ls[None, :]) / (ls[:, None] + ls[None, :]) ** 2
    gw = (g * w[None, :, :]).reshape(nparams, -1)
    out -= (gw @ g.conj().reshape(nparams, -1).T).imag
    return out


def _attainability_raw_weight(sd: SpectralDecomposition, dvecs: np.ndarray) -> np.ndarray:
    # unsymmetrized weight 16 lam_k^2 lam_l/(lam_k+lam_l)^2; equal to
    # attainability_closed after the antisymmetric-sum identity
    ls, dsup, g = _support_blocks(sd, dvecs)
    nparams = dsup.shape[0]
    weighted = (dsup.conj() * ls[None, :, None]).reshape(nparams, -1)
    out = 4.0 * (weighted @ dsup.reshape(nparams, -1).T).imag
    w = 16.0 * np.outer(ls**2, ls) / (ls[:, None] + ls[None, :]) ** 2
    gw = (g * w[None, :, :]).reshape(nparams, -1)
    out -= (gw @ g.conj().reshape(nparams, -1).T).imag
    return out


def qfim_eigenvalues(f: np.ndarray, tol: float = 1e-10) -> tuple[float, float, int]:
    """Eigenvalues of an equatorial-structure QFIM without diagonalizing.

    Returns (lam1, lam2, mult2): lam1 = F_diag + (d-2) F_off with
    multiplicity 1, lam2 = F_diag - F_off with multiplicity d-2.  For d = 2
    there is no second eigenvalue and lam2 is NaN.  Raises ValueError when
    the entries are not constant within tol.
    """
    f = np.asarray(f)
    n = f.shape[0]
    diag = np.diag(f)
    if diag.max() - diag.min() > tol:
        raise ValueError("diagonal entries are not constant")
    fdiag = float(diag.mean())
    if n == 1:
        return fdiag, float("nan"), 0
    off = f[~np.eye(n, dtype=bool)]
    if off.max() - off.min() > tol:
        raise ValueError("off-diagonal entries are not constant")
    foff = float(off.mean())
    d = n + 1
    return fdiag + (d - 2) * foff, fdiag - foff, d - 2


@dataclass(frozen=True, eq=False)
class VarianceBound:
    """Lower bounds on estimator variances for all d-1 phases at once.

    total_variance_min is the trace of the inverse QFIM;
    per_parameter_bounds is its diagonal.
    """

    total_variance_min: float
    per_parameter_bounds: np.ndarray


def total_variance_bound(d: int, eta: float) -> VarianceBound:
    """Minimum total variance for the shrinking-channel output.

    Closed form (d-1)[2+(d-2)eta]/(2 eta^2); cross-checked internally against
    -2(d-1)/(d F_off) and against the trace of the dense matrix inverse.
    """
    fdiag, foff = qfim_shrink_entries(d, eta)
    closed = (d - 1) * (2.0 + (d - 2) * eta) / (2.0 * eta**2)
    alt = -2.0 * (d - 1) / (d * foff)
    finv = np.linalg.inv(qfim_shrink_closed(d, eta))
    dense = float(np.trace(finv).real)
    scale = max(1.0, abs(closed))
    if abs(closed - alt) > 1e-10 * scale or abs(closed - dense) > 1e-8 * scale:
        raise RuntimeError(
            f"variance-bound cross-check failed at d={d}, eta={eta}: "
            f"closed={closed!r}, relation={alt!r}, trace-inverse={dense!r}"
        )
    return VarianceBound(closed, np.diag(finv).real.copy())
