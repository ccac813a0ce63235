"""Equatorial qudit states and the orthonormal basis of their orthogonal complement.

A d-dimensional equatorial state carries all of its parameter dependence in
d-1 relative phases,

    |psi(phi)> = (1/sqrt(d)) * sum_j exp(i*phi_j) |j>,    phi_0 = 0,

and is generated from the uniform reference state by a diagonal phase-shift
unitary.  Everything downstream (cloning outputs, information matrices,
variance bounds) is built from this family, its analytic phase derivatives,
and an explicit orthonormal basis of the complement of |psi(phi)>.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi
_SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class PhaseVector:
    """The d-1 free phases of an equatorial qudit; the reference phase is 0.

    Phases are wrapped into [0, 2*pi) on construction, so adding 2*pi to any
    component yields the same stored vector (up to rounding of the wrap).
    """

    dim: int
    phases: np.ndarray

    def __post_init__(self):
        if not isinstance(self.dim, (int, np.integer)) or self.dim < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {self.dim!r}")
        phases = np.atleast_1d(np.asarray(self.phases, dtype=float))
        if phases.shape != (self.dim - 1,):
            raise ValueError(
                f"expected {self.dim - 1} phases for dim={self.dim}, "
                f"got shape {phases.shape}"
            )
        if not np.all(np.isfinite(phases)):
            raise ValueError("phases must be finite")
        wrapped = np.mod(phases, TWO_PI)
        # np.mod can round tiny negatives up to exactly 2*pi
        wrapped[wrapped >= TWO_PI] = 0.0
        wrapped.setflags(write=False)
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "phases", wrapped)

    @classmethod
    def zero(cls, dim: int) -> "PhaseVector":
        return cls(dim, np.zeros(dim - 1))

    @classmethod
    def random(cls, dim: int, rng: np.random.Generator) -> "PhaseVector":
        return cls(dim, rng.uniform(0.0, TWO_PI, size=dim - 1))

    @property
    def full_phases(self) -> np.ndarray:
        """All d phases including the fixed reference phase phi_0 = 0."""
        return np.concatenate(([0.0], self.phases))


def _check_param_index(dim: int, mu: int) -> None:
    if not 1 <= mu <= dim - 1:
        raise IndexError(f"parameter index must be in 1..{dim - 1}, got {mu}")


def equatorial_state(p: PhaseVector) -> np.ndarray:
    """Amplitude vector (1/sqrt(d)) * exp(i*phi_j), j = 0..d-1."""
    return np.exp(1j * p.full_phases) / np.sqrt(p.dim)


def phase_shift_unitary(p: PhaseVector) -> np.ndarray:
    """Diagonal unitary diag(1, e^{i phi_1}, ..., e^{i phi_{d-1}}).

    Applied to the zero-phase reference state it generates equatorial_state(p).
    """
    return np.diag(np.exp(1j * p.full_phases))


def state_derivative(p: PhaseVector, mu: int) -> np.ndarray:
    """Derivative of equatorial_state(p) with respect to phi_mu.

    A single nonzero entry (i/sqrt(d)) e^{i phi_mu} at position mu.
    """
    _check_param_index(p.dim, mu)
    out = np.zeros(p.dim, dtype=complex)
    out[mu] = 1j * np.exp(1j * p.phases[mu - 1]) / np.sqrt(p.dim)
    return out


def _chi_vector(p: PhaseVector, n: int) -> np.ndarray:
    """Raw complement vector with nonzero entries only at slots 0 and n.

    chi_n = (1/sqrt(2)) * (-e^{-i phi_n} |0> + |n>); each chi_n is orthogonal
    to equatorial_state(p), and <chi_m|chi_n> = e^{i(phi_m - phi_n)}/2 for
    m != n.
    """
    chi = np.zeros(p.dim, dtype=complex)
    chi[0] = -np.exp(-1j * p.full_phases[n]) / _SQRT2
    chi[n] = 1.0 / _SQRT2
    return chi


def _chi_derivative(p: PhaseVector, n: int, mu: int) -> np.ndarray:
    """Derivative of _chi_vector(p, n) with respect to phi_mu."""
    dchi = np.zeros(p.dim, dtype=complex)
    if mu == n:
        dchi[0] = 1j * np.exp(-1j * p.full_phases[n]) / _SQRT2
    return dchi


def complement_basis(p: PhaseVector) -> np.ndarray:
    """Orthonormal basis of the full space adapted to the equatorial state.

    Returns a (d, d) array whose rows are the basis vectors: row 0 is
    equatorial_state(p) itself and rows 1..d-1 span its orthogonal
    complement.  Row n (n >= 1) is the normalized Gram-Schmidt combination

        sqrt(2n/(n+1)) * (chi_n - (1/n) sum_{j<n} e^{i(phi_j - phi_n)} chi_j).
    """
    d = p.dim
    full = p.full_phases
    basis = np.zeros((d, d), dtype=complex)
    basis[0] = equatorial_state(p)
    chis = [np.empty(0)] + [_chi_vector(p, n) for n in range(1, d)]
    for n in range(1, d):
        v = chis[n].copy()
        for j in range(1, n):
            v -= np.exp(1j * (full[j] - full[n])) / n * chis[j]
        basis[n] = np.sqrt(2.0 * n / (n + 1.0)) * v
    return basis


def basis_derivative(p: PhaseVector, n: int, mu: int) -> np.ndarray:
    """Analytic derivative of the nth complement-basis vector w.r.t. phi_mu.

    n = 0 reduces to state_derivative.  For n >= 1 the Gram-Schmidt
    combination is differentiated term by term, so the result is exact up to
    rounding (no finite differences involved).
    """
    if not 0 <= n <= p.dim - 1:
        raise IndexError(f"basis index must be in 0..{p.dim - 1}, got {n}")
    _check_param_index(p.dim, mu)
    if n == 0:
        return state_derivative(p, mu)
    full = p.full_phases
    dv = _chi_derivative(p, n, mu)
    for j in range(1, n):
        w = np.exp(1j * (full[j] - full[n]))
        dw = 1j * w * (float(mu == j) - float(mu == n))
        dv -= (dw * _chi_vector(p, j) + w * _chi_derivative(p, j, mu)) / n
    return np.sqrt(2.0 * n / (n + 1.0)) * dv


def basis_derivatives(p: PhaseVector) -> np.ndarray:
    """All basis-vector derivatives, shape (d-1, d, d).

    Entry [mu-1, n] is the derivative of complement_basis(p)[n] with respect
    to phi_mu.
    """
    return np.array(
        [
            [basis_derivative(p, n, mu) for n in range(p.dim)]
            for mu in range(1, p.dim)
        ]
    )
