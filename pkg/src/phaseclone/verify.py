"""Built-in verification suite.

Every structural property the library promises is re-checked here at runtime:
basis orthonormality, scaling-form reduction of the full cloning unitaries,
closed-form versus spectral-route agreement, ordering and positivity of the
information matrices, variance-bound identities, attainability, and the
finite-difference oracle comparisons.  Each check reports its worst observed
error against a fixed tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import channels, crb, oracle, qfim, states
from .states import PhaseVector

DEFAULT_SEED = 12345


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.max_error <= self.tolerance)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "pass": self.passed,
            "max_error": float(self.max_error),
            "tolerance": float(self.tolerance),
        }


def _fd_state(fn, p: PhaseVector, mu: int, h: float) -> np.ndarray:
    shift = np.zeros(p.dim - 1)
    shift[mu - 1] = h
    return (fn(PhaseVector(p.dim, p.phases + shift)) - fn(PhaseVector(p.dim, p.phases - shift))) / (2 * h)


def run_verification(
    dmax_full: int = 8,
    seed: int = DEFAULT_SEED,
    fd_step: float = oracle.DEFAULT_FD_STEP,
    mutate: bool = False,
    progress=None,
) -> list[CheckResult]:
    """Run the whole suite and return one CheckResult per check.

    dmax_full caps the dimensions exercised through the explicit tripartite
    unitaries.  With mutate=True a deliberate error is injected into the
    shrinking factor used by the scaling-form check, which must then fail;
    this validates that the harness can actually detect a wrong channel.
    """
    rng = np.random.default_rng(seed)
    results: list[CheckResult] = []

    def add(name: str, err: float, tol: float) -> None:
        res = CheckResult(name, float(err), float(tol))
        results.append(res)
        if progress is not None:
            progress(res)

    full_dims = list(range(2, max(2, dmax_full) + 1))

    # --- state and basis construction ---------------------------------
    err = 0.0
    for d in range(2, 17):
        for _ in range(100):
            b = states.complement_basis(PhaseVector.random(d, rng))
            err = max(err, np.abs(b.conj() @ b.T - np.eye(d)).max())
    add("complement_basis_orthonormality", err, 1e-12)

    err = 0.0
    for d in range(2, 17):
        for _ in range(10):
            p = PhaseVector.random(d, rng)
            gen = states.phase_shift_unitary(p) @ states.equatorial_state(PhaseVector.zero(d))
            err = max(err, np.abs(states.equatorial_state(p) - gen).max())
    add("phase_shift_generates_state", err, 1e-14)

    err = 0.0
    for d in (2, 3, 5, 8):
        p = PhaseVector.random(d, rng)
        for mu in range(1, d):
            fd = _fd_state(states.equatorial_state, p, mu, 1e-5)
            err = max(err, np.abs(states.state_derivative(p, mu) - fd).max())
    add("state_derivative_finite_difference", err, 1e-8)

    err = 0.0
    for d in (2, 3, 4, 6):
        p = PhaseVector.random(d, rng)
        for mu in range(1, d):
            fd = _fd_state(states.complement_basis, p, mu, 1e-5)
            for n in range(d):
                err = max(err, np.abs(states.basis_derivative(p, n, mu) - fd[n]).max())
    add("basis_derivative_finite_difference", err, 1e-6)

    err = 0.0
    for d in (2, 5, 9):
        p = PhaseVector.random(d, rng)
        for mu in range(1, d):
            shift = np.zeros(d - 1)
            shift[mu - 1] = 2 * np.pi
            q = PhaseVector(d, p.phases + shift)
            err = max(err, np.abs(states.equatorial_state(p) - states.equatorial_state(q)).max())
            err = max(err, np.abs(states.complement_basis(p) - states.complement_basis(q)).max())
            err = max(err, np.abs(channels.shrink_output(p, 0.7) - channels.shrink_output(q, 0.7)).max())
    add("gauge_period_invariance", err, 1e-12)

    # --- cloning channels ----------------------------------------------
    for label, full_fn, eta_fn in (
        ("uqcm", channels.uqcm_full_output, channels.eta_uqcm),
        ("pqcm", channels.pqcm_full_output, channels.eta_pqcm),
    ):
        err = 0.0
        for d in full_dims:
            eta = eta_fn(d)
            if mutate and label == "uqcm":
                eta += 1e-3  # deliberate fault: the check below must catch it
            for _ in range(20):
                p = PhaseVector.random(d, rng)
                red = channels.reduce_first_qudit(full_fn(p))
                err = max(err, np.linalg.norm(red - channels.shrink_output(p, eta)))
        add(f"scaling_form_{label}", err, 1e-10)

    for label, full_fn, eta_fn in (
        ("uqcm", channels.uqcm_full_output, channels.eta_uqcm),
        ("pqcm", channels.pqcm_full_output, channels.eta_pqcm),
    ):
        err = 0.0
        for d in full_dims:
            eta = eta_fn(d)
            fids = []
            for _ in range(10):
                p = PhaseVector.random(d, rng)
                psi = states.equatorial_state(p)
                red = channels.reduce_first_qudit(full_fn(p))
                fids.append((psi.conj() @ red @ psi).real)
            fids = np.asarray(fids)
            err = max(err, fids.max() - fids.min())
            err = max(err, np.abs(fids - (eta + (1 - eta) / d)).max())
        add(f"fidelity_phase_independence_{label}", err, 1e-12)

    add("eta_uqcm_large_d_limit", abs(channels.eta_uqcm(100) - 0.5), 0.02)
    add("eta_pqcm_large_d_limit", abs(channels.eta_pqcm(100) - 0.5), 0.02)
    add("eta_gap_large_d", channels.eta_pqcm(100) - channels.eta_uqcm(100), 1e-3)

    # --- closed forms vs the spectral route ------------------------------
    specs = [
        ("uqcm", channels.eta_uqcm, qfim.qfim_uqcm_closed),
        ("pqcm", channels.eta_pqcm, qfim.qfim_pqcm_closed),
        ("shrink", lambda d: 0.4, lambda d: qfim.qfim_shrink_closed(d, 0.4)),
    ]
    for label, eta_fn, closed_fn in specs:
        err = 0.0
        for d in range(2, 11):
            p = PhaseVector.random(d, rng)
            err = max(err, np.abs(qfim.qfim_shrink_spectral(p, eta_fn(d)) - closed_fn(d)).max())
        add(f"spectral_vs_closed_{label}", err, 1e-10)

    err = 0.0
    for d in range(2, 13):
        first, second = qfim.uqcm_diagonal_terms(d, PhaseVector.random(d, rng))
        second_closed = 2.0 * (d**3 + 7 * d**2 + 8 * d + 4) / ((d + 1) * (d + 4) * d**2)
        err = max(err, abs(first - 4.0 / d), abs(second - second_closed))
        err = max(err, abs((first - second) - qfim.qfim_uqcm_entries(d)[0]))
    add("uqcm_diagonal_term_sums", err, 1e-10)

    err = max(
        abs(sum(1.0 / (n * (n + 1)) for n in range(1, d)) - (1.0 - 1.0 / d))
        for d in range(2, 65)
    )
    add("telescoping_sum_identity", err, 1e-14)

    err = 0.0
    for d in range(2, 33):
        mats = [
            qfim.qfim_pure(d),
            qfim.qfim_uqcm_closed(d),
            qfim.qfim_pqcm_closed(d),
            qfim.qfim_shrink_closed(d, 0.4),
        ]
        for f in mats:
            err = max(err, max(qfim.equatorial_structure_residuals(f)))
    add("diag_offdiag_relation", err, 1e-10)

    err = 0.0
    for d in (3, 5):
        eta = channels.eta_uqcm(d)
        ref = qfim.qfim_shrink_spectral(PhaseVector.random(d, rng), eta)
        for _ in range(9):
            f = qfim.qfim_shrink_spectral(PhaseVector.random(d, rng), eta)
            err = max(err, np.abs(f - ref).max())
    add("qfim_phase_independence", err, 1e-10)

    # --- orderings and inequalities --------------------------------------
    err = 0.0
    for d in range(2, 65):
        gap = qfim.qfim_pqcm_closed(d) - qfim.qfim_uqcm_closed(d)
        err = max(err, -np.linalg.eigvalsh(gap)[0])
    add("pqcm_minus_uqcm_psd", err, 1e-12)

    err = max(
        max(0.0, qfim.qfim_uqcm_entries(d)[0] - qfim.qfim_pqcm_entries(d)[0])
        for d in range(2, 1001)
    )
    add("pqcm_diagonal_dominates", err, 0.0)

    err = 0.0
    for d in range(2, 65):
        bound = channels.eta_uqcm(d) * qfim.qfim_pure_entries(d)[0]
        err = max(err, qfim.qfim_uqcm_entries(d)[0] - bound)
    add("information_shrinks_under_cloning", max(0.0, err), 0.0)

    err = 0.0
    for d in range(2, 65):
        fu = qfim.qfim_uqcm_entries(d)
        fs = qfim.qfim_shrink_entries(d, channels.eta_uqcm(d))
        err = max(err, abs(fu[0] - fs[0]), abs(fu[1] - fs[1]))
    add("uqcm_matches_generic_shrink", err, 1e-14)

    err = 0.0
    for d in range(2, 65):
        fp = qfim.qfim_pqcm_entries(d)
        fs = qfim.qfim_shrink_entries(d, channels.eta_pqcm(d))
        err = max(err, abs(fp[0] - fs[0]), abs(fp[1] - fs[1]))
    add("pqcm_matches_generic_shrink", err, 1e-12)

    err = 0.0
    for d in (2, 4, 8):
        etas = np.linspace(0.1, 1.0, 10)
        diags = np.array([qfim.qfim_shrink_entries(d, e)[0] for e in etas])
        err = max(err, max(0.0, -np.diff(diags).min()))
    add("qfim_monotone_in_eta", err, 0.0)

    # --- variance bounds --------------------------------------------------
    err = 0.0
    for d in range(2, 33):
        for eta in (0.3, 0.5, channels.eta_uqcm(d), channels.eta_pqcm(d), 1.0):
            vb = crb.total_variance_bound(d, eta)
            dense = float(np.trace(np.linalg.inv(qfim.qfim_shrink_closed(d, eta))).real)
            err = max(err, abs(vb.total_variance_min - dense))
    add("variance_trace_inverse", err, 1e-8)

    err = max(
        abs(crb.total_variance_bound(d, 1.0).total_variance_min - d * (d - 1) / 2.0)
        for d in range(2, 65)
    )
    add("variance_pure_closed_form", err, 0.0)

    err = 0.0
    for d in range(2, 21):
        e_in = crb.total_variance_bound(d, 1.0).total_variance_min
        e_u = crb.total_variance_bound(d, channels.eta_uqcm(d)).total_variance_min
        e_p = crb.total_variance_bound(d, channels.eta_pqcm(d)).total_variance_min
        err = max(err, e_in - e_p, e_p - e_u)
    add("variance_ordering", max(0.0, err), 0.0)

    err = 0.0
    for d in (2, 4, 8):
        etas = np.linspace(0.1, 1.0, 10)
        bounds = np.array([crb.total_variance_bound(d, e).total_variance_min for e in etas])
        err = max(err, max(0.0, np.diff(bounds).max()))
    add("variance_monotone_in_eta", err, 0.0)

    err = 0.0
    for d in range(2, 17):
        inv_eigs = np.sort(np.linalg.eigvalsh(np.linalg.inv(qfim.qfim_pure(d))))
        expect = np.sort(np.concatenate((np.full(d - 2, d / 4.0), [d * d / 4.0])))
        err = max(err, np.abs(inv_eigs - expect).max())
    add("pure_inverse_eigenvalues", err, 1e-10)

    err = 0.0
    for d in range(3, 33):
        for f in (qfim.qfim_uqcm_closed(d), qfim.qfim_pqcm_closed(d)):
            l1, l2, mult2 = crb.qfim_eigenvalues(f)
            structured = np.sort(np.concatenate(([l1], np.full(mult2, l2))))
            err = max(err, np.abs(structured - np.linalg.eigvalsh(f)).max())
    add("structured_vs_dense_eigenvalues", err, 1e-10)

    err = 0.0
    for d in range(2, 11):
        for eta in (0.5, channels.eta_uqcm(d)):
            p = PhaseVector.random(d, rng)
            rho = qfim.reconstruct_density(qfim.spectral_output(p, eta))
            err = max(err, np.abs(rho - channels.shrink_output(p, eta)).max())
    add("spectral_reconstruction", err, 1e-12)

    # --- attainability ----------------------------------------------------
    err_closed = 0.0
    err_forms = 0.0
    for d in full_dims:
        for eta in (1.0, channels.eta_uqcm(d), channels.eta_pqcm(d)):
            for _ in range(10):
                p = PhaseVector.random(d, rng)
                sd = qfim.spectral_output(p, eta)
                dv = states.basis_derivatives(p)
                a = crb.attainability_closed(sd, dv)
                err_closed = max(err_closed, np.abs(a).max())
                err_forms = max(err_forms, np.abs(a - crb._attainability_raw_weight(sd, dv)).max())
    add("attainability_closed_zero", err_closed, 1e-10)
    add("attainability_weight_forms_agree", err_forms, 1e-12)

    err_num = 0.0
    err_agree = 0.0
    for d in full_dims:
        for ch, eta in (
            (oracle.ParamChannel("pure"), 1.0),
            (oracle.ParamChannel("uqcm"), channels.eta_uqcm(d)),
            (oracle.ParamChannel("pqcm"), channels.eta_pqcm(d)),
        ):
            for _ in range(10):
                p = PhaseVector.random(d, rng)
                num = oracle.attainability_numeric(ch, p, fd_step)
                err_num = max(err_num, np.abs(num).max())
                closed = crb.attainability_closed(
                    qfim.spectral_output(p, eta), states.basis_derivatives(p)
                )
                err_agree = max(err_agree, np.abs(num - closed).max())
    add("attainability_numeric_zero", err_num, 1e-6)
    add("attainability_paths_agree", err_agree, 1e-6)

    # --- finite-difference oracle vs closed forms -------------------------
    oracle_cases = [
        ("pure", oracle.ParamChannel("pure"), qfim.qfim_pure),
        ("uqcm", oracle.ParamChannel("uqcm"), qfim.qfim_uqcm_closed),
        ("pqcm", oracle.ParamChannel("pqcm"), qfim.qfim_pqcm_closed),
        ("shrink", oracle.ParamChannel("shrink", 0.4), lambda d: qfim.qfim_shrink_closed(d, 0.4)),
    ]
    for label, ch, closed_fn in oracle_cases:
        err = 0.0
        for d in full_dims:
            closed = closed_fn(d)
            for _ in range(5):
                p = PhaseVector.random(d, rng)
                err = max(err, np.abs(oracle.qfim_numeric(ch, p, fd_step) - closed).max())
        add(f"oracle_agreement_{label}", err, 1e-5)

    err = 0.0
    for ch, d in (
        (oracle.ParamChannel("uqcm"), 3),
        (oracle.ParamChannel("pqcm"), 4),
        (oracle.ParamChannel("shrink", 0.4), 5),
    ):
        p = PhaseVector.random(d, rng)
        coarse = oracle.qfim_numeric(ch, p, 1e-4)
        fine = oracle.qfim_numeric(ch, p, 5e-5)
        err = max(err, np.abs(coarse - fine).max())
    add("oracle_step_robustness", err, 1e-6)

    err = 0.0
    for d in full_dims:
        for ch in (
            oracle.ParamChannel("pure"),
            oracle.ParamChannel("uqcm"),
            oracle.ParamChannel("pqcm"),
            oracle.ParamChannel("shrink", 0.4),
        ):
            for _ in range(3):
                p = PhaseVector.random(d, rng)
                rho = ch.density(p)
                for mu in range(1, d):
                    drho = oracle.rho_derivative(ch, p, mu, fd_step)
                    sld = oracle.sld_solve(rho, drho)
                    err = max(err, np.linalg.norm(drho - 0.5 * (rho @ sld + sld @ rho)))
    add("sld_residual", err, 1e-8)

    return results
