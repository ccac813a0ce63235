import numpy as np
import pytest
from numpy.testing import assert_allclose

from phaseclone.channels import eta_pqcm, eta_uqcm
from phaseclone.qfim import (
    CLOSED_FORM_DMAX,
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
from phaseclone.channels import shrink_output
from phaseclone.states import PhaseVector, basis_derivatives


class TestPureQfim:
    def test_qubit(self):
        assert_allclose(qfim_pure(2), [[1.0]])

    def test_qutrit(self):
        # 4(1/3 - 1/9) = 8/9 on the diagonal, -4/9 off it
        expect = np.array([[8 / 9, -4 / 9], [-4 / 9, 8 / 9]])
        assert_allclose(qfim_pure(3), expect, atol=1e-15)

    @pytest.mark.parametrize("d", [2, 3, 5, 12])
    def test_inverse_eigenvalues(self, d):
        # reciprocal spectrum d^2/4 (once) and d/4 (d-2 times)
        inv_eigs = np.sort(np.linalg.eigvalsh(np.linalg.inv(qfim_pure(d))))
        expect = np.sort(np.concatenate((np.full(d - 2, d / 4.0), [d * d / 4.0])))
        assert_allclose(inv_eigs, expect, atol=1e-10)


class TestShrinkClosed:
    @pytest.mark.parametrize("d", [2, 3, 7, 20])
    def test_eta_one_is_pure(self, d):
        assert_allclose(qfim_shrink_closed(d, 1.0), qfim_pure(d), rtol=0, atol=1e-15)

    def test_qubit_uqcm_point(self):
        assert qfim_shrink_entries(2, 2 / 3)[0] == pytest.approx(4 / 9, abs=1e-15)

    @pytest.mark.parametrize("d", [2, 4, 9])
    def test_monotone_in_eta(self, d):
        # finite differences of the diagonal entry over an eta grid
        etas = np.linspace(0.1, 1.0, 19)
        diags = np.array([qfim_shrink_entries(d, e)[0] for e in etas])
        slopes = (diags[2:] - diags[:-2]) / (etas[2:] - etas[:-2])
        assert np.all(slopes > 0)

    def test_eta_domain(self):
        with pytest.raises(ValueError):
            qfim_shrink_entries(3, 0.0)
        with pytest.raises(ValueError):
            qfim_shrink_entries(3, 1.5)

    def test_dimension_guard(self):
        with pytest.raises(ValueError):
            qfim_shrink_entries(CLOSED_FORM_DMAX + 1, 0.5)


class TestClonerClosedForms:
    def test_uqcm_qubit_anchor(self):
        assert abs(qfim_uqcm_closed(2)[0, 0] - 4 / 9) <= 1e-14

    def test_uqcm_qutrit(self):
        # 2*2*25 / (4*7*9) = 100/252
        assert qfim_uqcm_entries(3)[0] == pytest.approx(100 / 252, abs=1e-15)

    def test_pqcm_qubit_anchor(self):
        assert abs(qfim_pqcm_closed(2)[0, 0] - 0.5) <= 1e-14

    def test_pqcm_qutrit(self):
        g = np.sqrt(17.0)
        assert qfim_pqcm_entries(3)[0] == pytest.approx(2 * (9 + g) / (3 * (17 + g)), abs=1e-14)

    @pytest.mark.parametrize("d", range(2, 65))
    def test_uqcm_equals_generic_shrink(self, d):
        fu, fs = qfim_uqcm_entries(d), qfim_shrink_entries(d, eta_uqcm(d))
        assert abs(fu[0] - fs[0]) <= 1e-14
        assert abs(fu[1] - fs[1]) <= 1e-14

    @pytest.mark.parametrize("d", range(2, 65))
    def test_pqcm_equals_generic_shrink(self, d):
        fp, fs = qfim_pqcm_entries(d), qfim_shrink_entries(d, eta_pqcm(d))
        assert abs(fp[0] - fs[0]) <= 1e-12
        assert abs(fp[1] - fs[1]) <= 1e-12

    def test_pqcm_minus_uqcm_psd(self):
        for d in range(2, 65):
            gap = qfim_pqcm_closed(d) - qfim_uqcm_closed(d)
            assert np.linalg.eigvalsh(gap)[0] >= -1e-12

    def test_pqcm_diagonal_dominates(self):
        for d in range(2, 1001):
            assert qfim_pqcm_entries(d)[0] >= qfim_uqcm_entries(d)[0]

    def test_cloning_shrinks_information(self):
        # diagonal bounded by the shrinking factor times the pure value
        for d in range(2, 65):
            assert qfim_uqcm_entries(d)[0] <= eta_uqcm(d) * qfim_pure_entries(d)[0]


class TestStructureResiduals:
    @pytest.mark.parametrize("d", [2, 3, 8, 32])
    def test_relation_holds_for_all_families(self, d):
        for f in (qfim_pure(d), qfim_uqcm_closed(d), qfim_pqcm_closed(d), qfim_shrink_closed(d, 0.37)):
            dspread, ospread, relation = equatorial_structure_residuals(f)
            assert dspread < 1e-10
            assert ospread < 1e-10
            assert relation < 1e-10

    def test_detects_broken_structure(self):
        f = qfim_pure(4).copy()
        f[0, 0] += 0.1
        assert equatorial_structure_residuals(f)[0] > 0.05


class TestSpectralRoute:
    @pytest.mark.parametrize("d,eta", [(2, 0.5), (4, 0.8), (7, 1.0)])
    def test_reconstruction(self, d, eta):
        p = PhaseVector.random(d, np.random.default_rng(d))
        sd = spectral_output(p, eta)
        assert np.abs(reconstruct_density(sd) - shrink_output(p, eta)).max() < 1e-12

    def test_support_rank_pure(self):
        assert spectral_output(PhaseVector.zero(5), 1.0).support_rank == 1

    def test_uqcm_qutrit_eigenvalues(self):
        sd = spectral_output(PhaseVector.zero(3), eta_uqcm(3))
        assert_allclose(sd.eigenvalues, [0.75, 0.125, 0.125], atol=1e-15)
        assert sd.support_rank == 3

    @pytest.mark.parametrize("d", range(2, 11))
    def test_reproduces_uqcm_closed_form(self, d):
        p = PhaseVector.random(d, np.random.default_rng(50 + d))
        f = qfim_shrink_spectral(p, eta_uqcm(d))
        assert np.abs(f - qfim_uqcm_closed(d)).max() < 1e-10

    @pytest.mark.parametrize("d", range(2, 11))
    def test_reproduces_pqcm_closed_form(self, d):
        p = PhaseVector.random(d, np.random.default_rng(60 + d))
        f = qfim_shrink_spectral(p, eta_pqcm(d))
        assert np.abs(f - qfim_pqcm_closed(d)).max() < 1e-10

    def test_rank_one_reduces_to_pure(self):
        d = 6
        p = PhaseVector.random(d, np.random.default_rng(1))
        f = qfim_shrink_spectral(p, 1.0)
        assert np.abs(f - qfim_pure(d)).max() < 1e-12

    def test_zero_eigenvalue_derivatives_change_nothing(self):
        # the eigenvalues carry no phase dependence, so the classical part is 0
        d = 4
        p = PhaseVector.random(d, np.random.default_rng(2))
        sd = spectral_output(p, eta_uqcm(d))
        dv = basis_derivatives(p)
        with_dlams = qfim_from_spectral(sd, dv, dlams=np.zeros((d - 1, d)))
        assert_allclose(with_dlams, qfim_from_spectral(sd, dv))

    def test_empty_support_raises(self):
        sd = SpectralDecomposition(np.zeros(3), np.eye(3, dtype=complex), 0)
        with pytest.raises(ValueError):
            qfim_from_spectral(sd, np.zeros((2, 3, 3), dtype=complex))

    def test_phase_independence(self):
        d = 5
        rng = np.random.default_rng(123)
        eta = eta_uqcm(d)
        ref = qfim_shrink_spectral(PhaseVector.random(d, rng), eta)
        for _ in range(9):
            f = qfim_shrink_spectral(PhaseVector.random(d, rng), eta)
            assert np.abs(f - ref).max() < 1e-10


class TestDiagonalTermSums:
    def test_qubit_values(self):
        # 4/d = 2 and 2(8+28+16+4)/(3*6*4) = 14/9; difference is the 4/9 diagonal
        first, second = uqcm_diagonal_terms(2)
        assert first == pytest.approx(2.0, abs=1e-12)
        assert second == pytest.approx(14 / 9, abs=1e-12)
        assert first - second == pytest.approx(4 / 9, abs=1e-12)

    @pytest.mark.parametrize("d", range(2, 13))
    def test_closed_forms(self, d):
        p = PhaseVector.random(d, np.random.default_rng(d))
        first, second = uqcm_diagonal_terms(d, p)
        second_closed = 2 * (d**3 + 7 * d**2 + 8 * d + 4) / ((d + 1) * (d + 4) * d**2)
        assert abs(first - 4 / d) < 1e-10
        assert abs(second - second_closed) < 1e-10
        assert abs((first - second) - qfim_uqcm_entries(d)[0]) < 1e-10

    def test_telescoping_identity(self):
        for d in range(2, 65):
            partial = sum(1.0 / (n * (n + 1)) for n in range(1, d))
            assert abs(partial - (1.0 - 1.0 / d)) < 1e-14
