import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from squeezelab import fock as fk
from squeezelab import multiboson as mb
from squeezelab.errors import InvalidCutoffError, ParameterError, PrecisionError

P = mb.MultibosonParams


def test_params_validation():
    with pytest.raises(ParameterError):
        P(0)
    with pytest.raises(ParameterError):
        P(3, 3)
    with pytest.raises(ParameterError):
        P(2, -1)
    assert P(3, 1, (0.5,)).phase(0) == 0.5
    assert P(3, 1, (0.5,)).phase(4) == 0.0


class TestAlphaCoeff:
    def test_j2_k0(self):
        assert alpha_real(2, 0) == pytest.approx(1 / math.sqrt(2), rel=1e-15)

    @pytest.mark.parametrize("j", [2, 3, 4, 5, 7])
    def test_k0_is_inverse_root_factorial(self, j):
        assert alpha_real(j, 0) == pytest.approx(1 / math.sqrt(math.factorial(j)), rel=1e-15)

    @pytest.mark.parametrize("j,k", [(2, 1), (2, 5), (3, 4), (4, 9)])
    def test_zero_phases_give_real(self, j, k):
        assert mb.alpha_coeff(j, k).imag == 0.0

    def test_direct_evaluation(self):
        # j=2, k=2: l=0,1,2 terms written out by hand
        t0 = 1 / 2 * math.sqrt(1 / math.factorial(2))
        t1 = -math.sqrt(1 / math.factorial(3))
        t2 = math.sqrt(2 / (2 * math.factorial(4)))
        assert alpha_real(2, 2) == pytest.approx(t0 + t1 + t2, rel=1e-14)

    def test_double_and_mp_agree(self):
        # the alternating sum cancels, so relative accuracy degrades with k
        for k in range(0, mb.DOUBLE_MAX_K + 1, 3):
            d = mb.alpha_coeff(3, k)
            m = complex(mb.alpha_coeff(3, k, dps=80))
            assert abs(d - m) <= 1e-8 * abs(m)

    def test_double_range_is_capped(self):
        with pytest.raises(PrecisionError):
            mb.alpha_coeff(2, mb.DOUBLE_MAX_K + 1)

    def test_bad_arguments(self):
        with pytest.raises(ParameterError):
            mb.alpha_coeff(0, 1)
        with pytest.raises(ParameterError):
            mb.alpha_coeff(2, -1)

    def test_table_rows(self):
        table = mb.coeff_table(3, 5)
        rows = list(table.rows())
        assert len(rows) == 6
        assert rows[0][:2] == (3, 0)
        assert all(im == 0.0 for _, _, _, im in rows)


def alpha_real(j, k):
    return mb.alpha_coeff(j, k).real


class TestSpectral:
    def test_j1_is_ordinary_lowering(self):
        assert np.array_equal(mb.lowering_spectral(P(1), 40).mat, fk.lowering(40).mat)

    def test_a2_on_6(self):
        v = mb.lowering_spectral(P(2), 16) @ fk.basis(6, 16)
        assert np.allclose(v.amps, math.sqrt(3) * fk.basis(4, 16).amps, rtol=0, atol=1e-15)

    def test_a3_dag_on_4(self):
        v = mb.lowering_spectral(P(3), 16).dag @ fk.basis(4, 16)
        assert np.allclose(v.amps, math.sqrt(2) * fk.basis(7, 16).amps, rtol=0, atol=1e-15)

    def test_band_structure(self):
        A = mb.lowering_spectral(P(3), 30).mat
        off = A - np.diag(np.diagonal(A, 3), 3)
        assert not np.any(off)

    def test_small_cutoff(self):
        with pytest.raises(InvalidCutoffError):
            mb.lowering_spectral(P(4), 4)


class TestSeries:
    def test_j1_returns_lowering(self):
        assert np.array_equal(mb.lowering_series(P(1), 20).mat, fk.lowering(20).mat)

    def test_j2_band_only(self):
        A = mb.lowering_series(P(2), 64).mat
        off = A - np.diag(np.diagonal(A, 2), 2)
        assert np.max(np.abs(off)) == 0.0

    def test_kills_sector_ground(self):
        v = mb.lowering_series(P(2), 32) @ fk.basis(1, 32)
        assert v.norm() < 1e-14

    @pytest.mark.parametrize("j", [2, 3])
    def test_matches_spectral(self, j):
        res = mb.series_residuals(j, 61, 60)
        assert set(res) == set(range(j))
        assert max(res.values()) < 1e-8

    def test_matches_spectral_with_phases(self):
        res = mb.series_residuals(2, 40, 39, phases=(0.3, -1.1, 2.0, 0.7))
        assert max(res.values()) < 1e-8

    def test_double_precision_breaks_down(self):
        # cancellation in the alternating coefficients ruins the double-precision series past n ~ 20
        lo = mb.series_residuals(2, 21, 16, precision="double")
        hi = mb.series_residuals(2, 61, 60, precision="double")
        assert max(lo.values()) < 1e-8
        assert max(hi.values()) > 1.0


@pytest.mark.parametrize("j", [2, 3, 4])
def test_wilcox_form_matches_spectral_dagger(j):
    N = 64
    Ad = mb.lowering_spectral(P(j), N).dag.mat
    W = mb.raising_wilcox(P(j), N).mat
    assert np.max(np.abs(W - Ad)) < 1e-12


@pytest.mark.parametrize("j", [1, 2, 3, 4])
def test_canonical_and_grading(j):
    N = 128
    A = mb.lowering_spectral(P(j), N)
    C = fk.commutator(A, A.dag) - fk.identity(N)
    assert fk.window_residual(C, 2 * j) < 1e-10
    G = fk.commutator(fk.number_op(N), A) + A * j
    assert fk.window_residual(G, 2 * j) < 1e-10


@pytest.mark.parametrize("j", [1, 2, 3])
def test_su11_relations(j):
    N = 96
    Kp, Km, K0 = mb.su11_generators(P(j), N)
    g = 4 * j
    assert fk.window_residual(fk.commutator(K0, Kp) - Kp, g) < 1e-10
    assert fk.window_residual(fk.commutator(K0, Km) + Km, g) < 1e-10
    assert fk.window_residual(fk.commutator(Kp, Km) + K0 * 2, g) < 1e-10
    A = mb.lowering_spectral(P(j), N)
    assert fk.window_residual(fk.commutator(Km, A.dag) - A, g) < 1e-9
    assert fk.window_residual(fk.commutator(Kp, A) + A.dag, g) < 1e-9


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(10, 70), st.lists(st.floats(-math.pi, math.pi), max_size=8))
def test_sector_preservation(j, N, phases):
    N = max(N, j + 1)
    A = mb.lowering_spectral(P(j, 0, tuple(phases)), N).mat
    n = np.arange(N)
    cross = (n[:, None] % j) != (n[None, :] % j)
    assert not np.any(A[cross])


@given(st.integers(1, 6), st.integers(0, 5), st.integers(8, 90))
def test_sector_levels(j, k, N):
    k = k % j
    lv = mb.sector_levels(P(j, k), N)
    assert np.all(lv % j == k)
    assert lv.size == len(range(k, N, j))
