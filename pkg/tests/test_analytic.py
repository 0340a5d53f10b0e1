import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import simpson
from scipy.special import eval_hermite

from squeezelab import analytic as an
from squeezelab import fock as fk
from squeezelab import gates as gt
from squeezelab import multiboson as mb
from squeezelab.errors import (
    NumericDomainError,
    OutOfBranchError,
    ParameterError,
    PoleError,
    PrecisionError,
)

X = an.GridSpec().points()
N = 256


def maxabs(v):
    return float(np.max(np.abs(v)))


class TestHermite:
    def test_values_at_origin(self):
        assert an.hermite_psi(0, 0.0) == pytest.approx(math.pi ** -0.25, rel=1e-15)
        assert an.hermite_psi(1, 0.0) == 0.0

    def test_against_raw_polynomials(self):
        x = np.linspace(-4, 4, 81)
        for n in (0, 1, 5, 17, 30):
            raw = eval_hermite(n, x) * np.exp(-x**2 / 2) / math.sqrt(2.0**n * math.factorial(n) * math.sqrt(math.pi))
            assert maxabs(an.hermite_psi(n, x) - raw) < 1e-12

    def test_normalization(self):
        x = np.linspace(-12, 12, 4801)
        rows = an.hermite_psi_all(40, x)
        norms = simpson(rows**2, x=x, axis=1)
        assert maxabs(norms - 1) < 1e-8

    def test_no_overflow_at_high_order(self):
        x = np.linspace(-70, 70, 301)
        v = an.hermite_psi(2000, x)
        assert np.all(np.isfinite(v))
        # normalized functions never exceed the Gaussian peak
        assert maxabs(v) < 1.0


class TestCoherent:
    def test_ground_state(self):
        assert maxabs(an.coherent_wavefunction(0, 0, X) - an.hermite_psi(0, X)) < 1e-15

    def test_fock_oracle(self):
        alpha = (1 + 1j) / math.sqrt(2)
        x0, p0 = an.xp_from_alpha(alpha)
        ref = an.fock_sum(gt.coherent_state(alpha, 128), X)
        assert maxabs(an.coherent_wavefunction(x0, p0, X) - ref) < 1e-8

    def test_peak(self):
        assert abs(an.coherent_wavefunction(1.3, -0.4, 1.3)) == pytest.approx(math.pi ** -0.25)

    def test_conversions(self):
        a = 0.3 - 1.1j
        assert an.alpha_from_xp(*an.xp_from_alpha(a)) == pytest.approx(a, abs=1e-15)


class TestSqueezed:
    def test_z0_is_coherent(self):
        psi = an.squeezed_wavefunction(0.5, 0.2, gt.SqueezeSpec(0), X)
        assert maxabs(psi - an.coherent_wavefunction(0.5, 0.2, X)) < 1e-15

    def test_real_z_fock_oracle(self):
        ref = an.fock_sum(gt.squeezed_state(0, gt.SqueezeSpec(0.5), None, N), X)
        assert maxabs(an.squeezed_wavefunction(0, 0, gt.SqueezeSpec(0.5), X) - ref) < 1e-6
        assert maxabs(an.squeezed_wavefunction_real(0, 0, 0.5, X) - ref) < 1e-6

    def test_real_z_width(self):
        r = 0.6
        x = np.linspace(-15, 15, 6001)
        dens = np.abs(an.squeezed_wavefunction_real(0, 0, r, x)) ** 2
        # |psi|^2 is a Gaussian of variance s^2 / 2
        assert math.sqrt(2 * simpson(x**2 * dens, x=x)) == pytest.approx(math.exp(r), rel=1e-10)

    def test_reduction_to_real_formula(self):
        for z in (0.7, -0.4):
            a = an.squeezed_wavefunction(0.3, -0.8, gt.SqueezeSpec(z), X)
            b = an.squeezed_wavefunction_real(0.3, -0.8, z, X)
            assert maxabs(a - b) < 1e-14

    def test_shape_invariants(self):
        sh = an.squeeze_shape(gt.SqueezeSpec(-0.5))
        assert sh.kappa == 0.0
        assert sh.S_width == pytest.approx(math.exp(-0.5))

    def test_complex_z_fock_oracle(self):
        spec = gt.SqueezeSpec.polar(0.5, math.pi / 3)
        alpha = 0.4 + 0.3j
        x0, p0 = an.xp_from_alpha(alpha)
        ref = an.fock_sum(gt.squeezed_state(alpha, spec, None, N), X)
        assert maxabs(an.squeezed_wavefunction(x0, p0, spec, X) - ref) < 1e-6

    def test_other_denominator_reading_fails(self):
        # kappa over s = e^r instead of the width S does not reproduce the state
        spec = gt.SqueezeSpec.polar(0.5, math.pi / 3)
        ref = an.fock_sum(gt.squeezed_state(0, spec, None, N), X)
        assert maxabs(an.squeezed_wavefunction(0, 0, spec, X, reading="s") - ref) > 1e-3


class TestMultibosonWavefunction:
    def test_generating_function(self):
        alpha = 0.9
        env = an.PI_QUARTER * np.exp(-0.5 * (alpha**2 + X**2))
        I = an.multiboson_I_sum(alpha, mb.MultibosonParams(1), X)
        assert maxabs(env * (I - an.generating_function(alpha, X))) < 1e-8
        # away from the far tails the sum itself agrees in relative terms
        mid = np.abs(X) < 3
        assert maxabs(I[mid] / an.generating_function(alpha, X[mid]) - 1) < 1e-10

    def test_fock_oracle_31(self):
        p = mb.MultibosonParams(3, 1)
        ref = an.fock_sum(gt.multiboson_coherent_state(0.8, p, N), X)
        assert maxabs(an.multiboson_wavefunction(0.8, p, X) - ref) < 1e-7

    def test_alpha0_is_eigenfunction(self):
        p = mb.MultibosonParams(4, 3)
        psi = an.multiboson_wavefunction(0, p, X)
        assert maxabs(psi - an.hermite_psi(3, X)) < 1e-14

    @pytest.mark.parametrize("j,k", [(2, 0), (2, 1), (4, 1)])
    def test_parity(self, j, k):
        psi = an.multiboson_wavefunction(0.7, mb.MultibosonParams(j, k), X)
        assert maxabs(psi[::-1] - (-1) ** k * psi) < 1e-13


class TestVariances:
    def test_j3(self):
        v = an.variance_formulas(math.sqrt(2), mb.MultibosonParams(3, 1))
        assert v.var_x == v.var_p == pytest.approx(7.5)
        assert v.C == 0.0

    def test_j3_fock(self):
        p = mb.MultibosonParams(3, 1)
        psi = gt.multiboson_coherent_state(math.sqrt(2), p, N)
        vx, vp = an.fock_variances(psi)
        assert abs(vx - 7.5) < 1e-8 and abs(vp - 7.5) < 1e-8
        assert abs(fk.expectation(fk.position(N), psi)) < 1e-12

    def test_j2_alpha0(self):
        v = an.variance_formulas(0, mb.MultibosonParams(2, 1))
        assert v.C == 0.0 and v.var_x == 1.5

    def test_c2_against_fock(self):
        psi = gt.multiboson_coherent_state(0.5, mb.MultibosonParams(2, 0), N)
        a = fk.lowering(N)
        C_fock = 0.5 * fk.expectation(a @ a + a.dag @ a.dag, psi).real
        assert abs(an.c2_series(0.5, 0) - C_fock) < 1e-8

    def test_needs_j2(self):
        with pytest.raises(ParameterError):
            an.variance_formulas(1.0, mb.MultibosonParams(1))


class TestDynamics:
    def test_t0_and_quarter_period(self):
        r = 0.7
        s = math.exp(r)
        u = an.uncertainty_evolution(gt.SqueezeSpec(r), [0.0, math.pi / 2])
        assert u.var_x[0] == pytest.approx(s * s / 2)
        assert u.var_p[0] == pytest.approx(1 / (2 * s * s))
        assert u.product[0] == pytest.approx(0.25, abs=1e-15)
        assert u.var_x[1] == pytest.approx(1 / (2 * s * s))

    def test_matches_heisenberg_oracle(self):
        t = np.linspace(0, 2 * np.pi, 64)
        spec = gt.SqueezeSpec(0.5)
        u = an.uncertainty_evolution(spec, t)
        vx, vp = an.heisenberg_variances(gt.squeezed_state(1.0, spec, None, N), t)
        assert maxabs(u.var_x / vx - 1) < 1e-7
        assert maxabs(u.var_p / vp - 1) < 1e-7
        assert maxabs(u.product / (vx * vp) - 1) < 1e-7

    def test_complex_z_rejected(self):
        with pytest.raises(ParameterError):
            an.uncertainty_evolution(gt.SqueezeSpec(0.5j), [0.0])


class TestKummer:
    def test_c0(self):
        assert an.confluent_hypergeometric(0.3, 1.7, 0.0)[0] == 1.0

    @given(st.floats(-20, 20))
    def test_collapse_to_exp(self, c):
        v, err = an.confluent_hypergeometric(1, 1, c)
        assert abs(v - math.exp(c)) <= 1e-12 * math.exp(c) + 1e-300
        assert err >= 0
        v2, _ = an.confluent_hypergeometric(0.5, 0.5, c)
        assert abs(v2 - math.exp(c)) <= 1e-12 * math.exp(c) + 1e-300

    def test_against_scipy(self):
        from scipy.special import hyp1f1
        c = np.linspace(-30, 30, 61)
        v, err = an.confluent_hypergeometric(0.4, 1.5, c)
        assert np.all(np.abs(v - hyp1f1(0.4, 1.5, c)) <= 1e-12 * np.abs(v))

    def test_pole(self):
        with pytest.raises(PoleError):
            an.confluent_hypergeometric(1, -2, 0.5)

    def test_cap(self):
        with pytest.raises(PrecisionError):
            an.confluent_hypergeometric(1, 1, 500.0, max_terms=50)


class TestEvenOddSqueezed:
    XG = np.linspace(-14, 14, 5601)

    @pytest.mark.parametrize("parity", ["even", "odd"])
    def test_eigen_residual(self, parity):
        psi = an.even_odd_squeezed_wavefunction(0.7, 1.5, parity, self.XG)
        assert an.q_equation_residual(psi, self.XG, 1.5, 0.7) < 1e-5

    def test_odd_vanishes_at_origin(self):
        x = np.linspace(-5, 5, 101)
        psi = an.even_odd_squeezed_wavefunction(0.5, 1.2, "odd", x)
        assert psi[50] == 0.0

    def test_normalized(self):
        psi = an.even_odd_squeezed_wavefunction(0.5, 2.0, "even", self.XG)
        assert simpson(psi**2, x=self.XG) == pytest.approx(1.0, abs=1e-12)

    def test_q1_limit(self):
        x = np.linspace(-10, 10, 2001)
        for parity in ("even", "odd"):
            psi = an.even_odd_squeezed_wavefunction(0.7, 1.0, parity, x)
            ref = an.fock_sum(gt.even_odd_displacement(0.7, parity, N), x).real
            ov = abs(np.trapezoid(psi * ref, x=x)) / math.sqrt(np.trapezoid(ref**2, x=x) * np.trapezoid(psi**2, x=x))
            assert ov > 1 - 1e-6

    def test_limit_is_continuous(self):
        x = np.linspace(-10, 10, 2001)
        near = an.even_odd_squeezed_wavefunction(0.7, 1 + 1e-5, "even", x)
        at = an.even_odd_squeezed_wavefunction(0.7, 1.0, "even", x)
        assert np.trapezoid(near * at, x=x) > 1 - 1e-6

    def test_domain_errors(self):
        with pytest.raises(OutOfBranchError):
            an.even_odd_squeezed_wavefunction(0.5, 0.9, "even", self.XG)
        with pytest.raises(ParameterError):
            an.even_odd_squeezed_wavefunction(0.5 + 0.1j, 1.5, "even", self.XG)

    def test_residual_needs_uniform_grid(self):
        x = np.array([0.0, 0.1, 0.3, 0.35, 0.5, 0.9])
        with pytest.raises(ParameterError):
            an.q_equation_residual(np.ones(6), x, 1.5, 0.5)


class TestQuadrature:
    def test_grid_integral_gaussian(self):
        v = an.grid_integral(lambda x: np.exp(-x**2), an.GridSpec(-10, 10, 401))
        assert v == pytest.approx(math.sqrt(math.pi), rel=1e-10)

    def test_too_coarse(self):
        with pytest.raises(NumericDomainError):
            an.grid_integral(lambda x: np.cos(40 * x) ** 2, an.GridSpec(-1, 1, 11))

    def test_bad_grid(self):
        with pytest.raises(ParameterError):
            an.GridSpec(1, 0, 10)
        with pytest.raises(ParameterError):
            an.GridSpec(0, 1, 1)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 40))
    def test_hermite_norm_quadrature(self, n):
        v = an.norm_on_grid(lambda x: an.hermite_psi(n, x), an.GridSpec(-12, 12, 1601))
        assert abs(v - 1) < 1e-8

    @settings(max_examples=20, deadline=None)
    @given(st.complex_numbers(max_magnitude=2.0))
    def test_fock_sum_matches_closed_form(self, alpha):
        x0, p0 = an.xp_from_alpha(alpha)
        ref = an.fock_sum(gt.coherent_state(alpha, 128), X)
        assert maxabs(an.coherent_wavefunction(x0, p0, X) - ref) < 1e-8
