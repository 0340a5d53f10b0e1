"""Closed-form wavefunctions, variances and special functions.

Units: hbar = m = omega = 1, so a = (x + d/dx)/sqrt2 and alpha = (x0 + i p0)/sqrt2.
Hermite polynomials never appear raw; everything is expressed through the
normalized oscillator eigenfunctions psi_n, generated by their three-term
recurrence with a running log scale so that neither 2^n n! nor e^{-x^2/2}
over- or underflows.

Each closed form has a Fock-space counterpart here (``fock_sum``,
``fock_variances``, ``heisenberg_variances``, ``q_equation_residual``) used as an
independent oracle by the verification suite and the CLI.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .errors import (
    NumericDomainError,
    OutOfBranchError,
    ParameterError,
    PoleError,
    PrecisionError,
    SeriesDivergenceError,
)
from .fock import StateVector, expectation, momentum, position, quadratures
from .gates import SqueezeSpec
from .multiboson import MultibosonParams

SQRT2 = math.sqrt(2.0)
PI_QUARTER = math.pi ** -0.25
_RESCALE = 1e150


@dataclass(frozen=True)
class GridSpec:
    x_min: float = -6.0
    x_max: float = 6.0
    n_points: int = 241

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ParameterError(f"grid needs x_min < x_max, got [{self.x_min}, {self.x_max}]")
        if self.n_points < 2:
            raise ParameterError(f"grid needs n_points >= 2, got {self.n_points}")

    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    def refined(self) -> GridSpec:
        return GridSpec(self.x_min, self.x_max, 2 * self.n_points - 1)


def alpha_from_xp(x0: float, p0: float) -> complex:
    return complex(x0, p0) / SQRT2


def xp_from_alpha(alpha: complex) -> tuple[float, float]:
    alpha = complex(alpha)
    return SQRT2 * alpha.real, SQRT2 * alpha.imag


# --- Hermite functions -------------------------------------------------------

def _hermite_rows(x, log_prefactor):
    """Yield exp(log_prefactor) * H_m(x) / sqrt(2^m m!) for m = 0, 1, 2, ...

    The recurrence runs on scaled values and folds the scale into a log term
    whenever the magnitude passes 1e150.
    """
    x = np.asarray(x, dtype=float)
    logs = np.broadcast_to(np.asarray(log_prefactor, dtype=float), x.shape).copy()
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    m = 0
    while True:
        yield cur * np.exp(logs)
        m += 1
        nxt = math.sqrt(2.0 / m) * x * cur - math.sqrt((m - 1) / m) * prev
        prev, cur = cur, nxt
        big = np.abs(cur) > _RESCALE
        if big.any():
            cur = np.where(big, cur / _RESCALE, cur)
            prev = np.where(big, prev / _RESCALE, prev)
            logs = np.where(big, logs + math.log(_RESCALE), logs)


def hermite_psi_all(n_max: int, x) -> np.ndarray:
    """Rows psi_0(x), ..., psi_{n_max}(x)."""
    if n_max < 0:
        raise ParameterError(f"n must be >= 0, got {n_max}")
    x = np.asarray(x, dtype=float)
    gen = _hermite_rows(x, -0.5 * x**2 + math.log(PI_QUARTER))
    return np.array([next(gen) for _ in range(n_max + 1)])


def hermite_psi(n: int, x):
    """Normalized oscillator eigenfunction psi_n(x)."""
    out = hermite_psi_all(n, x)[-1]
    return out if np.ndim(x) else float(out)


def fock_sum(psi: StateVector, x) -> np.ndarray:
    """Position-space wavefunction sum_n <n|psi> psi_n(x)."""
    x = np.asarray(x, dtype=float)
    return psi.amps @ hermite_psi_all(psi.cutoff - 1, x)


# --- coherent and squeezed wavefunctions -----------------------------------

def coherent_wavefunction(x0: float, p0: float, x):
    """pi^{-1/4} exp[-(x - x0)^2/2 + i p0 x - i x0 p0/2].

    The constant phase e^{-i x0 p0/2} makes this exactly D(alpha) psi_0.
    """
    x = np.asarray(x, dtype=float)
    return PI_QUARTER * np.exp(-0.5 * (x - x0) ** 2 + 1j * p0 * x - 0.5j * x0 * p0)


@dataclass(frozen=True)
class SqueezeShape:
    S_width: float
    kappa: float
    s: float


def squeeze_shape(spec: SqueezeSpec, reading: str = "S") -> SqueezeShape:
    """Width S = cosh r + (z1/r) sinh r and chirp kappa = z2 sinh r / (2 r D).

    ``reading`` picks the denominator D: ``"S"`` uses the width S (this is the
    one that reproduces S(z) psi_0), ``"s"`` uses s = e^r.
    """
    r = spec.r
    s = math.exp(r)
    if r == 0.0:
        return SqueezeShape(1.0, 0.0, 1.0)
    width = math.cosh(r) + spec.z1 / r * math.sinh(r)
    if reading == "S":
        denom = width
    elif reading == "s":
        denom = s
    else:
        raise ParameterError(f"reading must be 'S' or 's', got {reading!r}")
    return SqueezeShape(width, spec.z2 * math.sinh(r) / (2.0 * r * denom), s)


def squeezed_wavefunction(x0: float, p0: float, spec: SqueezeSpec, x, reading: str = "S"):
    """D(alpha) S(z) psi_0 as a complex Gaussian in (S, kappa)."""
    shape = squeeze_shape(spec, reading)
    if not shape.S_width > 0:
        raise ParameterError(f"squeeze width must be positive, got {shape.S_width}")
    x = np.asarray(x, dtype=float)
    w = shape.S_width * (1 + 2j * shape.kappa)
    expo = -((x - x0) ** 2) * (1.0 / (2.0 * shape.S_width**2 * (1 + 2j * shape.kappa)) - 1j * shape.kappa)
    return PI_QUARTER * np.exp(-0.5j * x0 * p0) / np.sqrt(w) * np.exp(expo + 1j * p0 * x)


def squeezed_wavefunction_real(x0: float, p0: float, r: float, x):
    """Real positive z = r: (pi s^2)^{-1/4} exp[-(x - x0)^2/(2 s^2) + i p0 x], s = e^r, times e^{-i x0 p0/2}."""
    s = math.exp(r)
    x = np.asarray(x, dtype=float)
    return (math.pi * s * s) ** -0.25 * np.exp(-((x - x0) ** 2) / (2 * s * s) + 1j * p0 * x - 0.5j * x0 * p0)


# --- multiboson coherent states ----------------------------------------------

def _multiboson_series(alpha, params, x, log_prefactor, rtol, max_terms):
    alpha = complex(alpha)
    j, k = params.j, params.k
    gen = _hermite_rows(np.asarray(x, dtype=float), log_prefactor)
    total = np.zeros(np.shape(x), dtype=complex)
    coef = 1.0 + 0j  # alpha^n / sqrt(n!)
    m = 0
    for n in range(max_terms):
        target = j * n + k
        while m < target:
            next(gen)
            m += 1
        row = next(gen)
        m += 1
        total += coef * row
        coef *= alpha / math.sqrt(n + 1)
        # |psi_m| <= 1, so the remaining terms are bounded by a geometric tail
        if abs(alpha) < math.sqrt(n + 2) and abs(coef) / (1 - abs(alpha) / math.sqrt(n + 2)) < rtol:
            return total
    raise SeriesDivergenceError(f"multiboson series not converged after {max_terms} terms (|alpha|={abs(alpha):g})")


def multiboson_I_sum(alpha: complex, params: MultibosonParams, x, *, rtol: float = 1e-17, max_terms: int = 2000):
    """I_(j,k)(alpha, x) = sum_n alpha^n H_{jn+k}(x) / sqrt(n! (jn+k)! 2^{jn+k}).

    Carries a factor of order e^{x^2/2}; use ``multiboson_wavefunction`` for the state.
    """
    return _multiboson_series(alpha, params, x, 0.0, rtol, max_terms)


def multiboson_wavefunction(alpha: complex, params: MultibosonParams, x, *, rtol: float = 1e-17,
                            max_terms: int = 2000):
    """pi^{-1/4} exp[-(|alpha|^2 + x^2)/2] I_(j,k)(alpha, x), summed without forming e^{x^2/2}."""
    x = np.asarray(x, dtype=float)
    logp = -0.5 * x**2 + math.log(PI_QUARTER) - 0.5 * abs(complex(alpha)) ** 2
    return _multiboson_series(alpha, params, x, logp, rtol, max_terms)


def generating_function(alpha: complex, x):
    """I_(1,0)(alpha, x) = exp(sqrt2 alpha x - alpha^2/2)."""
    x = np.asarray(x, dtype=float)
    alpha = complex(alpha)
    return np.exp(SQRT2 * alpha * x - 0.5 * alpha * alpha)


# --- variances ----------------------------------------------------------------

@dataclass(frozen=True)
class Variances:
    var_x: float
    var_p: float
    C: float


def c2_series(alpha: complex, k: int, *, rtol: float = 1e-12, max_terms: int = 10_000) -> float:
    """C_(2,k) = (alpha + conj alpha) e^{-|alpha|^2} sum_n |alpha|^{2n}/n! sqrt((n+1+k/2)(n+1/2+k/2)/(n+1))."""
    alpha = complex(alpha)
    pref = 2.0 * alpha.real
    if pref == 0.0:
        return 0.0
    a2 = abs(alpha) ** 2
    w = math.exp(-a2)  # Poisson weight e^{-|a|^2} |a|^{2n}/n!
    total = 0.0
    for n in range(max_terms):
        term = w * math.sqrt((n + 1 + k / 2) * (n + 0.5 + k / 2) / (n + 1))
        total += term
        if n > a2 and term < rtol * 1e-4 * total:
            return pref * total
        w *= a2 / (n + 1)
    raise SeriesDivergenceError(f"C_(2,k) series not converged in {max_terms} terms")


def variance_formulas(alpha: complex, params: MultibosonParams) -> Variances:
    """Position and momentum variances over |alpha(j,k)>, j >= 2."""
    if params.j < 2:
        raise ParameterError("closed-form multiboson variances need j >= 2")
    base = 0.5 + params.k + params.j * abs(complex(alpha)) ** 2
    if params.j > 2:
        return Variances(base, base, 0.0)
    C = c2_series(alpha, params.k)
    return Variances(base + C, base - C, C)


def fock_variances(psi: StateVector) -> tuple[float, float]:
    """(Delta x)^2 and (Delta p)^2 of a Fock-space state."""
    x, p = position(psi.cutoff), momentum(psi.cutoff)
    return _var(x, psi), _var(p, psi)


def quadrature_variances(A, psi: StateVector) -> tuple[float, float]:
    """(Delta X)^2, (Delta P)^2 for X, P built from the lowering operator A."""
    X, P = quadratures(A)
    return _var(X, psi), _var(P, psi)


def _var(O, psi):
    m = expectation(O, psi).real
    return float(expectation(O @ O, psi).real - m * m)


# --- time-dependent uncertainties -----------------------------------------------

@dataclass(frozen=True)
class UncertaintySeries:
    t: np.ndarray
    var_x: np.ndarray
    var_p: np.ndarray
    product: np.ndarray


def _real_s(spec: SqueezeSpec) -> float:
    if spec.z2 != 0.0:
        raise ParameterError("time-dependent uncertainties are given for real z only")
    return math.exp(spec.z1)


def uncertainty_evolution(spec: SqueezeSpec, t) -> UncertaintySeries:
    """Variances of x(t) and p(t) for |alpha, z> with real z (omega = 1, s = e^z).

    The product is ((Delta x)(Delta p))^2 = 1/4 [1 + 1/4 (s^2 - 1/s^2)^2 sin^2(2t)].
    """
    s2 = _real_s(spec) ** 2
    t = np.asarray(t, dtype=float)
    c2, sn2 = np.cos(t) ** 2, np.sin(t) ** 2
    vx = 0.5 * (s2 * c2 + sn2 / s2)
    vp = 0.5 * (c2 / s2 + s2 * sn2)
    prod = 0.25 * (1.0 + 0.25 * (s2 - 1.0 / s2) ** 2 * np.sin(2 * t) ** 2)
    return UncertaintySeries(t, vx, vp, prod)


def heisenberg_variances(psi: StateVector, t) -> tuple[np.ndarray, np.ndarray]:
    """Fock oracle: variances of x cos t + p sin t and p cos t - x sin t over psi."""
    x, p = position(psi.cutoff), momentum(psi.cutoff)
    ex, ep = expectation(x, psi).real, expectation(p, psi).real
    xx = expectation(x @ x, psi).real - ex * ex
    pp = expectation(p @ p, psi).real - ep * ep
    cov = 0.5 * expectation(x @ p + p @ x, psi).real - ex * ep
    t = np.asarray(t, dtype=float)
    c, s = np.cos(t), np.sin(t)
    vx = c * c * xx + s * s * pp + 2 * s * c * cov
    vp = c * c * pp + s * s * xx - 2 * s * c * cov
    return vx, vp


# --- confluent hypergeometric function ----------------------------------------

def confluent_hypergeometric(a: float, b: float, c, *, rtol: float = 1e-14, max_terms: int = 20_000):
    """Kummer's function sum_n (a)_n c^n / ((b)_n n!) by direct summation.

    ``c`` may be a scalar or an array. Returns (value, error_estimate).
    Summation stops once the terms have started shrinking and the last term
    is below ``rtol`` relative to the running sum. Negative arguments go
    through Phi(a, b; c) = e^c Phi(b - a, b; -c) so the summed series never
    alternates in sign.
    """
    if b <= 0 and float(b).is_integer():
        raise PoleError(f"b = {b} is a non-positive integer")
    scalar = np.ndim(c) == 0
    c = np.atleast_1d(np.asarray(c, dtype=float))
    neg = c < 0
    value = np.empty_like(c)
    err = np.empty_like(c)
    if (~neg).any():
        value[~neg], err[~neg] = _kummer_series(a, b, c[~neg], rtol, max_terms)
    if neg.any():
        v, e = _kummer_series(b - a, b, -c[neg], rtol, max_terms)
        scale = np.exp(c[neg])
        value[neg], err[neg] = scale * v, scale * e
    if scalar:
        return float(value[0]), float(err[0])
    return value, err


def _kummer_series(a, b, c, rtol, max_terms):
    total = np.ones_like(c)
    absum = np.ones_like(c)
    term = np.ones_like(c)
    for n in range(max_terms):
        term = term * (a + n) * c / ((b + n) * (n + 1))
        total += term
        absum += np.abs(term)
        ratio_small = np.abs((a + n + 1) * c) < np.abs((b + n + 1) * (n + 2))
        done = (np.abs(term) <= rtol * np.abs(total)) & ratio_small
        if done.all():
            break
    else:
        raise PrecisionError(f"confluent hypergeometric series hit the {max_terms}-term cap")
    return total, np.abs(term) + np.finfo(float).eps * (n + 2) * absum


# --- even/odd states ----------------------------------------------------------

def even_odd_coherent_wavefunction(alpha: float, parity: str, x):
    """Unnormalized [D(alpha) +- D(-alpha)] psi_0 for real alpha."""
    x = np.asarray(x, dtype=float)
    x0 = SQRT2 * alpha
    sign = _parity_sign(parity)
    return np.exp(-0.5 * (x - x0) ** 2) + sign * np.exp(-0.5 * (x + x0) ** 2)


def _parity_sign(parity):
    if parity not in ("even", "odd"):
        raise ParameterError(f"parity must be 'even' or 'odd', got {parity!r}")
    return 1.0 if parity == "even" else -1.0


def even_odd_squeezed_wavefunction(alpha: float, q: float, parity: str, x, *, normalize: bool = True,
                                   limit_tol: float = 1e-6):
    """Eigenfunctions of (1+q)/2 aa + (1-q)/2 a^dag a^dag with eigenvalue alpha^2.

    even: exp[-x^2 (q + D)/2] Phi(1/4 + alpha^2/(2D), 1/2; D x^2)
    odd:  x exp[-x^2 (q + D)/2] Phi(3/4 + alpha^2/(2D), 3/2; D x^2),  D = sqrt(q^2 - 1).

    Within ``limit_tol`` of q = 1 the even/odd coherent state is used. With
    ``normalize`` the result is scaled to unit norm by Simpson quadrature over
    ``x``, which must then be a uniform grid covering the state.
    """
    if isinstance(alpha, complex) or np.iscomplexobj(alpha):
        raise ParameterError("even/odd squeezed solutions are implemented for real alpha only")
    if q < 1:
        raise OutOfBranchError(f"q = {q} < 1 is outside the real branch")
    sign = _parity_sign(parity)
    x = np.asarray(x, dtype=float)
    if q - 1 < limit_tol:
        psi = even_odd_coherent_wavefunction(alpha, parity, x)
    else:
        D = math.sqrt(q * q - 1)
        a = (0.25 if sign > 0 else 0.75) + alpha**2 / (2 * D)
        b = 0.5 if sign > 0 else 1.5
        phi, _ = confluent_hypergeometric(a, b, D * x**2)
        with np.errstate(under="ignore"):
            env = np.exp(-0.5 * x**2 * (q + D))
        psi = env * phi * (1.0 if sign > 0 else x)
        if not np.all(np.isfinite(psi)):
            raise NumericDomainError("even/odd squeezed wavefunction overflowed; shrink the grid")
    if normalize:
        nrm = simpson(psi**2, x=x)
        if not nrm > 0:
            raise NumericDomainError("wavefunction has zero norm on the grid")
        psi = psi / math.sqrt(nrm)
    return psi


def _d1(f, h):
    """Fourth-order central first derivative on interior points [2:-2]."""
    return (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)


def _d2(f, h):
    return (-f[:-4] + 16 * f[1:-3] - 30 * f[2:-2] + 16 * f[3:-1] - f[4:]) / (12 * h * h)


def q_equation_residual(psi, x, q: float, alpha: float) -> float:
    """Relative L2 residual of [(1+q)/2 aa + (1-q)/2 a^dag a^dag] psi - alpha^2 psi.

    aa = (x + d/dx)^2 / 2 and a^dag a^dag = (x - d/dx)^2 / 2 are applied with
    fourth-order finite differences on a uniform grid.
    """
    x = np.asarray(x, dtype=float)
    psi = np.asarray(psi)
    h = x[1] - x[0]
    if not np.allclose(np.diff(x), h, rtol=1e-9, atol=0):
        raise ParameterError("finite-difference residual needs a uniform grid")
    d1, d2 = _d1(psi, h), _d2(psi, h)
    xi, f = x[2:-2], psi[2:-2]
    aa = 0.5 * (xi**2 * f + 2 * xi * d1 + f + d2)
    adad = 0.5 * (xi**2 * f - 2 * xi * d1 - f + d2)
    lhs = 0.5 * (1 + q) * aa + 0.5 * (1 - q) * adad
    rhs = alpha**2 * f
    return float(np.sqrt(simpson(np.abs(lhs - rhs) ** 2, x=xi) / simpson(np.abs(rhs) ** 2, x=xi)))


# --- quadrature ---------------------------------------------------------------

def grid_integral(func, grid: GridSpec, *, tol: float = 1e-8) -> float:
    """Simpson integral of func over the grid, checked against a doubled grid."""
    coarse = simpson(func(grid.points()), x=grid.points())
    fine_grid = grid.refined()
    fine = simpson(func(fine_grid.points()), x=fine_grid.points())
    if abs(fine - coarse) > tol * max(1.0, abs(fine)):
        raise NumericDomainError(f"grid too coarse: integral changed by {abs(fine - coarse):.2e} on refinement")
    return float(fine)


def norm_on_grid(psi_func, grid: GridSpec, *, tol: float = 1e-8) -> float:
    """Integral of |psi|^2 over the grid, with refinement check."""
    return grid_integral(lambda x: np.abs(psi_func(x)) ** 2, grid, tol=tol)
