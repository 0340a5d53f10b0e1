"""Displacement and squeeze unitaries for ordinary and multiboson ladders.

Each unitary is available two ways: ``method="exp"`` exponentiates the
anti-Hermitian generator with a dense matrix exponential, ``method="bch"``
multiplies the disentangled (normal-ordered) factors, each of which is the
exponential of a single-band nilpotent matrix and is summed exactly.
Agreement between the two is checked on the columns the truncation does not
disturb.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateStateError, NumericDomainError, ParameterError, TransformMismatchError
from .fock import (
    DEFAULT_GUARD,
    NORM_TOL,
    FockOperator,
    StateVector,
    adequate_columns,
    basis,
    expm,
    expm_band,
    lowering,
    require_adequate,
)
from .multiboson import MultibosonParams, lowering_spectral

R_MAX = 2.0
METHODS = ("exp", "bch")


@dataclass(frozen=True)
class DisplacementSpec:
    alpha: complex

    def __post_init__(self):
        a = complex(self.alpha)
        if not cmath.isfinite(a):
            raise ParameterError(f"displacement amplitude must be finite, got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)


@dataclass(frozen=True)
class SqueezeSpec:
    """Complex squeeze parameter z = r e^{i theta} = z1 + i z2."""

    z: complex

    def __post_init__(self):
        z = complex(self.z)
        if not cmath.isfinite(z):
            raise ParameterError(f"squeeze parameter must be finite, got {self.z!r}")
        object.__setattr__(self, "z", z)

    @classmethod
    def polar(cls, r: float, theta: float = 0.0) -> SqueezeSpec:
        if r < 0:
            raise ParameterError(f"squeeze magnitude r must be >= 0, got {r}")
        return cls(cmath.rect(r, theta))

    @property
    def r(self) -> float:
        return abs(self.z)

    @property
    def theta(self) -> float:
        return cmath.phase(self.z)

    @property
    def z1(self) -> float:
        return self.z.real

    @property
    def z2(self) -> float:
        return self.z.imag

    @property
    def mu(self) -> float:
        return math.cosh(self.r)

    @property
    def nu(self) -> complex:
        return cmath.exp(1j * self.theta) * math.sinh(self.r)


def _check_method(method):
    if method not in METHODS:
        raise ParameterError(f"method must be one of {METHODS}, got {method!r}")


def _ladder(params, cutoff):
    if params is None or params.j == 1:
        return lowering(cutoff), 1
    return lowering_spectral(params, cutoff), params.j


def _displace_factors(A, band, alpha):
    left = expm_band(A.dag * alpha, band)
    right = expm_band(A * (-alpha.conjugate()), -band)
    return [left * math.exp(-0.5 * abs(alpha) ** 2), right]


def _squeeze_factors(A, band, spec):
    Ad = A.dag
    Kp = (Ad @ Ad) * 0.5
    Km = (A @ A) * 0.5
    r, th = spec.r, spec.theta
    t = math.tanh(r)
    left = expm_band(Kp * (cmath.exp(1j * th) * t), 2 * band)
    right = expm_band(Km * (-cmath.exp(-1j * th) * t), -2 * band)
    # (1/cosh r)^(2 K_0) with 2 K_0 = A^dag A + 1/2, diagonal in the number basis
    occ = np.real(np.diagonal((Ad @ A).mat))
    middle = FockOperator(np.diag(math.cosh(r) ** -(occ + 0.5)))
    return [left, middle, right]


def _product(factors):
    out = factors[0]
    for f in factors[1:]:
        out = out @ f
    return out


def _displace(A, band, alpha, method):
    _check_method(method)
    if method == "exp":
        return expm(A.dag * alpha - A * alpha.conjugate())
    return _product(_displace_factors(A, band, alpha))


def _squeeze(A, band, spec, method):
    _check_method(method)
    if method == "exp":
        Kp = (A.dag @ A.dag) * 0.5
        Km = (A @ A) * 0.5
        return expm(Kp * spec.z - Km * spec.z.conjugate())
    return _product(_squeeze_factors(A, band, spec))


def bch_error_bound(factors) -> np.ndarray:
    """Per-column rounding bound eps * N * max_row (|F1| |F2| ... ) for a factored product.

    The factored forms cancel large terms at high occupation, so this bound
    grows quickly with the column index.
    """
    acc = np.abs(factors[0].mat)
    for f in factors[1:]:
        acc = acc @ np.abs(f.mat)
    N = acc.shape[0]
    return np.finfo(float).eps * N * len(factors) * acc.max(axis=0)


def method_agreement(kind: str, cutoff: int, *, alpha: complex = 0.0, spec: SqueezeSpec | None = None,
                     params: MultibosonParams | None = None, guard: int = DEFAULT_GUARD, tol: float = 1e-9):
    """Compare the exp and factored constructions of a gate.

    ``kind`` is ``"displacement"`` or ``"squeeze"``; ``params`` selects a
    multiboson ladder. The comparison covers the leading columns on which
    the exp route is free of truncation effects and the factored route's
    rounding bound is below ``tol``. Returns (max |difference|, column count).
    """
    A, band = _ladder(params, cutoff)
    if kind == "displacement":
        alpha = complex(alpha)
        exact = _displace(A, band, alpha, "exp")
        factors = _displace_factors(A, band, alpha)
    elif kind == "squeeze":
        if spec is None:
            raise ParameterError("squeeze comparison needs a SqueezeSpec")
        exact = _squeeze(A, band, spec, "exp")
        factors = _squeeze_factors(A, band, spec)
    else:
        raise ParameterError(f"unknown gate kind {kind!r}")
    bound = bch_error_bound(factors)
    ok = ~(bound < tol)
    w = min(adequate_columns(exact, guard, (0.1 * tol) ** 2), int(np.argmax(ok)) if ok.any() else cutoff)
    if w < 1:
        raise TransformMismatchError(f"no columns where the {kind} constructions can be compared")
    diff = np.abs(exact.mat[:, :w] - _product(factors).mat[:, :w])
    return float(diff.max()), w


def displacement(spec: DisplacementSpec, cutoff: int, method: str = "exp", *, guard: int = DEFAULT_GUARD) -> FockOperator:
    """D(alpha) = exp(alpha a^dag - conj(alpha) a)."""
    A, band = _ladder(None, cutoff)
    D = _displace(A, band, spec.alpha, method)
    require_adequate(D @ basis(0, cutoff), guard, what=f"D({spec.alpha:g})|0>")
    return D


def multiboson_displacement(alpha: complex, params: MultibosonParams, cutoff: int, method: str = "exp", *,
                            guard: int = DEFAULT_GUARD) -> FockOperator:
    """D_j(alpha) = exp(alpha A_j^dag - conj(alpha) A_j)."""
    alpha = DisplacementSpec(alpha).alpha
    A, band = _ladder(params, cutoff)
    D = _displace(A, band, alpha, method)
    require_adequate(D @ basis(params.k, cutoff), guard, what=f"D_{params.j}({alpha:g})|{params.k}>")
    return D


def _check_r(spec, r_max):
    if spec.r > r_max:
        raise ParameterError(f"squeeze magnitude r={spec.r:g} exceeds r_max={r_max:g}")


def squeeze(spec: SqueezeSpec, cutoff: int, method: str = "exp", *, guard: int = DEFAULT_GUARD,
            r_max: float = R_MAX) -> FockOperator:
    """S(z) = exp(z K_+ - conj(z) K_-) with K_+ = a^dag a^dag / 2, K_- = a a / 2."""
    _check_r(spec, r_max)
    A, band = _ladder(None, cutoff)
    S = _squeeze(A, band, spec, method)
    require_adequate(S @ basis(0, cutoff), guard, what=f"S({spec.z:g})|0>")
    return S


def multiboson_squeeze(spec: SqueezeSpec, params: MultibosonParams, cutoff: int, method: str = "exp", *,
                       guard: int = DEFAULT_GUARD, r_max: float = R_MAX) -> FockOperator:
    """S_j(z) built from K_{j+} = A_j^dag A_j^dag / 2 and K_{j-} = A_j A_j / 2."""
    _check_r(spec, r_max)
    A, band = _ladder(params, cutoff)
    S = _squeeze(A, band, spec, method)
    require_adequate(S @ basis(params.k, cutoff), guard, what=f"S_{params.j}({spec.z:g})|{params.k}>")
    return S


def reorder_gamma(alpha: complex, spec: SqueezeSpec) -> complex:
    """gamma with D(alpha) S(z) = S(z) D(gamma)."""
    alpha = complex(alpha)
    return alpha * math.cosh(spec.r) - alpha.conjugate() * cmath.exp(1j * spec.theta) * math.sinh(spec.r)


def bogoliubov(spec: SqueezeSpec, cutoff: int, A: FockOperator | None = None, *, band: int = 1,
               guard: int = DEFAULT_GUARD, tol: float = 1e-8):
    """Return (B, B^dag, mu, nu) with B = mu A + nu A^dag = S^-1 A S.

    ``A`` defaults to the ordinary lowering operator; pass a spectral A_j
    (with ``band=j``) for the multiboson transform. The conjugation is
    checked on the columns the truncated S leaves intact; a residual above
    ``tol`` raises TransformMismatchError.
    """
    if A is None:
        A, band = lowering(cutoff), 1
    mu, nu = spec.mu, spec.nu
    B = A * mu + A.dag * nu
    S = _squeeze(A, band, spec, "exp")
    # columns whose truncation leakage stays well below the amplitude tolerance
    w = min(adequate_columns(S, guard, (0.1 * tol) ** 2), cutoff - guard)
    if w < 1:
        raise TransformMismatchError("no truncation-safe window for the squeeze conjugation")
    conj = S.dag @ A @ S
    res = float(np.max(np.abs(conj.mat[:w, :w] - B.mat[:w, :w])))
    if not res < tol:
        raise TransformMismatchError(f"S^-1 A S differs from mu A + nu A^dag by {res:.3e} on {w} levels")
    return B, B.dag, mu, nu


def coherent_state(alpha: complex, cutoff: int, *, guard: int = DEFAULT_GUARD) -> StateVector:
    return _checked_norm(displacement(DisplacementSpec(alpha), cutoff, guard=guard) @ basis(0, cutoff))


def multiboson_coherent_state(alpha: complex, params: MultibosonParams, cutoff: int, *,
                              guard: int = DEFAULT_GUARD) -> StateVector:
    """|alpha(j,k)> = D_j(alpha)|k>."""
    D = multiboson_displacement(alpha, params, cutoff, guard=guard)
    return _checked_norm(D @ basis(params.k, cutoff))


def su11_coherent_state(spec: SqueezeSpec, cutoff: int, *, guard: int = DEFAULT_GUARD,
                        r_max: float = R_MAX) -> StateVector:
    """S(z)|0>, supported on even levels only."""
    return _checked_norm(squeeze(spec, cutoff, guard=guard, r_max=r_max) @ basis(0, cutoff))


def squeezed_state(alpha: complex, spec: SqueezeSpec, params: MultibosonParams | None = None,
                   cutoff: int = 256, *, guard: int = DEFAULT_GUARD, r_max: float = R_MAX) -> StateVector:
    """D_j(alpha) S_j(z)|k>; ``params=None`` means the ordinary oscillator with k = 0."""
    params = params or MultibosonParams(1, 0)
    S = multiboson_squeeze(spec, params, cutoff, guard=guard, r_max=r_max)
    psi = S @ basis(params.k, cutoff)
    D = multiboson_displacement(alpha, params, cutoff, guard=guard)
    psi = D @ psi
    require_adequate(psi, guard, what="D_j S_j |k>")
    return _checked_norm(psi)


def _parity_sign(parity):
    if parity not in ("even", "odd"):
        raise ParameterError(f"parity must be 'even' or 'odd', got {parity!r}")
    return 1.0 if parity == "even" else -1.0


def even_odd_displacement(alpha: complex, parity: str, cutoff: int, *, guard: int = DEFAULT_GUARD) -> StateVector:
    """[2(1 +- e^{-2|alpha|^2})]^{-1/2} [D(alpha) +- D(-alpha)]|0>."""
    sign = _parity_sign(parity)
    alpha = complex(alpha)
    if sign < 0 and alpha == 0:
        raise DegenerateStateError("the odd coherent state is undefined at alpha = 0")
    return _even_odd_apply(alpha, sign, basis(0, cutoff), guard)


def even_odd_squeezed_state(alpha: complex, spec: SqueezeSpec, parity: str, cutoff: int, *,
                            guard: int = DEFAULT_GUARD, r_max: float = R_MAX) -> StateVector:
    """D_+-(alpha) S(z)|0>, the displacement-operator even/odd squeezed states."""
    sign = _parity_sign(parity)
    alpha = complex(alpha)
    if sign < 0 and alpha == 0:
        raise DegenerateStateError("the odd state is undefined at alpha = 0")
    vac = squeeze(spec, cutoff, guard=guard, r_max=r_max) @ basis(0, cutoff)
    plus = displacement(DisplacementSpec(alpha), cutoff, guard=guard) @ vac
    # S(z)|0> is parity-even, so D(-alpha) S|0> = (-1)^N D(alpha) S|0>
    minus = parity_op(cutoff) @ plus
    # the vacuum normalization constant no longer applies once S(z) acts first
    return (plus + minus * sign).normalized()


def parity_op(cutoff: int) -> FockOperator:
    """(-1)^N. Conjugation by it maps D(alpha) to D(-alpha) exactly, truncation included."""
    return FockOperator(np.diag((-1.0) ** np.arange(cutoff)))


def _even_odd_apply(alpha, sign, ket, guard):
    cutoff = ket.cutoff
    plus = displacement(DisplacementSpec(alpha), cutoff, guard=guard) @ ket
    minus = parity_op(cutoff) @ plus
    norm = (2.0 * (1.0 + sign * math.exp(-2.0 * abs(alpha) ** 2))) ** -0.5
    return _checked_norm((plus + minus * sign) * norm)


def _checked_norm(psi: StateVector) -> StateVector:
    if not psi.is_normalized(NORM_TOL):
        raise NumericDomainError(f"state norm^2 drifted to {psi.norm() ** 2:.15f}")
    return psi
