"""Dense linear algebra on a truncated single-mode Fock space.

Everything lives in the number basis |0>, ..., |N-1> with N = cutoff.
Truncation breaks the canonical relations only in the bottom-right corner
of the matrices, so identity checks are made on a guard-banded window
n < N - margin.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    CutoffInadequateError,
    DimensionError,
    InvalidCutoffError,
    NumericDomainError,
    ParameterError,
    PreconditionError,
)

DEFAULT_CUTOFF = 256
DEFAULT_GUARD = 8
NORM_TOL = 1e-10
TAIL_TOL = 1e-8


def _frozen(arr, ndim):
    out = np.array(arr, dtype=complex)
    if out.ndim != ndim:
        raise DimensionError(f"expected a {ndim}-d array, got shape {out.shape}")
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class StateVector:
    """Amplitudes over |0>, ..., |cutoff-1>."""

    amps: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amps", _frozen(self.amps, 1))
        if self.amps.size < 1:
            raise InvalidCutoffError("state needs cutoff >= 1")

    @property
    def cutoff(self) -> int:
        return self.amps.size

    @property
    def probs(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm() ** 2 - 1.0) <= tol

    def normalized(self) -> StateVector:
        n = self.norm()
        if n == 0.0:
            raise PreconditionError("cannot normalize the zero vector")
        return StateVector(self.amps / n)

    def inner(self, other: StateVector) -> complex:
        _match(self.cutoff, other.cutoff)
        return complex(np.vdot(self.amps, other.amps))

    def __sub__(self, other):
        _match(self.cutoff, other.cutoff)
        return StateVector(self.amps - other.amps)

    def __add__(self, other):
        _match(self.cutoff, other.cutoff)
        return StateVector(self.amps + other.amps)

    def __mul__(self, c):
        return StateVector(self.amps * complex(c))

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class FockOperator:
    """Square matrix acting on the truncated number basis."""

    mat: np.ndarray

    def __post_init__(self):
        m = _frozen(self.mat, 2)
        if m.shape[0] != m.shape[1]:
            raise DimensionError(f"operator must be square, got {m.shape}")
        object.__setattr__(self, "mat", m)

    @property
    def cutoff(self) -> int:
        return self.mat.shape[0]

    @property
    def dag(self) -> FockOperator:
        return FockOperator(self.mat.conj().T)

    def window(self, margin: int) -> np.ndarray:
        w = GuardBand(margin).size(self.cutoff)
        return self.mat[:w, :w]

    def __matmul__(self, other):
        if isinstance(other, StateVector):
            _match(self.cutoff, other.cutoff)
            return StateVector(self.mat @ other.amps)
        if isinstance(other, FockOperator):
            _match(self.cutoff, other.cutoff)
            return FockOperator(self.mat @ other.mat)
        return NotImplemented

    def __add__(self, other):
        _match(self.cutoff, other.cutoff)
        return FockOperator(self.mat + other.mat)

    def __sub__(self, other):
        _match(self.cutoff, other.cutoff)
        return FockOperator(self.mat - other.mat)

    def __neg__(self):
        return FockOperator(-self.mat)

    def __mul__(self, c):
        return FockOperator(self.mat * complex(c))

    __rmul__ = __mul__

    def __truediv__(self, c):
        return FockOperator(self.mat / complex(c))


@dataclass(frozen=True)
class GuardBand:
    """Excludes the last ``margin`` levels from identity checks."""

    margin: int

    def __post_init__(self):
        if self.margin < 0:
            raise ParameterError(f"guard margin must be >= 0, got {self.margin}")

    def size(self, cutoff: int) -> int:
        if self.margin >= cutoff:
            raise ParameterError(f"guard margin {self.margin} leaves no window at cutoff {cutoff}")
        return cutoff - self.margin


def _match(n1, n2):
    if n1 != n2:
        raise DimensionError(f"cutoff mismatch: {n1} vs {n2}")


def _check_cutoff(cutoff, minimum=1):
    if not isinstance(cutoff, (int, np.integer)) or cutoff < minimum:
        raise InvalidCutoffError(f"cutoff must be an integer >= {minimum}, got {cutoff!r}")
    return int(cutoff)


def basis(n: int, cutoff: int) -> StateVector:
    cutoff = _check_cutoff(cutoff)
    if not 0 <= n < cutoff:
        raise ParameterError(f"level {n} outside 0..{cutoff - 1}")
    v = np.zeros(cutoff, dtype=complex)
    v[n] = 1.0
    return StateVector(v)


def identity(cutoff: int) -> FockOperator:
    return FockOperator(np.eye(_check_cutoff(cutoff), dtype=complex))


def lowering(cutoff: int) -> FockOperator:
    """<n-1|a|n> = sqrt(n)."""
    cutoff = _check_cutoff(cutoff, 2)
    return FockOperator(np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), 1))


def raising(cutoff: int) -> FockOperator:
    return lowering(cutoff).dag


def number_op(cutoff: int) -> FockOperator:
    cutoff = _check_cutoff(cutoff)
    return FockOperator(np.diag(np.arange(cutoff, dtype=float)))


def position(cutoff: int) -> FockOperator:
    a = lowering(cutoff)
    return (a + a.dag) / np.sqrt(2.0)


def momentum(cutoff: int) -> FockOperator:
    a = lowering(cutoff)
    return (a - a.dag) / (1j * np.sqrt(2.0))


def quadratures(A: FockOperator) -> tuple[FockOperator, FockOperator]:
    """X = (A + A^dag)/sqrt2, P = (A - A^dag)/(i sqrt2) for any lowering operator A."""
    return (A + A.dag) / np.sqrt(2.0), (A - A.dag) / (1j * np.sqrt(2.0))


def commutator(A: FockOperator, B: FockOperator) -> FockOperator:
    _match(A.cutoff, B.cutoff)
    return A @ B - B @ A


def expm(X: FockOperator) -> FockOperator:
    if not np.all(np.isfinite(X.mat)):
        raise NumericDomainError("expm: non-finite matrix entries")
    return FockOperator(scipy.linalg.expm(X.mat))


def expm_band(X: FockOperator, band: int) -> FockOperator:
    """Exact exponential of an operator supported on a single diagonal.

    ``X`` may only have entries X[m + band, m]. For band != 0 the matrix is
    nilpotent and the exponential series terminates; each column is summed
    term by term, which is exact up to rounding.
    """
    N = X.cutoff
    if band == 0:
        d = np.diagonal(X.mat)
        if np.count_nonzero(X.mat - np.diag(d)):
            raise ParameterError("expm_band: operator is not diagonal")
        return FockOperator(np.diag(np.exp(d)))
    if abs(band) >= N:
        return identity(N)
    off = np.diagonal(X.mat, offset=-band)
    if np.count_nonzero(X.mat) != np.count_nonzero(off):
        raise ParameterError(f"expm_band: operator has entries off band {band}")
    if not np.all(np.isfinite(off)):
        raise NumericDomainError("expm_band: non-finite matrix entries")
    # w[m] = X[m + band, m]
    w = np.zeros(N, dtype=complex)
    if band > 0:
        w[: N - band] = off
    else:
        w[-band:] = off
    out = np.eye(N, dtype=complex)
    cols = np.arange(N)
    rows = cols.copy()
    amp = np.ones(N, dtype=complex)
    p = 1
    while True:
        nxt = rows + band
        valid = (nxt >= 0) & (nxt < N)
        if not valid.any():
            break
        amp = np.where(valid, amp * w[np.clip(rows, 0, N - 1)] / p, 0.0)
        rows = nxt
        if not np.any(amp):
            break
        out[rows[valid], cols[valid]] += amp[valid]
        p += 1
    return FockOperator(out)


def expectation(O: FockOperator, psi: StateVector, tol: float = NORM_TOL) -> complex:
    _match(O.cutoff, psi.cutoff)
    if not psi.is_normalized(tol):
        raise PreconditionError(f"state norm^2 {psi.norm() ** 2:.3e} is not 1 within {tol:g}")
    return complex(np.vdot(psi.amps, O.mat @ psi.amps))


def variance(O: FockOperator, psi: StateVector) -> float:
    """<O^2> - <O>^2 for Hermitian O."""
    m = expectation(O, psi)
    m2 = expectation(O @ O, psi)
    return float((m2 - m * m).real)


def tail_mass(psi: StateVector, m: int) -> float:
    """Probability carried by levels n >= m."""
    if not 0 <= m <= psi.cutoff:
        raise ParameterError(f"tail index {m} outside 0..{psi.cutoff}")
    return float(np.sum(psi.probs[m:]))


def require_adequate(psi: StateVector, guard: int, tol: float = TAIL_TOL, what: str = "state"):
    """Raise if more than ``tol`` probability sits inside the guard band."""
    edge = GuardBand(guard).size(psi.cutoff)
    t = tail_mass(psi, edge)
    if not t < tol:
        raise CutoffInadequateError(
            f"{what}: tail mass {t:.3e} beyond level {edge} exceeds {tol:g} "
            f"(cutoff {psi.cutoff}); raise the cutoff or shrink the parameters"
        )
    return t


def adequate_columns(U: FockOperator, guard: int, tol: float = 1e-20) -> int:
    """Number w of leading columns n < w whose image U|n> has tail below ``tol``.

    Truncated unitaries are accurate on such columns, so operator
    comparisons are restricted to them.
    """
    edge = GuardBand(guard).size(U.cutoff)
    tails = np.sum(np.abs(U.mat[edge:, :]) ** 2, axis=0)
    bad = np.nonzero(~(tails < tol))[0]
    return int(bad[0]) if bad.size else U.cutoff


def window_residual(X: FockOperator, margin: int) -> float:
    """Largest |entry| of X on the guard-banded window."""
    if margin >= X.cutoff:
        raise CutoffInadequateError(f"cutoff {X.cutoff} leaves no window outside a guard band of {margin}")
    return float(np.max(np.abs(X.window(margin)), initial=0.0))
