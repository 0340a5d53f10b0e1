"""Brandt-Greenberg multiboson ladder operators.

A_j lowers the occupation by j quanta while obeying [A_j, A_j^dag] = 1.
Fock space splits into j sectors {|jn + k>}, 0 <= k < j, and on sector k

    A_j |jn + k> = sqrt(n) |j(n-1) + k>.

Two constructions are provided. ``lowering_spectral`` writes these matrix
elements down directly and is what every state builder uses.
``lowering_series`` sums the normal-ordered expansion
sum_k alpha_jk (a^dag)^k a^(k+j) and exists to check the coefficient formula.
The expansion alternates in sign with terms growing like sqrt(m!), so it is
evaluated in extended precision by default; at double precision it loses
all digits by level ~30.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .errors import InvalidCutoffError, ParameterError, PrecisionError
from .fock import FockOperator, identity, lowering

# beyond this order the alternating sum for alpha_jk loses more than 8 digits in double precision
DOUBLE_MAX_K = 60


@dataclass(frozen=True)
class MultibosonParams:
    j: int
    k: int = 0
    phases: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.j < 1:
            raise ParameterError(f"order j must be >= 1, got {self.j}")
        if not 0 <= self.k < self.j:
            raise ParameterError(f"sector k must satisfy 0 <= k < j={self.j}, got {self.k}")
        object.__setattr__(self, "phases", tuple(float(p) for p in self.phases))

    def phase(self, l: int) -> float:
        return self.phases[l] if l < len(self.phases) else 0.0


def _phase(phases, l):
    return phases[l] if phases is not None and l < len(phases) else 0.0


def alpha_coeff(j: int, k: int, phases=None, *, dps: int | None = None):
    """Coefficient alpha_jk of the normal-ordered expansion.

    alpha_jk = sum_{l<=k} (-1)^(k-l)/(k-l)! * sqrt((1 + floor(l/j)) / (l! (l+j)!)) e^{i rho_l}

    Returns a Python complex, or an ``mpmath.mpc`` when ``dps`` is given.
    """
    if j < 1 or k < 0:
        raise ParameterError(f"need j >= 1 and k >= 0, got j={j}, k={k}")
    if dps is not None:
        with mpmath.workdps(dps):
            return _alpha_mp(j, k, phases)
    if k > DOUBLE_MAX_K:
        raise PrecisionError(f"alpha_jk at double precision is only supported for k <= {DOUBLE_MAX_K}")
    re, im = [], []
    for l in range(k + 1):
        logmag = -math.lgamma(k - l + 1) + 0.5 * (
            math.log1p(l // j) - math.lgamma(l + 1) - math.lgamma(l + j + 1)
        )
        mag = (-1) ** (k - l) * math.exp(logmag)
        rho = _phase(phases, l)
        re.append(mag * math.cos(rho))
        im.append(mag * math.sin(rho))
    return complex(math.fsum(re), math.fsum(im))


def _alpha_mp(j, k, phases):
    s = mpmath.mpc(0)
    for l in range(k + 1):
        c = mpmath.sqrt(mpmath.mpf(1 + l // j) / (mpmath.factorial(l) * mpmath.factorial(l + j)))
        term = (-1) ** (k - l) * c / mpmath.factorial(k - l)
        rho = _phase(phases, l)
        s += term * (mpmath.expj(rho) if rho else 1)
    return s


@dataclass(frozen=True)
class CoeffTable:
    """alpha_jk for one order j, k = 0..max_k."""

    j: int
    max_k: int
    alpha: dict

    def rows(self):
        for k in range(self.max_k + 1):
            v = self.alpha[(self.j, k)]
            yield self.j, k, v.real, v.imag


def coeff_table(j: int, max_k: int, phases=None) -> CoeffTable:
    # computed at extended precision, then rounded
    dps = 30 + int(math.lgamma(max_k + j + 2) / math.log(10))
    alpha = {}
    for k in range(max_k + 1):
        v = alpha_coeff(j, k, phases, dps=dps)
        alpha[(j, k)] = complex(v)
    return CoeffTable(j=j, max_k=max_k, alpha=alpha)


def _min_cutoff(params, cutoff):
    if not isinstance(cutoff, (int, np.integer)) or cutoff < params.j + 1:
        raise InvalidCutoffError(f"cutoff {cutoff!r} too small for j={params.j}")
    return int(cutoff)


def lowering_spectral(params: MultibosonParams, cutoff: int) -> FockOperator:
    """<j(n-1)+k| A_j |jn+k> = sqrt(n), with optional phase e^{i rho_{m-j}} on column m."""
    N = _min_cutoff(params, cutoff)
    j = params.j
    mat = np.zeros((N, N), dtype=complex)
    for m in range(j, N):
        rho = params.phase(m - j)
        mat[m - j, m] = math.sqrt(m // j) * (np.exp(1j * rho) if rho else 1.0)
    return FockOperator(mat)


def lowering_series(params: MultibosonParams, cutoff: int, *, precision: str = "mp") -> FockOperator:
    """Sum the normal-ordered series for A_j as a matrix.

    Column m receives sum_{k=0}^{m-j} alpha_jk sqrt(m! (m-j)!) / (m-j-k)!,
    which is every term that survives on the truncated space, so no further
    truncation order is needed. ``precision`` is ``"mp"`` (default) or
    ``"double"``.
    """
    N = _min_cutoff(params, cutoff)
    j = params.j
    if j == 1:
        return lowering(N)
    kmax = N - 1 - j
    mat = np.zeros((N, N), dtype=complex)
    if precision == "double":
        alphas = [alpha_coeff(j, k, params.phases) for k in range(min(kmax, DOUBLE_MAX_K) + 1)]
        for m in range(j, N):
            p = m - j
            if p > DOUBLE_MAX_K:
                raise PrecisionError(f"double-precision series limited to levels <= {DOUBLE_MAX_K + j}")
            half = 0.5 * (math.lgamma(m + 1) + math.lgamma(p + 1))
            terms = [alphas[k] * math.exp(half - math.lgamma(p - k + 1)) for k in range(p + 1)]
            mat[p, m] = complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
        return FockOperator(mat)
    if precision != "mp":
        raise ParameterError(f"precision must be 'mp' or 'double', got {precision!r}")
    # the largest term is bounded by sqrt(m!(m-j)!) * |alpha|; size the mantissa for it
    dps = 30 + int(math.lgamma(N + 1) / math.log(10))
    with mpmath.workdps(dps):
        alphas = [_alpha_mp(j, k, params.phases) for k in range(kmax + 1)]
        fact = [mpmath.factorial(i) for i in range(N)]
        for m in range(j, N):
            p = m - j
            root = mpmath.sqrt(fact[m] * fact[p])
            s = mpmath.fsum(alphas[k] * root / fact[p - k] for k in range(p + 1))
            mat[p, m] = complex(s)
    return FockOperator(mat)


def raising_wilcox(params: MultibosonParams, cutoff: int) -> FockOperator:
    """A_j^dag as f(N) (a^dag)^j with f(n) = sqrt(floor(n/j) (n-j)!/n!).

    The number-operator function acts after (a^dag)^j, i.e. on the raised state.
    """
    N = _min_cutoff(params, cutoff)
    j = params.j
    adj = np.linalg.matrix_power(lowering(N).dag.mat, j)
    f = np.zeros(N)
    for n in range(j, N):
        f[n] = math.sqrt((n // j) * math.exp(math.lgamma(n - j + 1) - math.lgamma(n + 1)))
    return FockOperator(np.diag(f) @ adj)


def su11_generators(params: MultibosonParams, cutoff: int):
    """(K_+, K_-, K_0) = (A^dag A^dag / 2, A A / 2, (A^dag A + 1/2) / 2) from the spectral A_j."""
    A = lowering_spectral(params, cutoff)
    Ad = A.dag
    Kp = (Ad @ Ad) * 0.5
    Km = (A @ A) * 0.5
    K0 = (Ad @ A + identity(A.cutoff) * 0.5) * 0.5
    return Kp, Km, K0


def sector_levels(params: MultibosonParams, cutoff: int) -> np.ndarray:
    """Levels jn + k below the cutoff."""
    return np.arange(params.k, cutoff, params.j)


def series_residuals(j: int, cutoff: int, n_max: int = 60, precision: str = "mp", phases=()):
    """Per-sector max |series - spectral| over matrix entries with both indices <= n_max."""
    out = {}
    for k in range(j):
        p = MultibosonParams(j, k, tuple(phases))
        S = lowering_series(p, cutoff, precision=precision).mat
        T = lowering_spectral(p, cutoff).mat
        lim = min(n_max, cutoff - 1) + 1
        cols = list(range(k, lim, j))
        d = np.abs(S[:lim, cols] - T[:lim, cols]) if cols else np.zeros(1)
        out[k] = float(d.max(initial=0.0))
    return out

