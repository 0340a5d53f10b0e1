"""Named invariant suites: every identity is evaluated as a residual against a tolerance."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import analytic as an
from . import fock as fk
from . import gates as gt
from . import multiboson as mb
from .errors import CutoffInadequateError, NumericDomainError

SUITES = ("algebra", "gates", "wavefunctions", "dynamics", "coeffs")

TOLERANCES = {
    "algebra": 1e-10,
    "closure": 1e-9,
    "coeffs": 1e-8,
    "method": 1e-9,
    "reorder": 1e-9,
    "bogoliubov": 1e-8,
    "munu": 1e-14,
    "amplitudes": 1e-10,
    "eigen": 1e-8,
    "variance": 1e-8,
    "ground": 1e-12,
    "wavefunction": 1e-6,
    "genfunc": 1e-8,
    "norm": 1e-6,
    "q_equation": 1e-5,
    "overlap": 1e-6,
    "dynamics": 1e-7,
    "product0": 1e-10,
}


@dataclass
class VerifyParams:
    cutoff: int = fk.DEFAULT_CUTOFF
    guard: int = fk.DEFAULT_GUARD
    alpha: complex = 1.0
    r: float = 0.5
    theta: float = 0.0
    q: float = 1.5
    r_max: float = gt.R_MAX
    tolerances: dict = field(default_factory=lambda: dict(TOLERANCES))

    def tol(self, name):
        return self.tolerances.get(name, TOLERANCES[name])


@dataclass
class Check:
    suite: str
    name: str
    residual: float
    tolerance: float
    status: str  # pass | fail | error | info
    note: str = ""


def _add(out, suite, name, fn, tol):
    try:
        res = float(fn())
    except NumericDomainError as exc:
        out.append(Check(suite, name, math.nan, tol, "error", str(exc)))
        return
    if tol is None:
        out.append(Check(suite, name, res, math.nan, "info"))
    else:
        out.append(Check(suite, name, res, tol, "pass" if res < tol else "fail"))


def _maxabs(m):
    return float(np.max(np.abs(m), initial=0.0))


def suite_algebra(vp: VerifyParams):
    out, N, S = [], vp.cutoff, "algebra"
    t_alg, t_cl = vp.tol("algebra"), vp.tol("closure")
    for j in (1, 2, 3, 4):
        g = 2 * j
        for k in range(j):
            p = mb.MultibosonParams(j, k)
            A = mb.lowering_spectral(p, N)
            I = fk.identity(N)
            _add(out, S, f"[A_{j},A_{j}^dag]-1 (k={k})",
                 lambda: _sector_window(fk.commutator(A, A.dag) - I, j, k, g), t_alg)
        A = mb.lowering_spectral(mb.MultibosonParams(j), N)
        Nop = fk.number_op(N)
        _add(out, S, f"[N,A_{j}]+{j}A_{j}", lambda: fk.window_residual(fk.commutator(Nop, A) + A * j, g), t_alg)
        Kp, Km, K0 = mb.su11_generators(mb.MultibosonParams(j), N)
        g2 = 4 * j
        _add(out, S, f"[K0,K+]-K+ (j={j})", lambda: fk.window_residual(fk.commutator(K0, Kp) - Kp, g2), t_alg)
        _add(out, S, f"[K0,K-]+K- (j={j})", lambda: fk.window_residual(fk.commutator(K0, Km) + Km, g2), t_alg)
        _add(out, S, f"[K+,K-]+2K0 (j={j})", lambda: fk.window_residual(fk.commutator(Kp, Km) + K0 * 2, g2), t_alg)
        Ad = A.dag
        closure = {
            "[K+,A^dag]": (fk.commutator(Kp, Ad), None),
            "[K-,A^dag]-A": (fk.commutator(Km, Ad), A),
            "[K+,A]+A^dag": (fk.commutator(Kp, A), -Ad),
            "[K-,A]": (fk.commutator(Km, A), None),
            "[K0,A^dag]-A^dag/2": (fk.commutator(K0, Ad), Ad * 0.5),
            "[K0,A]+A/2": (fk.commutator(K0, A), A * -0.5),
        }
        for name, (lhs, rhs) in closure.items():
            diff = lhs if rhs is None else lhs - rhs
            _add(out, S, f"{name} (j={j})", lambda d=diff: fk.window_residual(d, g2), t_cl)
        if j > 1:
            _add(out, S, f"Wilcox A_{j}^dag", lambda: _maxabs(mb.raising_wilcox(mb.MultibosonParams(j), N).mat - Ad.mat),
                 t_alg)
            _add(out, S, f"sector leakage A_{j}", lambda: _sector_leak(A, j), 1e-300)
    return out


def _sector_window(X, j, k, g):
    w = X.cutoff - g
    if w <= k:
        raise CutoffInadequateError(f"cutoff {X.cutoff} leaves no window outside a guard band of {g}")
    lv = np.arange(k, w, j)
    return _maxabs(X.mat[np.ix_(lv, lv)])


def _sector_leak(A, j):
    n = np.arange(A.cutoff)
    mask = (n[:, None] % j) != (n[None, :] % j)
    return _maxabs(A.mat[mask])


def suite_gates(vp: VerifyParams):
    out, N, S = [], vp.cutoff, "gates"
    spec = gt.SqueezeSpec.polar(vp.r, vp.theta)
    alpha = complex(vp.alpha)
    kw = dict(guard=vp.guard)
    tm = vp.tol("method")
    _add(out, S, "D exp vs bch", lambda: gt.method_agreement("displacement", N, alpha=alpha, tol=tm, **kw)[0], tm)
    _add(out, S, "S exp vs bch", lambda: gt.method_agreement("squeeze", N, spec=spec, tol=tm, **kw)[0], tm)
    for j in (2, 3):
        p = mb.MultibosonParams(j, 1)
        _add(out, S, f"D_{j} exp vs bch",
             lambda p=p: gt.method_agreement("displacement", N, alpha=alpha, params=p, tol=tm, **kw)[0], tm)
        _add(out, S, f"S_{j} exp vs bch",
             lambda p=p: gt.method_agreement("squeeze", N, spec=spec, params=p, tol=tm, **kw)[0], tm)

    def reorder():
        v0 = fk.basis(0, N)
        g = gt.reorder_gamma(alpha, spec)
        Sz = gt.squeeze(spec, N, r_max=vp.r_max, **kw)
        lhs = gt.displacement(gt.DisplacementSpec(alpha), N, **kw) @ (Sz @ v0)
        rhs = Sz @ (gt.displacement(gt.DisplacementSpec(g), N, **kw) @ v0)
        return (lhs - rhs).norm()

    _add(out, S, "D(a)S(z) = S(z)D(gamma)", reorder, vp.tol("reorder"))
    _add(out, S, "|mu|^2-|nu|^2-1", lambda: abs(spec.mu**2 - abs(spec.nu) ** 2 - 1), vp.tol("munu"))
    tb = vp.tol("bogoliubov")
    _add(out, S, "S^-1 a S - b", lambda: _bog_residual(spec, N, None, 1, vp.guard, tb), tb)
    A2 = mb.lowering_spectral(mb.MultibosonParams(2), N)
    _add(out, S, "S_2^-1 A_2 S_2 - B_2", lambda: _bog_residual(spec, N, A2, 2, vp.guard, tb), tb)

    for j in (2, 3):
        for k in range(j):
            p = mb.MultibosonParams(j, k)
            _add(out, S, f"|alpha({j},{k})> amplitudes",
                 lambda p=p: _amplitude_residual(alpha, p, N, vp.guard), vp.tol("amplitudes"))
            _add(out, S, f"A_{j}|alpha({j},{k})> - alpha|.>",
                 lambda p=p: _eigen_residual(alpha, p, N, vp.guard), vp.tol("eigen"))
            _add(out, S, f"A_{j}|0({j},{k})>",
                 lambda p=p: (mb.lowering_spectral(p, N) @ gt.multiboson_coherent_state(0, p, N, **kw)).norm(),
                 vp.tol("ground"))

    def su11_odd():
        psi = gt.su11_coherent_state(spec, N, r_max=vp.r_max, **kw)
        return _maxabs(psi.amps[1::2])

    _add(out, S, "S(z)|0> odd amplitudes", su11_odd, 1e-300)
    for parity in ("even", "odd"):
        def eo(parity=parity):
            psi = gt.even_odd_displacement(alpha if alpha != 0 else 1.0, parity, N, **kw)
            a = fk.lowering(N)
            al = alpha if alpha != 0 else 1.0
            return ((a @ (a @ psi)) - psi * al**2).norm()
        _add(out, S, f"aa|alpha>_{parity} - alpha^2|.>", eo, vp.tol("eigen"))

    for j in (1, 2):
        p = mb.MultibosonParams(j, j - 1)

        def ladder(p=p):
            psi = gt.squeezed_state(alpha, spec, p, N, r_max=vp.r_max, **kw)
            A = mb.lowering_spectral(p, N)
            L = A * spec.mu - A.dag * spec.nu
            v = L @ psi
            beta = psi.inner(v)
            return (v - psi * beta).norm()

        def minimal(p=p):
            psi = gt.squeezed_state(alpha, gt.SqueezeSpec(vp.r), p, N, r_max=vp.r_max, **kw)
            vx, vp_ = an.quadrature_variances(mb.lowering_spectral(p, N), psi)
            return abs(vx * vp_ - 0.25)

        _add(out, S, f"(mu A_{j} - nu A_{j}^dag) eigen", ladder, vp.tol("eigen"))
        _add(out, S, f"(dX_{j})^2(dP_{j})^2 - 1/4 (real z)", minimal, vp.tol("variance"))
    return out


def _bog_residual(spec, N, A, band, guard, tol):
    # bogoliubov raises when the residual exceeds tol; report the residual itself
    if A is None:
        A, band = fk.lowering(N), 1
    B, _, _, _ = gt.bogoliubov(spec, N, A, band=band, guard=guard, tol=max(tol, 1.0))
    S = gt._squeeze(A, band, spec, "exp")
    w = min(fk.adequate_columns(S, guard, (0.1 * tol) ** 2), N - guard)
    return _maxabs((S.dag @ A @ S).mat[:w, :w] - B.mat[:w, :w])


def _amplitude_residual(alpha, p, N, guard):
    """Max deviation of D_j(alpha)|k> from e^{-|alpha|^2/2} alpha^n / sqrt(n!) on levels jn + k."""
    psi = gt.multiboson_coherent_state(alpha, p, N, guard=guard)
    expect = np.zeros(N, dtype=complex)
    c = math.exp(-0.5 * abs(alpha) ** 2)
    for n, level in enumerate(mb.sector_levels(p, N)):
        expect[level] = c
        c *= alpha / math.sqrt(n + 1)
    return _maxabs(psi.amps - expect)


def _eigen_residual(alpha, p, N, guard):
    psi = gt.multiboson_coherent_state(alpha, p, N, guard=guard)
    A = mb.lowering_spectral(p, N)
    return ((A @ psi) - psi * alpha).norm()


def suite_wavefunctions(vp: VerifyParams):
    out, N, S = [], vp.cutoff, "wavefunctions"
    grid = an.GridSpec(-6.0, 6.0, 241)
    x = grid.points()
    alpha = complex(vp.alpha)
    x0, p0 = an.xp_from_alpha(alpha)
    tw = vp.tol("wavefunction")
    kw = dict(guard=vp.guard)
    _add(out, S, "psi_cs vs Fock sum",
         lambda: _maxabs(an.coherent_wavefunction(x0, p0, x) - an.fock_sum(gt.coherent_state(alpha, N, **kw), x)), tw)
    spec = gt.SqueezeSpec.polar(vp.r, vp.theta)
    # the two readings of the chirp denominator only differ when z is not real
    spec_c = spec if spec.z2 != 0 else gt.SqueezeSpec.polar(vp.r, math.pi / 3)
    for reading, tol in (("S", tw), ("s", None)):
        _add(out, S, f"psi_ss vs Fock sum (kappa over {reading}, z={spec_c.z:.3g})",
             lambda reading=reading: _maxabs(
                 an.squeezed_wavefunction(x0, p0, spec_c, x, reading)
                 - an.fock_sum(gt.squeezed_state(alpha, spec_c, None, N, r_max=vp.r_max, **kw), x)), tol)
    _add(out, S, "psi_ss real z vs Fock sum",
         lambda: _maxabs(an.squeezed_wavefunction_real(x0, p0, vp.r, x)
                         - an.fock_sum(gt.squeezed_state(alpha, gt.SqueezeSpec(vp.r), None, N, r_max=vp.r_max, **kw), x)),
         tw)
    for j, k in ((2, 0), (2, 1), (3, 1), (4, 2)):
        p = mb.MultibosonParams(j, k)
        _add(out, S, f"psi_cs({j},{k}) vs Fock sum",
             lambda p=p: _maxabs(an.multiboson_wavefunction(alpha, p, x)
                                 - an.fock_sum(gt.multiboson_coherent_state(alpha, p, N, **kw), x)), tw)
        _add(out, S, f"norm psi_cs({j},{k})",
             lambda p=p: abs(an.norm_on_grid(lambda t: an.multiboson_wavefunction(alpha, p, t),
                                             an.GridSpec(-12, 12, 1201)) - 1), vp.tol("norm"))

    def genfunc():
        env = an.PI_QUARTER * np.exp(-0.5 * (abs(alpha) ** 2 + x**2))
        return _maxabs(env * (an.multiboson_I_sum(alpha, mb.MultibosonParams(1), x) - an.generating_function(alpha, x)))

    _add(out, S, "I_(1,0) vs generating function", genfunc, vp.tol("genfunc"))
    xg = np.linspace(-14, 14, 5601)
    a_re = abs(alpha) if alpha != 0 else 0.7
    for parity in ("even", "odd"):
        _add(out, S, f"{parity} squeezed q={vp.q:g} eigen residual",
             lambda parity=parity: an.q_equation_residual(an.even_odd_squeezed_wavefunction(a_re, vp.q, parity, xg),
                                                   xg, vp.q, a_re), vp.tol("q_equation"))

        def limit(parity=parity):
            xl = np.linspace(-10, 10, 2001)
            psi = an.even_odd_squeezed_wavefunction(a_re, 1.0, parity, xl)
            ref = an.fock_sum(gt.even_odd_displacement(a_re, parity, N, **kw), xl).real
            return 1 - abs(np.trapezoid(psi * ref, xl)) / math.sqrt(np.trapezoid(ref**2, xl) * np.trapezoid(psi**2, xl))

        _add(out, S, f"{parity} q->1 overlap defect", limit, vp.tol("overlap"))
    return out


def suite_dynamics(vp: VerifyParams):
    out, N, S = [], vp.cutoff, "dynamics"
    t = np.linspace(0, 2 * np.pi, 64)
    for r in sorted({0.25, 0.5, 1.0, vp.r}):
        for a in sorted({0.0, 1.0, abs(complex(vp.alpha))}):
            spec = gt.SqueezeSpec(r)

            def rel(spec=spec, a=a):
                u = an.uncertainty_evolution(spec, t)
                psi = gt.squeezed_state(a, spec, None, N, guard=vp.guard, r_max=vp.r_max)
                vx, vpp = an.heisenberg_variances(psi, t)
                return max(_maxabs(u.var_x / vx - 1), _maxabs(u.var_p / vpp - 1), _maxabs(u.product / (vx * vpp) - 1))

            _add(out, S, f"uncertainty r={r:g} alpha={a:g}", rel, vp.tol("dynamics"))
            _add(out, S, f"product(t=0) r={r:g}",
                 lambda spec=spec: abs(an.uncertainty_evolution(spec, [0.0]).product[0] - 0.25), vp.tol("product0"))
    return out


def suite_coeffs(vp: VerifyParams, n_max: int = 60):
    out, S = [], "coeffs"
    cutoff = n_max + 1
    for j in (2, 3):
        res = mb.series_residuals(j, cutoff, n_max)
        dbl = mb.series_residuals(j, cutoff, n_max, precision="double")
        for k in range(j):
            out.append(Check(S, f"series vs spectral j={j} k={k}", res[k], vp.tol("coeffs"),
                             "pass" if res[k] < vp.tol("coeffs") else "fail"))
            out.append(Check(S, f"double-precision series j={j} k={k}", dbl[k], math.nan, "info",
                             "cancellation diagnostic"))
    return out


RUNNERS = {
    "algebra": suite_algebra,
    "gates": suite_gates,
    "wavefunctions": suite_wavefunctions,
    "dynamics": suite_dynamics,
    "coeffs": suite_coeffs,
}


def run(suite: str, vp: VerifyParams | None = None) -> list[Check]:
    vp = vp or VerifyParams()
    names = SUITES if suite == "all" else (suite,)
    checks = []
    for name in names:
        if name not in RUNNERS:
            raise KeyError(name)
        checks.extend(RUNNERS[name](vp))
    return checks
