"""Command-line entry point.

    squeezelab verify {algebra,gates,wavefunctions,dynamics,coeffs,all}
    squeezelab state {coherent,squeezed,multiboson,even,odd}
    squeezelab wavefunction {coherent,squeezed,multiboson,even,odd} [--oracle]
    squeezelab uncertainty
    squeezelab coeffs

Output is CSV by default: one ``#`` metadata line, a column header, then
rows with floats at 17 significant digits. ``--format json`` emits the same
content as one JSON object. Exit status: 0 ok, 1 a check failed,
2 usage/parameter error, 3 numeric-domain error (cutoff inadequate,
divergent series).
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson

from . import analytic as an
from . import fock as fk
from . import gates as gt
from . import multiboson as mb
from . import verify as vf
from .errors import NumericDomainError, ParameterError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


@dataclass
class RunConfig:
    cutoff: int = fk.DEFAULT_CUTOFF
    guard: int = fk.DEFAULT_GUARD
    tolerances: dict = field(default_factory=dict)
    output_format: str = "csv"

    def __post_init__(self):
        if self.cutoff < 16:
            raise ParameterError(f"cutoff must be >= 16, got {self.cutoff}")
        if not 0 <= self.guard < self.cutoff:
            raise ParameterError(f"guard must satisfy 0 <= guard < cutoff, got {self.guard}")
        if self.output_format not in ("csv", "json"):
            raise ParameterError(f"format must be csv or json, got {self.output_format!r}")
        unknown = set(self.tolerances) - set(vf.TOLERANCES)
        if unknown:
            raise ParameterError(f"unknown tolerance names: {sorted(unknown)}")


# --- output -------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


class Table:
    def __init__(self, meta: dict, columns: list[str]):
        self.meta = meta
        self.columns = columns
        self.rows: list[list] = []
        self.footer: dict = {}

    def add(self, *row):
        self.rows.append(list(row))

    def write(self, fmt: str, stream):
        if fmt == "json":
            doc = {
                "meta": self.meta,
                "columns": self.columns,
                "rows": [[_jsonable(v) for v in r] for r in self.rows],
                "footer": {k: _jsonable(v) for k, v in self.footer.items()},
            }
            stream.write(json.dumps(doc, indent=1, allow_nan=True) + "\n")
            return
        stream.write("# " + " ".join(f"{k}={_fmt(v)}" for k, v in self.meta.items()) + "\n")
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_fmt(v) for v in r])
        for k, v in self.footer.items():
            stream.write(f"# {k}={_fmt(v)}\n")


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, np.integer):
        return int(v)
    return v


# --- argument parsing ---------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--cutoff", type=int, default=fk.DEFAULT_CUTOFF, help="Fock-space dimension (default 256)")
    p.add_argument("--guard", type=int, default=fk.DEFAULT_GUARD, help="guard-band margin (default 8)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--config", help="optional key=value file overriding defaults")
    p.add_argument("--alpha-re", type=float, default=1.0)
    p.add_argument("--alpha-im", type=float, default=0.0)
    p.add_argument("--r", type=float, default=0.5, help="squeeze magnitude")
    p.add_argument("--theta", type=float, default=0.0, help="squeeze phase")
    p.add_argument("--r-max", type=float, default=gt.R_MAX)
    p.add_argument("--j", type=int, default=2)
    p.add_argument("--k", type=int, default=0)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="squeezelab", description="Coherent, squeezed and multiboson states on a truncated Fock space.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run invariant suites")
    v.add_argument("suite", nargs="?", default="all", choices=vf.SUITES + ("all",))
    v.add_argument("--coeffs", action="store_true", help="shorthand for the coeffs suite")
    v.add_argument("--q", type=float, default=1.5)

    s = sub.add_parser("state", parents=[common], help="number-basis amplitudes")
    s.add_argument("kind", choices=("coherent", "squeezed", "multiboson", "even", "odd"))
    s.add_argument("--all-rows", action="store_true", help="do not trim the negligible tail")

    w = sub.add_parser("wavefunction", parents=[common], help="position-space wavefunction on a grid")
    w.add_argument("kind", choices=("coherent", "squeezed", "multiboson", "even", "odd"))
    w.add_argument("--x-min", type=float, default=-6.0)
    w.add_argument("--x-max", type=float, default=6.0)
    w.add_argument("--points", type=int, default=241)
    w.add_argument("--q", type=float, default=1.0, help="even/odd eigenvalue parameter (1 = coherent limit)")
    w.add_argument("--parity", choices=("even", "odd"), help="alias selecting even/odd")
    w.add_argument("--reading", choices=("S", "s"), default="S", help="chirp denominator reading")
    w.add_argument("--oracle", action="store_true", help="add Fock-sum columns and the max deviation")

    u = sub.add_parser("uncertainty", parents=[common], help="x and p variances versus time for real z")
    u.add_argument("--t-max", type=float, default=2 * math.pi)
    u.add_argument("--t-points", type=int, default=64)

    c = sub.add_parser("coeffs", parents=[common], help="normal-ordering coefficients alpha_jk")
    c.add_argument("--max-k", type=int, default=20)
    return parser


def _read_config(path):
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{lineno}: expected key=value")
            key, val = (t.strip() for t in line.split("=", 1))
            values[key.replace("-", "_")] = val
    return values


def _apply_config(args, parser_defaults):
    tolerances = {}
    if not args.config:
        return tolerances
    for key, raw in _read_config(args.config).items():
        if key.startswith("tol."):
            tolerances[key[4:]] = float(raw)
            continue
        if not hasattr(args, key):
            raise ParameterError(f"unknown config key {key!r}")
        current = getattr(args, key)
        # explicit command-line flags win over the file
        if current != parser_defaults.get(key):
            continue
        if isinstance(current, bool):
            setattr(args, key, raw.lower() in ("1", "true", "yes"))
        elif isinstance(current, int):
            setattr(args, key, int(raw))
        elif isinstance(current, float):
            setattr(args, key, float(raw))
        else:
            setattr(args, key, raw)
    return tolerances


def _defaults(parser, command):
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    sp = sub.choices[command]
    return {a.dest: a.default for a in sp._actions if a.dest != "help"}


# --- commands -----------------------------------------------------------------

def _alpha(args):
    return complex(args.alpha_re, args.alpha_im)


def _base_meta(args, cfg):
    return {"command": args.command, "cutoff": cfg.cutoff, "guard": cfg.guard}


def cmd_verify(args, cfg, out):
    suite = "coeffs" if args.coeffs else args.suite
    vp = vf.VerifyParams(cutoff=cfg.cutoff, guard=cfg.guard, alpha=_alpha(args), r=args.r, theta=args.theta,
                         q=args.q, r_max=args.r_max, tolerances={**vf.TOLERANCES, **cfg.tolerances})
    checks = vf.run(suite, vp)
    meta = _base_meta(args, cfg) | {"suite": suite, "alpha_re": args.alpha_re, "alpha_im": args.alpha_im,
                                    "r": args.r, "theta": args.theta, "q": args.q}
    t = Table(meta, ["suite", "check", "residual", "tolerance", "status", "note"])
    for c in checks:
        t.add(c.suite, c.name, c.residual, c.tolerance, c.status, c.note)
    n_fail = sum(c.status == "fail" for c in checks)
    n_err = sum(c.status == "error" for c in checks)
    t.footer = {"checks": len(checks), "failed": n_fail, "errors": n_err}
    t.write(cfg.output_format, out)
    if n_err:
        return EXIT_NUMERIC
    return EXIT_FAIL if n_fail else EXIT_OK


def _build_state(args, cfg):
    kw = dict(guard=cfg.guard)
    alpha = _alpha(args)
    N = cfg.cutoff
    if args.kind == "coherent":
        return gt.coherent_state(alpha, N, **kw), None
    if args.kind == "squeezed":
        spec = gt.SqueezeSpec.polar(args.r, args.theta)
        return gt.squeezed_state(alpha, spec, None, N, r_max=args.r_max, **kw), None
    if args.kind == "multiboson":
        p = mb.MultibosonParams(args.j, args.k)
        return gt.multiboson_coherent_state(alpha, p, N, **kw), p
    return gt.even_odd_displacement(alpha, args.kind, N, **kw), None


def cmd_state(args, cfg, out, trim=1e-30):
    psi, params = _build_state(args, cfg)
    levels = mb.sector_levels(params, cfg.cutoff) if params is not None else np.arange(cfg.cutoff)
    probs = psi.probs
    if not args.all_rows:
        keep = np.nonzero(probs[levels] > trim)[0]
        levels = levels[: keep[-1] + 1] if keep.size else levels[:1]
    meta = _base_meta(args, cfg) | {"kind": args.kind, "alpha_re": args.alpha_re, "alpha_im": args.alpha_im}
    if args.kind == "squeezed":
        meta |= {"r": args.r, "theta": args.theta}
    if args.kind == "multiboson":
        meta |= {"j": args.j, "k": args.k}
    meta["tail_mass"] = fk.tail_mass(psi, cfg.cutoff - cfg.guard)
    t = Table(meta, ["n", "re", "im", "abs2"])
    for n in levels:
        a = psi.amps[n]
        t.add(int(n), a.real, a.imag, probs[n])
    t.write(cfg.output_format, out)
    return EXIT_OK


def cmd_wavefunction(args, cfg, out):
    grid = an.GridSpec(args.x_min, args.x_max, args.points)
    x = grid.points()
    alpha = _alpha(args)
    kind = args.kind
    if args.parity and kind in ("even", "odd"):
        kind = args.parity
    meta = _base_meta(args, cfg) | {"kind": kind, "alpha_re": args.alpha_re, "alpha_im": args.alpha_im,
                                    "x_min": grid.x_min, "x_max": grid.x_max, "points": grid.n_points}
    oracle = None
    footer = {}
    kw = dict(guard=cfg.guard)
    if kind == "coherent":
        x0, p0 = an.xp_from_alpha(alpha)
        psi = an.coherent_wavefunction(x0, p0, x)
        if args.oracle:
            oracle = an.fock_sum(gt.coherent_state(alpha, cfg.cutoff, **kw), x)
    elif kind == "squeezed":
        spec = gt.SqueezeSpec.polar(args.r, args.theta)
        x0, p0 = an.xp_from_alpha(alpha)
        psi = an.squeezed_wavefunction(x0, p0, spec, x, args.reading)
        meta |= {"r": args.r, "theta": args.theta, "reading": args.reading}
        if args.oracle:
            oracle = an.fock_sum(gt.squeezed_state(alpha, spec, None, cfg.cutoff, r_max=args.r_max, **kw), x)
    elif kind == "multiboson":
        p = mb.MultibosonParams(args.j, args.k)
        psi = an.multiboson_wavefunction(alpha, p, x)
        meta |= {"j": args.j, "k": args.k}
        if args.oracle:
            oracle = an.fock_sum(gt.multiboson_coherent_state(alpha, p, cfg.cutoff, **kw), x)
    else:
        if args.alpha_im != 0.0:
            raise ParameterError("even/odd wavefunctions take real alpha")
        psi = an.even_odd_squeezed_wavefunction(args.alpha_re, args.q, kind, x).astype(complex)
        meta |= {"q": args.q}
        if args.oracle:
            if args.q - 1 < 1e-6:
                ref = an.fock_sum(gt.even_odd_displacement(args.alpha_re, kind, cfg.cutoff, **kw), x)
                # grid-normalized like psi; the overall sign is fixed by the largest entry
                ref = ref / math.sqrt(simpson(np.abs(ref) ** 2, x=x))
                i = np.argmax(np.abs(psi))
                oracle = ref * np.sign(psi[i].real * ref[i].real)
            else:
                footer["q_equation_residual"] = an.q_equation_residual(psi.real, x, args.q, args.alpha_re)
    cols = ["x", "re", "im", "abs2"] + (["oracle_re", "oracle_im"] if oracle is not None else [])
    t = Table(meta, cols)
    for i, xi in enumerate(x):
        row = [xi, psi[i].real, psi[i].imag, abs(psi[i]) ** 2]
        if oracle is not None:
            row += [oracle[i].real, oracle[i].imag]
        t.add(*row)
    if oracle is not None:
        footer["max_deviation"] = float(np.max(np.abs(psi - oracle)))
    t.footer = footer
    t.write(cfg.output_format, out)
    return EXIT_OK


def _real_z(r, theta):
    if abs(math.sin(theta)) > 1e-12:
        raise ParameterError("uncertainty series need real z (theta = 0 or pi)")
    return r if math.cos(theta) > 0 else -r


def cmd_uncertainty(args, cfg, out):
    if args.t_points < 1:
        raise ParameterError("--t-points must be >= 1")
    spec = gt.SqueezeSpec(_real_z(args.r, args.theta))
    t = np.linspace(0.0, args.t_max, args.t_points)
    series = an.uncertainty_evolution(spec, t)
    psi = gt.squeezed_state(_alpha(args), spec, None, cfg.cutoff, guard=cfg.guard, r_max=args.r_max)
    ox, op = an.heisenberg_variances(psi, t)
    meta = _base_meta(args, cfg) | {"r": args.r, "theta": args.theta, "alpha_re": args.alpha_re,
                                    "alpha_im": args.alpha_im, "t_max": args.t_max, "t_points": args.t_points}
    tab = Table(meta, ["t", "var_x", "var_p", "product", "var_x_oracle", "var_p_oracle"])
    for i in range(t.size):
        tab.add(t[i], series.var_x[i], series.var_p[i], series.product[i], ox[i], op[i])
    tab.footer = {"max_rel_deviation": float(max(np.max(np.abs(series.var_x / ox - 1)),
                                                 np.max(np.abs(series.var_p / op - 1))))}
    tab.write(cfg.output_format, out)
    return EXIT_OK


def cmd_coeffs(args, cfg, out):
    if args.j < 2:
        raise ParameterError("coefficients are defined for j >= 2")
    if args.max_k < 0:
        raise ParameterError("--max-k must be >= 0")
    table = mb.coeff_table(args.j, args.max_k)
    t = Table(_base_meta(args, cfg) | {"j": args.j, "max_k": args.max_k}, ["j", "k", "re", "im"])
    for row in table.rows():
        t.add(*row)
    t.write(cfg.output_format, out)
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "state": cmd_state,
    "wavefunction": cmd_wavefunction,
    "uncertainty": cmd_uncertainty,
    "coeffs": cmd_coeffs,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        tolerances = _apply_config(args, _defaults(parser, args.command))
        cfg = RunConfig(cutoff=args.cutoff, guard=args.guard, tolerances=tolerances, output_format=args.format)
        return COMMANDS[args.command](args, cfg, out)
    except ParameterError as exc:
        print(f"squeezelab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericDomainError as exc:
        print(f"squeezelab: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"squeezelab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
