"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import bell, correlations, observables, states, suite
from .correlations import CmfConfig, extremum_scan, QUANTITIES
from .figures import FIGURES, SweepSpec, cmf_rows, figure_csv, format_csv
from .kinematics import on_shell

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_number(text: str) -> float:
    """Accepts plain floats and fractions such as ``1/6`` or ``-1/2``."""
    text = str(text).strip()
    try:
        return float(text)
    except ValueError:
        pass
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a number: {text!r}") from None


def parse_vector(text: str, name: str) -> np.ndarray:
    parts = [p for p in str(text).replace(" ", "").split(",") if p]
    if len(parts) != 3:
        raise UsageError(f"--{name} needs three comma-separated components, got {text!r}")
    vec = np.array([parse_number(p) for p in parts])
    if not np.all(np.isfinite(vec)):
        raise UsageError(f"--{name} has non-finite components")
    return vec


def parse_direction(text: str, name: str) -> np.ndarray:
    vec = parse_vector(text, name)
    if abs(np.linalg.norm(vec) - 1.0) > 1e-9:
        raise UsageError(f"--{name} must be a unit vector, |{name}| = {np.linalg.norm(vec)!r}")
    return vec


def parse_grid(text: str, variable: str = "x") -> SweepSpec:
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) not in (3, 4):
        raise UsageError(f"--grid expects min,max,count[,linear|log], got {text!r}")
    try:
        count = int(parts[2])
    except ValueError:
        raise UsageError(f"grid count must be an integer, got {parts[2]!r}") from None
    scale = parts[3] if len(parts) == 4 else "linear"
    try:
        return SweepSpec(variable, parse_number(parts[0]), parse_number(parts[1]), count, scale)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def read_config(path: str) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment; keys use flag names."""
    values = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc.strerror}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            key, sep, value = line.partition(":")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        values[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return values


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    path = Path(out)
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc


# --- probe ------------------------------------------------------------------

def probe_record(kvec, pvec, a, b) -> dict:
    """Every computation path for one configuration, plus the worst disagreement."""
    k, p = on_shell(kvec), on_shell(pvec)
    trace = correlations.probabilities_general(k, p, a, b)
    oracle = observables.probability_oracle(states.scalar_state(k, p), a, b)
    corr = {
        "closed_form": correlations.correlation_general(k, p, a, b),
        "trace": correlations.correlation_trace(k, p, a, b),
        "from_probabilities": trace.correlation(),
        "oracle": observables.oracle_correlation(states.scalar_state(k, p), a, b),
    }
    try:
        normalized = correlations.normalized_correlation(k, p, a, b)
    except ValueError:
        normalized = None
    ref = corr["closed_form"]
    residual = max(
        float(np.abs(trace.values - oracle).max()),
        max(abs(v - ref) for v in corr.values()),
    )
    return {
        "k": [float(t) for t in k],
        "p": [float(t) for t in p],
        "a": [float(t) for t in a],
        "b": [float(t) for t in b],
        "labels": [1, 0, -1],
        "probabilities_trace": trace.values.tolist(),
        "probabilities_oracle": oracle.tolist(),
        "correlation": corr,
        "normalized_correlation": normalized,
        "max_residual": residual,
    }


def _cmf_from_args(args) -> CmfConfig:
    try:
        return CmfConfig(
            parse_number(args.x if args.x is not None else 0.0),
            parse_number(args.ab),
            parse_number(args.an if args.an is not None else 0.0),
            parse_number(args.bn if args.bn is not None else 0.0),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_probe(args) -> int:
    if args.k is not None or args.p is not None:
        if args.a is None or args.b is None:
            raise UsageError("probe with --k/--p needs --a and --b")
        kvec = parse_vector(args.k or "0,0,0", "k")
        pvec = parse_vector(args.p or "0,0,0", "p")
        a, b = parse_direction(args.a, "a"), parse_direction(args.b, "b")
    elif args.ab is not None:
        cfg = _cmf_from_args(args)
        a, b, n = cfg.realize()
        kvec = math.sqrt(cfg.x) * n
        pvec = -kvec
    else:
        raise UsageError("probe needs --k/--p/--a/--b or CMF dot products --x/--ab/--an/--bn")
    record = probe_record(kvec, pvec, a, b)
    _emit(json.dumps(record, sort_keys=False) + "\n", args.out)
    return EXIT_OK


# --- figure / scan ----------------------------------------------------------

def cmd_figure(args) -> int:
    _emit(figure_csv(args.id), args.out)
    return EXIT_OK


def cmd_scan(args) -> int:
    sweep_var = args.sweep or "x"
    if sweep_var == "theta":
        if args.x is None:
            raise UsageError("a theta sweep needs --x")
        x = parse_number(args.x)
        spec = parse_grid(args.grid, "theta") if args.grid else SweepSpec("theta", 0.0, math.pi, 512)
        rows = [[float(t), bell.coplanar_lhs(float(t), x)] for t in spec.points()]
        _emit(format_csv(["theta", "lhs"], rows), args.out)
        return EXIT_OK

    grid = parse_grid(args.grid) if args.grid else SweepSpec("x", 1e-4, 1e4, 512, "log")
    if args.theta is not None:
        theta = parse_number(args.theta)
        f = lambda c: bell.coplanar_lhs(theta, c.x)
        base = CmfConfig(0.0, -math.cos(2 * theta), 0.0, 0.0)
        if args.extrema:
            found = extremum_scan(base, f, grid.points())
            rows = [["lhs", e.kind, _fmt(e.x), _fmt(e.value)] for e in found]
            _emit(_table_text(rows), args.out)
        else:
            _emit(format_csv(["x", "lhs"], [[float(x), bell.coplanar_lhs(theta, float(x))] for x in grid.points()]), args.out)
        return EXIT_OK

    if args.ab is None:
        raise UsageError("scan needs --ab (with --an/--bn) or --theta")
    base = _cmf_from_args(args)
    if args.extrema:
        wanted = [args.quantity] if args.quantity else list(QUANTITIES)
        rows = []
        for q in wanted:
            try:
                found = extremum_scan(base, q, grid.points())
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            rows += [[q, e.kind, _fmt(e.x), _fmt(e.value)] for e in found]
        _emit(_table_text(rows), args.out)
    else:
        _emit(format_csv(*cmf_rows(base, grid)), args.out)
    return EXIT_OK


def _table_text(rows) -> str:
    return "quantity,kind,x,value\n" + "".join(",".join(r) + "\n" for r in rows)


# --- bell-max ---------------------------------------------------------------

def cmd_bellmax(args) -> int:
    x_text = args.x if args.x is not None else "free"
    fixed = None if str(x_text).lower() == "free" else parse_number(x_text)
    seed = int(args.seed) if args.seed is not None else 0
    starts = int(args.starts) if args.starts is not None else 64
    try:
        report = bell.maximize_violation(args.inequality, fixed_x=fixed, seed=seed, starts=starts)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = "".join(f"{k}: {v}\n" for k, v in report.as_record())
    _emit(text, args.out)
    return EXIT_OK


# --- verify -----------------------------------------------------------------

def cmd_verify(args) -> int:
    profile = args.profile or "default"
    samples = int(args.samples) if args.samples is not None else 1000
    try:
        results = suite.run_suite(profile, samples)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    lines = [r.line() for r in results]
    failed = [r for r in results if not r.passed]
    lines.append(f"{len(results) - len(failed)}/{len(results)} invariants passed (profile {profile})")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if not failed else EXIT_FAILED


# --- wiring -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spin1epr", description=__doc__)
    parser.add_argument("--config", help="key = value file; command-line flags win")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--config", dest="sub_config", help="key = value file; flags win")

    p = sub.add_parser("verify", help="run the randomized invariant suite")
    p.add_argument("--profile", choices=sorted(suite.PROFILES))
    p.add_argument("--samples", type=int)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("probe", help="all computation paths at one configuration")
    for flag in ("k", "p", "a", "b"):
        p.add_argument(f"--{flag}", help="three comma-separated components")
    for flag in ("x", "ab", "an", "bn"):
        p.add_argument(f"--{flag}", help="CMF alternative to explicit vectors")
    common(p)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("figure", help="emit figure-reproduction CSV")
    p.add_argument("id", choices=list(FIGURES))
    common(p)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("scan", help="x or theta sweeps and extremum scans")
    for flag in ("x", "ab", "an", "bn", "theta"):
        p.add_argument(f"--{flag}")
    p.add_argument("--sweep", choices=["x", "theta"])
    p.add_argument("--grid", help="min,max,count[,linear|log]")
    p.add_argument("--extrema", action="store_true", default=None, help="report interior extrema instead of the sweep")
    p.add_argument("--quantity", choices=list(QUANTITIES))
    common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("bell-max", help="maximize a Bell-inequality LHS")
    p.add_argument("inequality", choices=list(bell.INEQUALITIES))
    p.add_argument("--x", help="fixed x (fractions allowed) or 'free' (default)")
    p.add_argument("--seed", type=int)
    p.add_argument("--starts", type=int)
    common(p)
    p.set_defaults(func=cmd_bellmax)
    return parser


def _apply_config(args) -> None:
    path = getattr(args, "sub_config", None) or args.config
    if not path:
        return
    for key, value in read_config(path).items():
        if not hasattr(args, key) or key in ("command", "func", "config", "sub_config"):
            raise UsageError(f"config key {key!r} is not an option of '{args.command}'")
        if getattr(args, key) is None:
            if key == "extrema":
                value = value.lower() in ("1", "true", "yes", "on")
            elif key in ("seed", "starts", "samples"):
                value = int(value)
            setattr(args, key, value)


_VALUE_FLAGS = {"--k", "--p", "--a", "--b", "--x", "--ab", "--an", "--bn", "--theta", "--grid"}


def _join_negative(argv: list[str]) -> list[str]:
    """Glue ``--ab -1/2`` into ``--ab=-1/2``; argparse only trusts plain negative numbers."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok in _VALUE_FLAGS and nxt and nxt[:1] == "-" and (nxt[1:2].isdigit() or nxt[1:2] == "."):
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_join_negative(list(sys.argv[1:] if argv is None else argv)))
    try:
        _apply_config(args)
        return args.func(args)
    except UsageError as exc:
        print(f"spin1epr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"spin1epr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
