"""Bell-type inequality left-hand sides in the CMF and a multi-start maximizer.

All evaluators use the CMF correlation function; ``n`` is the direction of
Alice's boson momentum and ``x = |k|^2 / m^2``. Each inequality is written
so that local realism demands ``lhs <= 1``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .correlations import cmf_correlation_raw
from .spin_rep import check_unit

INEQUALITIES = ("chsh", "mermin", "weighted")
BOUNDS = {"chsh": 1.0, "mermin": 1.0, "weighted": 1.0}
N_DIRECTIONS = {"chsh": 4, "mermin": 3, "weighted": 3}
VIOLATION_SLACK = 1e-12

LOG_X_RANGE = (math.log(1e-6), math.log(1e4))
THREADS_ENV = "SPIN1EPR_THREADS"

_Z = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class BellConfig:
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray = field(default_factory=lambda: _Z.copy())
    n: np.ndarray = field(default_factory=lambda: _Z.copy())
    x: float = 0.0

    def __post_init__(self):
        for name in ("a", "b", "c", "d", "n"):
            object.__setattr__(self, name, check_unit(getattr(self, name)))
        if not self.x >= 0.0:
            raise ValueError(f"x must be non-negative, got {self.x!r}")


def _corr(cfg: BellConfig, u: np.ndarray, v: np.ndarray) -> float:
    return cmf_correlation_raw(cfg.x, float(u @ v), float(u @ cfg.n), float(v @ cfg.n))


def chsh_lhs(cfg: BellConfig) -> float:
    """``(|C_ab - C_ad| + |C_cb + C_cd|) / 2``."""
    return 0.5 * (
        abs(_corr(cfg, cfg.a, cfg.b) - _corr(cfg, cfg.a, cfg.d))
        + abs(_corr(cfg, cfg.c, cfg.b) + _corr(cfg, cfg.c, cfg.d))
    )


def mermin_lhs(cfg: BellConfig) -> float:
    return _corr(cfg, cfg.a, cfg.b) + _corr(cfg, cfg.b, cfg.c) + _corr(cfg, cfg.c, cfg.a)


def weighted_lhs(cfg: BellConfig) -> float:
    """Three correlations plus the squared ``a.b`` bracket (the P_00 term)."""
    x = cfg.x
    u = 1.0 + 2.0 * x
    a, b, c, n = cfg.a, cfg.b, cfg.c, cfg.n
    an, bn, cn = a @ n, b @ n, c @ n
    ab = a @ b
    bracket = -u * (ab + b @ c + c @ a) + 2.0 * x * (an * bn + bn * cn + cn * an)
    return float(2.0 / (2.0 + u * u) * (bracket + 0.5 * (ab + 2.0 * x * an * bn) ** 2))


def coplanar_lhs(theta: float, x: float) -> float:
    if x < 0:
        raise ValueError(f"x must be non-negative, got {x!r}")
    u = 1.0 + 2.0 * x
    c2 = math.cos(2.0 * theta)
    return (2.0 * u * (2.0 * math.sin(theta) + c2) + c2 * c2) / (2.0 + u * u)


def coplanar_config(theta: float, x: float) -> BellConfig:
    """Coplanar a, b, c perpendicular to n with a.b = cos(pi - 2 theta), a.c = b.c = cos(pi/2 + theta)."""
    a = np.array([math.cos(theta), math.sin(theta), 0.0])
    b = np.array([-math.cos(theta), math.sin(theta), 0.0])
    c = np.array([0.0, -1.0, 0.0])
    return BellConfig(a, b, c, n=_Z.copy(), x=x)


def symmetric_config(x: float) -> BellConfig:
    """a + b + c = 0, all perpendicular to n."""
    return coplanar_config(math.pi / 6.0, x)


def chsh_config(x: float) -> BellConfig:
    """Standard CHSH directions in the plane perpendicular to n."""

    def unit(angle):
        return np.array([math.cos(angle), math.sin(angle), 0.0])

    return BellConfig(unit(0.0), unit(math.pi / 4), unit(math.pi / 2), unit(3 * math.pi / 4), x=x)


EVALUATORS = {"chsh": chsh_lhs, "mermin": mermin_lhs, "weighted": weighted_lhs}
CANONICAL = {"chsh": chsh_config, "mermin": symmetric_config, "weighted": symmetric_config}


def evaluate(inequality: str, cfg: BellConfig) -> float:
    try:
        return EVALUATORS[inequality](cfg)
    except KeyError:
        raise ValueError(f"unknown inequality {inequality!r}; choose from {INEQUALITIES}") from None


@dataclass(frozen=True)
class BellReport:
    inequality: str
    lhs: float
    bound: float
    violated: bool
    argmax: BellConfig
    starts: int
    converged: bool
    fixed_x: float | None
    seed: int
    agreeing_starts: int
    evaluations: int
    canonical_lhs: float

    def as_record(self) -> list[tuple[str, str]]:
        """Ordered key/value pairs; floats carry 17 significant digits."""

        def fmt(v):
            return format(float(v), ".17g")

        def vec(v):
            return ",".join(fmt(t) for t in v)

        cfg = self.argmax
        rows = [
            ("inequality", self.inequality),
            ("lhs", fmt(self.lhs)),
            ("bound", fmt(self.bound)),
            ("violated", str(self.violated).lower()),
            ("x_mode", "free" if self.fixed_x is None else "fixed"),
            ("x", fmt(cfg.x)),
            ("seed", str(self.seed)),
            ("starts", str(self.starts)),
            ("converged", str(self.converged).lower()),
            ("agreeing_starts", str(self.agreeing_starts)),
            ("evaluations", str(self.evaluations)),
            ("canonical_lhs", fmt(self.canonical_lhs)),
            ("n", vec(cfg.n)),
            ("a", vec(cfg.a)),
            ("b", vec(cfg.b)),
            ("c", vec(cfg.c)),
        ]
        if N_DIRECTIONS[self.inequality] == 4:
            rows.append(("d", vec(cfg.d)))
        return rows


def _direction(theta: float, phi: float) -> np.ndarray:
    st = math.sin(theta)
    return np.array([st * math.cos(phi), st * math.sin(phi), math.cos(theta)])


def _angles(v: np.ndarray) -> tuple[float, float]:
    return math.acos(max(-1.0, min(1.0, float(v[2])))), math.atan2(float(v[1]), float(v[0]))


def _config(inequality: str, params: np.ndarray, fixed_x: float | None) -> BellConfig:
    nd = N_DIRECTIONS[inequality]
    dirs = [_direction(params[2 * i], params[2 * i + 1]) for i in range(nd)]
    if nd == 3:
        dirs.append(_Z.copy())
    return BellConfig(*dirs, n=_Z.copy(), x=_x_of(inequality, params, fixed_x))


def _fast_lhs(inequality: str, params, x: float) -> float:
    """LHS straight from angles with n = z; plain floats, no validation."""
    u = 1.0 + 2.0 * x
    scale = 2.0 / (2.0 + u * u)
    dirs = []
    for i in range(N_DIRECTIONS[inequality]):
        th, ph = params[2 * i], params[2 * i + 1]
        st = math.sin(th)
        dirs.append((st * math.cos(ph), st * math.sin(ph), math.cos(th)))

    def corr(p, q):
        dot = p[0] * q[0] + p[1] * q[1] + p[2] * q[2]
        return scale * (-u * dot + 2.0 * x * p[2] * q[2])

    if inequality == "chsh":
        a, b, c, d = dirs
        return 0.5 * (abs(corr(a, b) - corr(a, d)) + abs(corr(c, b) + corr(c, d)))
    a, b, c = dirs
    total = corr(a, b) + corr(b, c) + corr(c, a)
    if inequality == "weighted":
        ab = a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
        total += 0.5 * scale * (ab + 2.0 * x * a[2] * b[2]) ** 2
    return total


def _x_of(inequality: str, params, fixed_x: float | None) -> float:
    if fixed_x is not None:
        return fixed_x
    return _x_from_phase(float(params[2 * N_DIRECTIONS[inequality]]))


# log x = mid + half * sin(t): periodic, so the simplex never sees a flat clamp
_LX_MID = 0.5 * (LOG_X_RANGE[0] + LOG_X_RANGE[1])
_LX_HALF = 0.5 * (LOG_X_RANGE[1] - LOG_X_RANGE[0])


def _x_from_phase(t: float) -> float:
    return math.exp(_LX_MID + _LX_HALF * math.sin(t))


def _phase_from_x(x: float) -> float:
    return math.asin(max(-1.0, min(1.0, (math.log(x) - _LX_MID) / _LX_HALF)))


def _start_params(inequality: str, fixed_x: float | None, rng: np.random.Generator) -> np.ndarray:
    nd = N_DIRECTIONS[inequality]
    out = []
    for _ in range(nd):
        v = rng.normal(size=3)
        out.extend(_angles(v / np.linalg.norm(v)))
    if fixed_x is None:
        out.append(_phase_from_x(math.exp(rng.uniform(math.log(1e-3), math.log(10.0)))))
    return np.array(out)


def _canonical_params(inequality: str, fixed_x: float | None) -> np.ndarray:
    cfg = CANONICAL[inequality](0.5 if fixed_x is None else fixed_x)
    dirs = [cfg.a, cfg.b, cfg.c, cfg.d][: N_DIRECTIONS[inequality]]
    out = [t for v in dirs for t in _angles(v)]
    if fixed_x is None:
        out.append(_phase_from_x(0.2))
    return np.array(out)


def _run_start(args) -> tuple[float, tuple[float, ...], bool, int]:
    inequality, fixed_x, x0 = args

    def objective(params):
        return -_fast_lhs(inequality, params, _x_of(inequality, params, fixed_x))

    res = minimize(
        objective,
        x0,
        method="Nelder-Mead",
        options={"xatol": 1e-7, "fatol": 1e-13, "maxiter": 20000, "maxfev": 20000, "adaptive": True},
    )
    params = np.array(res.x, dtype=float)
    nfev = int(res.nfev)
    # restart once from the optimum; cheap insurance against a collapsed simplex
    res2 = minimize(
        objective,
        params,
        method="Nelder-Mead",
        options={"xatol": 1e-8, "fatol": 1e-14, "maxiter": 20000, "maxfev": 20000, "adaptive": True},
    )
    nfev += int(res2.nfev)
    if res2.fun <= res.fun:
        params = np.array(res2.x, dtype=float)
    lhs = -objective(params)
    return float(lhs), tuple(float(t) for t in params), bool(res.success and res2.success), nfev


def _polish_x(inequality: str, params: np.ndarray) -> tuple[np.ndarray, int]:
    """Golden-section search in log x at fixed angles."""
    lo, hi = LOG_X_RANGE

    def g(lx):
        return -_fast_lhs(inequality, params, math.exp(min(max(lx, lo), hi)))

    lx0 = math.log(_x_of(inequality, params, None))
    base = g(lx0)
    width = 0.05
    left, right = max(lo, lx0 - width), min(hi, lx0 + width)
    if not (g(left) >= base and g(right) >= base and left < lx0 < right):
        return params, 3
    res = minimize_scalar(g, bracket=(left, lx0, right), method="golden", options={"xtol": 1e-12})
    lx = min(max(float(res.x), lo), hi)
    if g(lx) <= base:
        out = params.copy()
        out[-1] = _phase_from_x(math.exp(lx))
        return out, int(res.nfev) + 3
    return params, int(res.nfev) + 3


def _workers() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def maximize_violation(
    inequality: str,
    fixed_x: float | None = None,
    seed: int = 0,
    starts: int = 64,
    workers: int | None = None,
) -> BellReport:
    """Maximize an inequality's LHS over directions (and ``x`` unless fixed).

    Directions are polar/azimuthal angles with ``n`` on the z axis. Start 0 is
    the canonical configuration (``a + b + c = 0`` or the CHSH square); the
    rest are drawn from ``default_rng(seed)``. The result does not depend on
    ``workers``.
    """
    if inequality not in EVALUATORS:
        raise ValueError(f"unknown inequality {inequality!r}; choose from {INEQUALITIES}")
    if fixed_x is not None and not fixed_x >= 0.0:
        raise ValueError(f"fixed x must be non-negative, got {fixed_x!r}")
    if starts < 1:
        raise ValueError("need at least one start")
    rng = np.random.default_rng(seed)
    inits = [_canonical_params(inequality, fixed_x)]
    inits += [_start_params(inequality, fixed_x, rng) for _ in range(starts - 1)]
    jobs = [(inequality, fixed_x, x0) for x0 in inits]

    workers = _workers() if workers is None else workers
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_start, jobs))
    else:
        results = [_run_start(job) for job in jobs]

    # max by lhs, ties broken by lexicographic angles: independent of result order
    best = max(results, key=lambda r: (r[0], tuple(-t for t in r[1])))
    lhs, params, ok, _ = best
    params = np.array(params)
    evaluations = sum(r[3] for r in results)
    if fixed_x is None:
        params, extra = _polish_x(inequality, params)
        evaluations += extra
    cfg = _config(inequality, params, fixed_x)
    lhs = max(lhs, EVALUATORS[inequality](cfg))
    agreeing = sum(1 for r in results if r[0] >= lhs - 1e-8)
    bound = BOUNDS[inequality]
    canonical = EVALUATORS[inequality](CANONICAL[inequality](cfg.x))
    return BellReport(
        inequality=inequality,
        lhs=float(lhs),
        bound=bound,
        violated=bool(lhs > bound + VIOLATION_SLACK),
        argmax=cfg,
        starts=starts,
        converged=bool(ok and agreeing >= 2),
        fixed_x=fixed_x,
        seed=seed,
        agreeing_starts=agreeing,
        evaluations=evaluations,
        canonical_lhs=float(canonical),
    )
