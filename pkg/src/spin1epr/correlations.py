"""Joint probabilities and spin correlation functions for the scalar state.

Probability tables are indexed ``[alice, bob]`` over spin labels
``(+1, 0, -1)``. The general-frame functions use the trace formulas built
from N/M/T matrices; the ``cmf_*`` functions are the closed forms in the
centre-of-mass frame, written in terms of dot products only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from . import observables as obs
from .kinematics import ETA, minkowski_dot, on_shell
from .spin_rep import check_unit

# column names used by the CSV writers; index order follows SPIN_LABELS
_TAGS = {1: "p", 0: "0", -1: "m"}
_LABELS = (1, 0, -1)
TABLE_COLUMNS = tuple(f"P_{_TAGS[s]}{_TAGS[l]}" for s in _LABELS for l in _LABELS)


@dataclass(frozen=True)
class ProbabilityTable:
    values: np.ndarray

    def __getitem__(self, labels: tuple[int, int]) -> float:
        s, l = labels
        return float(self.values[_LABELS.index(s), _LABELS.index(l)])

    @property
    def total(self) -> float:
        return float(self.values.sum())

    def correlation(self) -> float:
        return self[1, 1] + self[-1, -1] - self[1, -1] - self[-1, 1]

    def nonzero_mass(self) -> float:
        """Probability that neither outcome is 0."""
        return self[1, 1] + self[-1, -1] + self[1, -1] + self[-1, 1]

    def as_dict(self) -> dict[str, float]:
        return dict(zip(TABLE_COLUMNS, (float(v) for v in self.values.ravel())))

    def transpose(self) -> "ProbabilityTable":
        return ProbabilityTable(self.values.T.copy())


def _table(pp, pm, z_pm, pm_z, zz) -> ProbabilityTable:
    """Assemble a table from the five distinct entries (P++=P--, P+-=P-+, ...)."""
    return ProbabilityTable(
        np.array(
            [
                [pp, pm_z, pm],
                [z_pm, zz, z_pm],
                [pm, pm_z, pp],
            ],
            dtype=float,
        )
    )


@dataclass(frozen=True)
class CmfConfig:
    """CMF configuration: ``x = |k|^2/m^2`` and the dot products of a, b, n."""

    x: float
    ab: float
    an: float
    bn: float

    def __post_init__(self):
        if not self.x >= 0.0:
            raise ValueError(f"x must be non-negative, got {self.x!r}")
        for name in ("ab", "an", "bn"):
            if abs(getattr(self, name)) > 1.0 + 1e-12:
                raise ValueError(f"|{name}| must not exceed 1, got {getattr(self, name)!r}")
        gram = np.array(
            [[1.0, self.ab, self.an], [self.ab, 1.0, self.bn], [self.an, self.bn, 1.0]]
        )
        if np.linalg.eigvalsh(gram).min() < -1e-9:
            raise ValueError(
                f"dot products (ab={self.ab}, an={self.an}, bn={self.bn}) "
                "are not realizable by unit vectors"
            )

    def with_x(self, x: float) -> "CmfConfig":
        return CmfConfig(x, self.ab, self.an, self.bn)

    @classmethod
    def from_vectors(cls, x: float, a, b, n) -> "CmfConfig":
        a, b, n = check_unit(a), check_unit(b), check_unit(n)
        clip = lambda v: float(np.clip(v, -1.0, 1.0))
        return cls(float(x), clip(a @ b), clip(a @ n), clip(b @ n))

    def realize(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Explicit unit vectors ``(a, b, n)`` with ``n`` along z."""
        n = np.array([0.0, 0.0, 1.0])
        sa = math.sqrt(max(0.0, 1.0 - self.an**2))
        a = np.array([sa, 0.0, self.an])
        if sa > 1e-12:
            bx = (self.ab - self.an * self.bn) / sa
        else:
            bx = 0.0
        by = math.sqrt(max(0.0, 1.0 - self.bn**2 - bx**2))
        b = np.array([bx, by, self.bn])
        return a, b / np.linalg.norm(b), n

    def momenta(self) -> tuple[np.ndarray, np.ndarray]:
        """CMF pair ``k = |k| n``, ``p = -k`` with ``n`` along z."""
        kv = np.array([0.0, 0.0, math.sqrt(self.x)])
        return on_shell(kv), on_shell(-kv)


def _trace(x: np.ndarray, y: np.ndarray) -> float:
    return float(np.trace(x @ ETA @ y @ ETA).real)


def _denominator(k, p) -> float:
    return 2.0 + minkowski_dot(k, p) ** 2


def probabilities_general(k, p, a, b) -> ProbabilityTable:
    """Trace-formula probabilities for Alice measuring ``a`` on the ``k`` boson."""
    d = _denominator(k, p)
    na, ma, ta = obs.nmt_closed_form(k, a)
    nb, mb, tb = obs.nmt_closed_form(p, b)
    mm = _trace(ma, mb)
    nn = _trace(na, nb)
    return _table(
        (mm - nn) / (4 * d),
        (mm + nn) / (4 * d),
        _trace(ta, mb) / (2 * d),
        _trace(ma, tb) / (2 * d),
        _trace(ta, tb) / d,
    )


def correlation_trace(k, p, a, b) -> float:
    na, _, _ = obs.nmt_closed_form(k, a)
    nb, _, _ = obs.nmt_closed_form(p, b)
    return -_trace(na, nb) / _denominator(k, p)


def correlation_general(k, p, a, b) -> float:
    """Explicit six-term correlation function for arbitrary momenta."""
    k = np.asarray(k, dtype=float)
    p = np.asarray(p, dtype=float)
    a, b = check_unit(a), check_unit(b)
    kv, pv = k[1:], p[1:]
    gk, gp = 1.0 + k[0], 1.0 + p[0]
    kxp = np.cross(kv, pv)
    ab = a @ b
    kp = kv @ pv
    total = (
        -ab
        - (a @ kxp) * (b @ kxp) / (gk * gp)
        - ((a @ pv) * (b @ kv) - ab * kp)
        + ((a @ pv) * (b @ pv) - (pv @ pv) * ab) / gp
        + ((a @ kv) * (b @ kv) - (kv @ kv) * ab) / gk
        + (kp * (a @ pv) * (b @ kv) - kp**2 * ab) / (gk * gp)
    )
    return float(2.0 * total / _denominator(k, p))


def normalized_correlation(k, p, a, b) -> float:
    """Correlation conditioned on both outcomes being non-zero."""
    mass = probabilities_general(k, p, a, b).nonzero_mass()
    if mass <= 1e-12:
        raise ValueError(f"no weight on non-zero outcomes (sum = {mass:.3e})")
    return correlation_general(k, p, a, b) / mass


def cmf_probabilities(c: CmfConfig) -> ProbabilityTable:
    x, ab, an, bn = c.x, c.ab, c.an, c.bn
    u = 1.0 + 2.0 * x
    d = 2.0 + u * u
    sq = (ab + 2.0 * x * an * bn) ** 2
    long_ = 4.0 * x * (x + 1.0) * (an * an + bn * bn)
    return _table(
        (u * u - 2.0 * u * ab + 4.0 * x * an * bn - long_ + sq) / (4.0 * d),
        (u * u + 2.0 * u * ab - 4.0 * x * an * bn - long_ + sq) / (4.0 * d),
        (1.0 + 4.0 * x * (1.0 + x) * an * an - sq) / (2.0 * d),
        (1.0 + 4.0 * x * (1.0 + x) * bn * bn - sq) / (2.0 * d),
        sq / d,
    )


def cmf_correlation(c: CmfConfig) -> float:
    return cmf_correlation_raw(c.x, c.ab, c.an, c.bn)


def cmf_correlation_raw(x: float, ab: float, an: float, bn: float) -> float:
    """:func:`cmf_correlation` without config validation (hot loops)."""
    u = 1.0 + 2.0 * x
    return 2.0 * (-u * ab + 2.0 * x * an * bn) / (2.0 + u * u)


def ultrarel_probabilities(an: float, bn: float) -> ProbabilityTable:
    if abs(an) > 1.0 + 1e-12 or abs(bn) > 1.0 + 1e-12:
        raise ValueError("dot products with n must lie in [-1, 1]")
    ta, tb = 1.0 - an * an, 1.0 - bn * bn
    return _table(ta * tb / 4.0, ta * tb / 4.0, an * an * tb / 2.0, bn * bn * ta / 2.0, an * an * bn * bn)


def nonrel_probabilities(ab: float) -> ProbabilityTable:
    if abs(ab) > 1.0 + 1e-12:
        raise ValueError("a.b must lie in [-1, 1]")
    return _table(
        (1.0 - ab) ** 2 / 12.0,
        (1.0 + ab) ** 2 / 12.0,
        (1.0 - ab * ab) / 6.0,
        (1.0 - ab * ab) / 6.0,
        ab * ab / 3.0,
    )


QUANTITIES = ("C",) + TABLE_COLUMNS


def cmf_quantity(name: str) -> Callable[[CmfConfig], float]:
    """Selector for :func:`extremum_scan`: ``"C"`` or a column such as ``"P_pm"``."""
    if name == "C":
        return cmf_correlation
    if name in TABLE_COLUMNS:
        i = TABLE_COLUMNS.index(name)
        return lambda c: float(cmf_probabilities(c).values.ravel()[i])
    raise ValueError(f"unknown quantity {name!r}; choose from {', '.join(QUANTITIES)}")


@dataclass(frozen=True)
class Extremum:
    x: float
    value: float
    kind: str  # "max" or "min"


def default_grid() -> np.ndarray:
    return np.geomspace(1e-4, 1e4, 512)


def extremum_scan(
    config: CmfConfig,
    quantity: str | Callable[[CmfConfig], float] = "C",
    grid=None,
    xtol: float = 1e-10,
) -> list[Extremum]:
    """Interior local extrema in ``x`` of a CMF quantity at fixed directions.

    Candidates are bracketed on ``grid`` (log-spaced by default) and refined
    by golden-section search. A monotone quantity yields an empty list.
    """
    f = cmf_quantity(quantity) if isinstance(quantity, str) else quantity
    xs = default_grid() if grid is None else np.asarray(grid, dtype=float)
    if xs.size < 3:
        raise ValueError("extremum_scan needs at least 3 grid points")
    vals = np.array([f(config.with_x(float(x))) for x in xs])
    noise = 1e-14 * max(1.0, float(np.abs(vals).max()))
    step = np.diff(vals)
    signs = np.where(step > noise, 1, np.where(step < -noise, -1, 0))

    found: list[Extremum] = []
    prev = None  # index of the last non-flat step
    for j, s in enumerate(signs):
        if s == 0:
            continue
        if prev is not None and signs[prev] != s:
            kind = "max" if signs[prev] > 0 else "min"
            lo, hi = prev, j + 1
            window = vals[lo : hi + 1]
            mid = lo + int(np.argmax(window) if kind == "max" else np.argmin(window))
            if lo < mid < hi:
                found.append(_refine(f, config, xs[lo], xs[mid], xs[hi], kind, xtol))
        prev = j
    return found


def _refine(f, config, lo, mid, hi, kind, xtol) -> Extremum:
    sign = -1.0 if kind == "max" else 1.0

    def g(x):
        return sign * f(config.with_x(min(max(x, lo), hi)))

    res = minimize_scalar(g, bracket=(lo, mid, hi), method="golden", options={"xtol": xtol})
    x = float(min(max(res.x, lo), hi))
    return Extremum(x, float(f(config.with_x(x))), kind)
