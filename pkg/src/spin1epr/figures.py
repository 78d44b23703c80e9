"""Figure-reproduction sweeps and their CSV output.

Every figure is a fixed grid with no randomness, and floats are written with
17 significant digits, so repeated runs give byte-identical files.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import bell
from .correlations import TABLE_COLUMNS, CmfConfig, cmf_correlation, cmf_probabilities, ultrarel_probabilities

GRID_POINTS = 512


@dataclass(frozen=True)
class SweepSpec:
    """One free variable swept over ``(lo, hi, count, scale)``."""

    variable: str
    lo: float
    hi: float
    count: int
    scale: str = "linear"

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"grid needs min < max, got {self.lo} >= {self.hi}")
        if self.count < 2:
            raise ValueError("grid needs at least 2 points")
        if self.scale not in ("linear", "log"):
            raise ValueError(f"grid scale must be linear or log, got {self.scale!r}")
        if self.scale == "log" and self.lo <= 0:
            raise ValueError("log grid needs a positive minimum")

    def points(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.lo, self.hi, self.count)
        return np.linspace(self.lo, self.hi, self.count)


def cmf_rows(config: CmfConfig, sweep: SweepSpec) -> tuple[list[str], list[list[float]]]:
    header = ["x", *TABLE_COLUMNS, "C"]
    rows = []
    for x in sweep.points():
        c = config.with_x(float(x))
        rows.append([float(x), *cmf_probabilities(c).values.ravel().tolist(), cmf_correlation(c)])
    return header, rows


def _probs(config):
    return lambda: cmf_rows(config, SweepSpec("x", 0.0, 3.0, GRID_POINTS))


def _corr(config):
    def build():
        header = ["x", "C"]
        sweep = SweepSpec("x", 0.0, 3.0, GRID_POINTS)
        return header, [[float(x), cmf_correlation(config.with_x(float(x)))] for x in sweep.points()]
    return build


def _ultrarel():
    header = ["an", "bn", "P_pp", "P_pm", "P_0p", "P_p0", "P_00"]
    axis = np.linspace(-1.0, 1.0, 65)
    rows = []
    for an in axis:
        for bn in axis:
            t = ultrarel_probabilities(float(an), float(bn))
            rows.append([float(an), float(bn), t[1, 1], t[1, -1], t[0, 1], t[1, 0], t[0, 0]])
    return header, rows


def _mermin():
    sweep = SweepSpec("x", 0.0, 1.5, GRID_POINTS)
    return ["x", "lhs"], [[float(x), bell.mermin_lhs(bell.symmetric_config(float(x)))] for x in sweep.points()]


def _theta():
    sweep = SweepSpec("theta", 0.0, math.pi, GRID_POINTS)
    rows = [[float(t), bell.coplanar_lhs(float(t), 0.0), bell.coplanar_lhs(float(t), 1.0 / 6.0)] for t in sweep.points()]
    return ["theta", "lhs_x_0", "lhs_x_1_6"], rows


def _weighted_x():
    # both angles are emitted: pi/6 is the a+b+c=0 configuration, 2pi/3 is kept for comparison
    sweep = SweepSpec("x", 0.0, 1.5, GRID_POINTS)
    rows = [
        [float(x), bell.coplanar_lhs(math.pi / 6, float(x)), bell.coplanar_lhs(2 * math.pi / 3, float(x))]
        for x in sweep.points()
    ]
    return ["x", "lhs_theta_pi_6", "lhs_theta_2pi_3"], rows


PERPENDICULAR = CmfConfig(0.0, -1.0, 0.0, 0.0)
HALF = CmfConfig(0.0, -0.5, 0.5, 0.5)

FIGURES: dict[str, Callable[[], tuple[list[str], list[list[float]]]]] = {
    "probs-perp": _probs(PERPENDICULAR),
    "corr-perp": _corr(PERPENDICULAR),
    "probs-half": _probs(HALF),
    "corr-half": _corr(HALF),
    "ultrarel-array": _ultrarel,
    "bell-mermin": _mermin,
    "bell-theta": _theta,
    "bell-weighted-x": _weighted_x,
}


def format_csv(header: list[str], rows: list[list[float]]) -> str:
    out = io.StringIO()
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(format(float(v), ".17g") for v in row) + "\n")
    return out.getvalue()


def figure_csv(figure_id: str) -> str:
    try:
        build = FIGURES[figure_id]
    except KeyError:
        raise ValueError(f"unknown figure {figure_id!r}; choose from {', '.join(FIGURES)}") from None
    return format_csv(*build())
