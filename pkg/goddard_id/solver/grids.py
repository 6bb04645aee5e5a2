"""Uniform grids of speed, mass and control, and interpolation weights"""
from collections import namedtuple
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from goddard_id.errors import UsageError

__all__ = [
    "UniformGrid",
    "GridWeights",
    "Grids",
    "locate",
    "nearest",
    "default_grids",
]

# Weight 1 - p_hi goes to idx_lo, p_hi to idx_lo + 1
GridWeights = namedtuple("GridWeights", "idx_lo p_hi")

Grids = namedtuple("Grids", "speed mass control")


@dataclass(frozen=True)
class UniformGrid:
    """n equally spaced points from lo to hi, both included"""

    lo: float
    hi: float
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise UsageError(f"A grid needs at least 2 points, got {self.n}")
        if not self.lo < self.hi:
            raise UsageError(f"Grid bounds must satisfy lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def spacing(self):
        return (self.hi - self.lo) / (self.n - 1)

    @cached_property
    def points(self):
        # linspace pins the last point to hi exactly
        pts = np.linspace(self.lo, self.hi, int(self.n))
        pts.setflags(write=False)
        return pts

    def point(self, k):
        return float(self.points[k])

    def __len__(self):
        return int(self.n)


def locate(grid, x):
    """Expectation-preserving weights of x on the two bracketing grid points

    Values outside [lo, hi] put full weight on the nearest end point.

    Args:
        grid (UniformGrid): grid
        x (float or np.ndarray): continuous value(s)

    Returns:
        GridWeights: lower index and weight of the upper neighbour
    """
    pts = grid.points
    xs = np.asarray(x, dtype=float)
    idx = np.clip(np.searchsorted(pts, xs, side="right") - 1, 0, grid.n - 2)
    with np.errstate(invalid="ignore"):
        p_hi = np.clip((xs - pts[idx]) / (pts[idx + 1] - pts[idx]), 0.0, 1.0)
    if xs.ndim == 0:
        return GridWeights(int(idx), float(p_hi))
    return GridWeights(idx, p_hi)


def nearest(grid, x):
    """Index of the grid point closest to x, in cell units"""
    k = np.clip(np.rint((np.asarray(x, dtype=float) - grid.lo) / grid.spacing), 0, grid.n - 1).astype(int)
    return int(k) if k.ndim == 0 else k


def default_grids(p, nv, nm, nu):
    """Speed grid on [v_eps, v_max], mass grid on [m_p, m0], control grid on [u_min, 0]

    Args:
        p (ModelParams): model constants
        nv (int): number of speed states
        nm (int): number of mass states
        nu (int): number of control states

    Raises:
        UsageError: any count below 2

    Returns:
        Grids: (speed, mass, control)
    """
    for name, n in (("speed", nv), ("mass", nm), ("control", nu)):
        if int(n) != n or n < 2:
            raise UsageError(f"The {name} grid needs at least 2 states, got {n}")
    return Grids(
        speed=UniformGrid(p.v_eps, p.v_max, int(nv)),
        mass=UniformGrid(p.m_payload, p.m0, int(nm)),
        control=UniformGrid(p.u_min, p.u_max, int(nu)),
    )
