"""Butcher tableaus of the segment integrators"""
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ButcherTableau",
    "EULER",
    "RK4",
    "GAUSS_LEGENDRE_2",
    "TABLEAUS",
]


@dataclass(frozen=True, eq=False)
class ButcherTableau:
    """
    Coefficients (z, a, w) of a Runge-Kutta method with s stages

    Parameters
    ----------
    name : str
        Human readable name
    z : sequence of float
        Stage nodes, s values
    a : sequence of sequence of float
        Stage matrix, s x s
    w : sequence of float
        Weights, s values, summing to 1

    Attributes
    ----------
    s : int
        Number of stages
    is_explicit : bool
        True if a is strictly lower triangular, stages then follow one by one
    """

    name: str
    z: np.ndarray
    a: np.ndarray
    w: np.ndarray
    s: int = field(init=False)

    def __post_init__(self):
        z = np.asarray(self.z, dtype=float)
        a = np.asarray(self.a, dtype=float)
        w = np.asarray(self.w, dtype=float)
        s = z.shape[0]
        if a.shape != (s, s) or w.shape != (s,):
            raise ValueError(f"Tableau {self.name}: inconsistent shapes z{z.shape}, a{a.shape}, w{w.shape}")
        if not math.isclose(float(w.sum()), 1.0, abs_tol=1e-14):
            raise ValueError(f"Tableau {self.name}: weights sum to {w.sum()}, expected 1")
        for arr in (z, a, w):
            arr.setflags(write=False)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "s", s)

    @property
    def is_explicit(self):
        return bool(np.all(np.triu(self.a) == 0))

    def row_sum_defect(self):
        """max |z_i - sum_j a_ij|, zero for the usual node convention"""
        return float(np.max(np.abs(self.z - self.a.sum(axis=1))))

    def order_conditions(self, order):
        """Residuals of the rooted-tree order conditions up to order 4

        Args:
            order (int): highest order to check, 1..4

        Returns:
            list: residuals, all ~0 if the method has at least this order
        """
        z, a, w = self.z, self.a, self.w
        conditions = [w.sum() - 1]
        if order >= 2:
            conditions.append(w @ z - 1 / 2)
        if order >= 3:
            conditions.append(w @ z ** 2 - 1 / 3)
            conditions.append(w @ a @ z - 1 / 6)
        if order >= 4:
            conditions.append(w @ z ** 3 - 1 / 4)
            conditions.append((w * z) @ a @ z - 1 / 8)
            conditions.append(w @ a @ z ** 2 - 1 / 12)
            conditions.append(w @ a @ a @ z - 1 / 24)
        return [float(x) for x in conditions]

    def __repr__(self):
        return f"ButcherTableau({self.name}, s={self.s}, explicit={self.is_explicit})"


EULER = ButcherTableau("Euler", z=[0.0], a=[[0.0]], w=[1.0])

RK4 = ButcherTableau(
    "RK4",
    z=[0.0, 1 / 2, 1 / 2, 1.0],
    a=[[0.0, 0.0, 0.0, 0.0],
       [1 / 2, 0.0, 0.0, 0.0],
       [0.0, 1 / 2, 0.0, 0.0],
       [0.0, 0.0, 1.0, 0.0]],
    w=[1 / 6, 2 / 6, 2 / 6, 1 / 6],
)

_SQRT3_6 = math.sqrt(3) / 6

GAUSS_LEGENDRE_2 = ButcherTableau(
    "Gauss-Legendre",
    z=[1 / 2 - _SQRT3_6, 1 / 2 + _SQRT3_6],
    a=[[1 / 4, 1 / 4 - _SQRT3_6],
       [1 / 4 + _SQRT3_6, 1 / 4]],
    w=[1 / 2, 1 / 2],
)

# Keys of the run-name schema
TABLEAUS = {
    "E": EULER,
    "RK": RK4,
    "G": GAUSS_LEGENDRE_2,
}
