"""Conversion between dimensional (SI) and normalized Goddard quantities"""
import math
from dataclasses import dataclass

import numpy as np

from goddard_id.errors import UsageError

__all__ = [
    "DimensionalConstants",
    "QUANTITY_KINDS",
    "nondimensionalize",
    "redimensionalize",
    "dimensional_drag",
    "dimensional_gravity",
]


@dataclass(frozen=True)
class DimensionalConstants:
    """Scales of the normalization

    Attributes:
        R (float): Earth radius [m]
        g0 (float): Surface gravity [m/s^2]
        m0_dim (float): Launch mass [kg]
    """

    R: float = 6371e3
    g0: float = 9.81
    m0_dim: float = 1.0

    def __post_init__(self):
        for name in ("R", "g0", "m0_dim"):
            if not getattr(self, name) > 0:
                raise UsageError(f"{name} must be positive, got {getattr(self, name)}")

    @property
    def G(self):
        """G = g0 * R^2"""
        return self.g0 * self.R ** 2

    def scale(self, kind):
        """Dimensional value of one normalized unit of the given quantity kind

        Args:
            kind (str): one of QUANTITY_KINDS

        Raises:
            UsageError: unknown quantity kind

        Returns:
            float: scale, dimensional = normalized * scale
        """
        if kind == "mass":
            return self.m0_dim
        if kind == "altitude":
            return self.R
        if kind == "time":
            return math.sqrt(self.R ** 3 / self.G)
        if kind == "speed":
            return math.sqrt(self.G / self.R)
        if kind == "acceleration":
            return self.G / self.R ** 2
        raise UsageError(f"Unknown quantity kind: {kind}, expected one of {', '.join(QUANTITY_KINDS)}")


QUANTITY_KINDS = ("mass", "altitude", "time", "speed", "acceleration")


def nondimensionalize(value, kind, dc=DimensionalConstants()):
    """Map a dimensional quantity to its normalized counterpart

    m~ = m / m0, h~ = h / R, t~ = t * sqrt(G / R^3), v~ = v * sqrt(R / G),
    a~ = a * R^2 / G.

    Args:
        value (float or np.ndarray): dimensional value(s)
        kind (str): quantity kind, one of QUANTITY_KINDS
        dc (DimensionalConstants, optional): normalization scales

    Returns:
        float or np.ndarray: normalized value(s)
    """
    return np.asarray(value, dtype=float) / dc.scale(kind) if np.ndim(value) else value / dc.scale(kind)


def redimensionalize(value, kind, dc=DimensionalConstants()):
    """Inverse of nondimensionalize"""
    return np.asarray(value, dtype=float) * dc.scale(kind) if np.ndim(value) else value * dc.scale(kind)


def dimensional_drag(v, h, s, c_d, rho0, beta, R=6371e3):
    """Drag 1/2 * s * c_D * rho0 * exp(beta * (1 - h / R)) * v^2 in SI units

    Args:
        v (float): speed [m/s]
        h (float): distance from the Earth center [m]
        s (float): cross-section [m^2]
        c_d (float): drag constant
        rho0 (float): surface air density [kg/m^3]
        beta (float): density decay constant
        R (float, optional): Earth radius [m]

    Returns:
        float: drag force [N]
    """
    return 0.5 * s * c_d * rho0 * np.exp(beta * (1.0 - h / R)) * v * v


def dimensional_gravity(h, g0=9.81, R=6371e3):
    """Gravity g0 * R^2 / h^2 [m/s^2] at distance h [m] from the Earth center"""
    return g0 * R * R / (h * h)
