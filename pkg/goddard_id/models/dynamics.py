"""Normalized Goddard rocket model in the altitude domain

All quantities are nondimensional: altitude in Earth radii (h = 1 is the
surface), mass in launch-mass units and speed in units of sqrt(G / R).
Functions accept floats or numpy arrays.
"""
import dataclasses
from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from goddard_id.errors import DomainError

__all__ = [
    "ModelParams",
    "RocketState",
    "drag",
    "gravity",
    "mass_rate",
    "speed_rate",
]

RocketState = namedtuple("RocketState", "h m v")


@dataclass(frozen=True)
class ModelParams:
    """Constants of the normalized Goddard problem

    The defaults are the bounded-thrust instance of an SA-2 like missile
    climbing 1% of the Earth radius with 40% of its launch mass as fuel.

    Attributes:
        beta (float): Drag decay constant of the exponential atmosphere
        s_rho0 (float): Cross-section times surface air density, kept fused
        c_d (float): Drag constant
        c (float): Exhaust velocity
        u_min (float): Lower control bound (maximum thrust), u_min <= 0
        u_max (float): Upper control bound, always 0 (coasting)
        h0 (float): Launch altitude
        hT (float): Terminal altitude
        m0 (float): Launch mass
        v0 (float): Launch speed
        m_payload (float): Payload mass, the floor of the rocket mass
        v_eps (float): Lowest speed of the speed grid, replaces v0 = 0
        v_max (float): Highest speed of the speed grid
    """

    beta: float = 500.0
    s_rho0: float = 12400.0
    c_d: float = 0.05
    c: float = 0.5
    u_min: float = -3.5
    u_max: float = 0.0
    h0: float = 1.0
    hT: float = 1.01
    m0: float = 1.0
    v0: float = 0.0
    m_payload: float = 0.6
    v_eps: float = 1e-3
    v_max: float = 0.2

    def __post_init__(self):
        self.validate()

    def validate(self):
        """Check the invariants of the parameter set

        Raises:
            ValueError: If any constant is non-physical
        """
        for name in ("beta", "s_rho0", "c_d", "c"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if not self.u_min < self.u_max or self.u_max != 0:
            raise ValueError(f"controls must live in [u_min, 0] with u_min < 0, got [{self.u_min}, {self.u_max}]")
        if not self.h0 < self.hT:
            raise ValueError(f"h0 must be below hT, got h0={self.h0}, hT={self.hT}")
        if self.h0 < 1:
            raise ValueError(f"h0 must be at or above the surface (h0 >= 1), got {self.h0}")
        if not 0 < self.m_payload < self.m0:
            raise ValueError(f"payload must satisfy 0 < m_payload < m0, got {self.m_payload}")
        if not 0 < self.v_eps < self.v_max:
            raise ValueError(f"speed grid needs 0 < v_eps < v_max, got [{self.v_eps}, {self.v_max}]")
        if self.v0 < 0:
            raise ValueError(f"v0 must be non-negative, got {self.v0}")

    @property
    def drag_factor(self):
        """Half of s * rho0 * c_D, the surface drag coefficient of v^2"""
        return 0.5 * self.s_rho0 * self.c_d

    def replace(self, **overrides):
        """Copy of the parameters with some fields replaced"""
        return dataclasses.replace(self, **overrides)

    @classmethod
    def from_mapping(cls, mapping):
        """Build parameters from a mapping, ignoring None values and unknown keys

        Args:
            mapping (dict): field name -> value

        Returns:
            ModelParams: parameters with paper defaults for missing fields
        """
        names = {f.name for f in dataclasses.fields(cls)}
        return cls(**{k: float(v) for k, v in mapping.items() if k in names and v is not None})


def _check_positive(name, x):
    if np.any(np.asarray(x) <= 0):
        raise DomainError(f"{name} must be positive, got {x}")


def _check_altitude(h):
    if np.any(np.asarray(h) < 1):
        raise DomainError(f"altitude must be at or above the surface (h >= 1), got {h}")


def drag(v, h, p):
    """Normalized drag force d = 1/2 * s * c_D * rho0 * exp(beta * (1 - h)) * v^2

    Args:
        v (float): speed
        h (float): altitude, h >= 1
        p (ModelParams): model constants

    Raises:
        DomainError: if h < 1

    Returns:
        float: drag, always >= 0
    """
    _check_altitude(h)
    return 0.5 * p.s_rho0 * p.c_d * np.exp(p.beta * (1.0 - h)) * v * v


def gravity(h):
    """Normalized gravitational acceleration 1 / h^2

    Raises:
        DomainError: if h < 1
    """
    _check_altitude(h)
    return 1.0 / (h * h)


def _mass_rate(u, v, p):
    return u / (p.c * v)


def _speed_rate(h, m, u, v, p):
    return -u / (m * v) - p.s_rho0 * p.c_d * np.exp(p.beta * (1.0 - h)) * v / (2.0 * m) - 1.0 / (v * h * h)


def mass_rate(u, v, p):
    """dm/dh = u / (c * v)

    Args:
        u (float): control, u <= 0
        v (float): speed
        p (ModelParams): model constants

    Raises:
        DomainError: if v <= 0, where the altitude-domain dynamics are singular

    Returns:
        float: mass rate, <= 0
    """
    _check_positive("speed", v)
    return _mass_rate(u, v, p)


def speed_rate(h, m, u, v, p):
    """dv/dh = -u / (m v) - s c_D rho0 exp(beta (1 - h)) v / (2 m) - 1 / (v h^2)

    Args:
        h (float): altitude
        m (float): mass
        u (float): control, u <= 0
        v (float): speed
        p (ModelParams): model constants

    Raises:
        DomainError: if v <= 0, m <= 0 or h < 1

    Returns:
        float: speed rate
    """
    _check_positive("speed", v)
    _check_positive("mass", m)
    _check_altitude(h)
    return _speed_rate(h, m, u, v, p)
