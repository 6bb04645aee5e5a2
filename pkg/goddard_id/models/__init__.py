from .dynamics import ModelParams, RocketState, drag, gravity, mass_rate, speed_rate
from .units import (DimensionalConstants, QUANTITY_KINDS, nondimensionalize, redimensionalize,
                    dimensional_drag, dimensional_gravity)

__all__ = [
    "ModelParams",
    "RocketState",
    "drag",
    "gravity",
    "mass_rate",
    "speed_rate",

    "DimensionalConstants",
    "QUANTITY_KINDS",
    "nondimensionalize",
    "redimensionalize",
    "dimensional_drag",
    "dimensional_gravity",
]
