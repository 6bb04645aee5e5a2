"""Deviation metrics of a run trajectory against a reference profile"""
from dataclasses import dataclass

import numpy as np
import pandas as pd

from goddard_id.errors import SpanMismatchError

__all__ = [
    "PROFILES",
    "ComparisonReport",
    "resample",
    "compare",
]

# profile name -> Trajectory attribute
PROFILES = {
    "control": "u",
    "speed": "v",
    "mass": "m",
}


@dataclass(frozen=True)
class ComparisonReport:
    """
    Per-profile deviations of a run from a reference

    Attributes
    ----------
    run : str
        label of the compared trajectory
    reference : str
        label of the reference profile
    max_abs_dev : dict
        profile -> max |run - reference|
    rms_dev : dict
        profile -> root mean square of run - reference
    terminal_mass_diff : float
        run terminal mass minus reference mass at the last run altitude
    """

    run: str
    reference: str
    max_abs_dev: dict
    rms_dev: dict
    terminal_mass_diff: float

    def to_frame(self):
        """One row per profile with columns profile, max_abs_dev, rms_dev, terminal_mass_diff"""
        return pd.DataFrame({
            "profile": list(PROFILES),
            "max_abs_dev": [self.max_abs_dev[k] for k in PROFILES],
            "rms_dev": [self.rms_dev[k] for k in PROFILES],
            "terminal_mass_diff": self.terminal_mass_diff,
        })


def resample(reference, h):
    """Linear interpolation of the reference profiles at altitudes h

    Args:
        reference (Trajectory): profile with strictly increasing altitudes
        h (np.ndarray): query altitudes inside the reference range

    Returns:
        dict: attribute (u, v, m) -> resampled values
    """
    return {attr: np.interp(h, reference.h, getattr(reference, attr)) for attr in PROFILES.values()}


def compare(run, reference, rel_tol=1e-9):
    """Compare control, speed and mass profiles of a run with a reference

    The reference is resampled at the run altitudes.

    Args:
        run (Trajectory): trajectory of the run
        reference (Trajectory): reference trajectory
        rel_tol (float, optional): slack on the altitude range, relative to its width

    Raises:
        SpanMismatchError: run altitudes leave the reference range

    Returns:
        ComparisonReport: deviations, all >= 0
    """
    slack = rel_tol * (reference.h[-1] - reference.h[0])
    if run.h[0] < reference.h[0] - slack or run.h[-1] > reference.h[-1] + slack:
        raise SpanMismatchError(
            f"Altitude span mismatch: run covers [{run.h[0]!r}, {run.h[-1]!r}], "
            f"reference covers [{reference.h[0]!r}, {reference.h[-1]!r}]"
        )
    ref = resample(reference, run.h)
    max_abs, rms = {}, {}
    for name, attr in PROFILES.items():
        diff = getattr(run, attr) - ref[attr]
        max_abs[name] = float(np.max(np.abs(diff)))
        rms[name] = float(np.sqrt(np.mean(diff * diff)))
    return ComparisonReport(
        run=run.label,
        reference=reference.label,
        max_abs_dev=max_abs,
        rms_dev=rms,
        terminal_mass_diff=float(run.m[-1] - ref["m"][-1]),
    )
