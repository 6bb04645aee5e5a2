"""Comparisons across several runs"""
import numpy as np
import pandas as pd

from goddard_id.analysis.compare import compare
from goddard_id.errors import UsageError

__all__ = [
    "SWEEP_COLUMNS",
    "sweep_table",
    "refinement_gap",
]

SWEEP_COLUMNS = ["run", "profile", "max_abs_dev", "rms_dev", "terminal_mass_diff"]


def sweep_table(trajectories, reference):
    """Stack the comparison of every run against one reference

    Args:
        trajectories (list): [Trajectory, ] labelled with their run names
        reference (Trajectory): reference profile

    Returns:
        pd.DataFrame: columns run, profile, max_abs_dev, rms_dev, terminal_mass_diff
    """
    frames = []
    for t in trajectories:
        df = compare(t, reference).to_frame()
        df.insert(0, "run", t.label)
        frames.append(df)
    if not frames:
        return pd.DataFrame(columns=SWEEP_COLUMNS)
    return pd.concat(frames, ignore_index=True)[SWEEP_COLUMNS]


def refinement_gap(coarse, fine):
    """Gain in optimal expected terminal mass from a finer discretization

    Both runs must start the same way: the same model constants, segments and
    controls, and either both lift off from rest or both start in flight at
    the same speed.

    Args:
        coarse (RunResult): solved coarse run
        fine (RunResult): solved fine run

    Raises:
        UsageError: the runs do not share their launch

    Returns:
        float: fine minus coarse
    """
    if coarse.params != fine.params or coarse.plan != fine.plan:
        raise UsageError(f"Runs {coarse.name} and {fine.name} differ in model constants or segments")
    if not np.array_equal(coarse.grids.control.points, fine.grids.control.points):
        raise UsageError(f"Runs {coarse.name} and {fine.name} differ in their control grids")
    if (coarse.launch is None) != (fine.launch is None) or (
            coarse.launch is None and coarse.trajectory.v[0] != fine.trajectory.v[0]):
        raise UsageError(f"Runs {coarse.name} and {fine.name} start from different launch states")
    return fine.expected_terminal_mass - coarse.expected_terminal_mass
