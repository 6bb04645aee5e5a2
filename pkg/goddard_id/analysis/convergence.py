"""Order-of-convergence study of the segment integrators"""
import logging
from collections import namedtuple

import numpy as np
import pandas as pd
from scipy import stats

from goddard_id.errors import UsageError
from goddard_id.models.dynamics import ModelParams, RocketState
from goddard_id.solver.steppers import get_stepper

__all__ = [
    "SMOOTH_START",
    "ConvergenceReport",
    "integrate",
    "convergence_study",
]

logger = logging.getLogger(__name__)

# A smooth segment well inside the feasible region
SMOOTH_START = RocketState(h=1.001, m=0.9, v=0.05)
SMOOTH_CONTROL = -1.0
SMOOTH_SPAN = 1e-3

ConvergenceReport = namedtuple("ConvergenceReport", "method table slope")


def integrate(stepper, start, u, span, n_steps, p):
    """Advance a state over span in n_steps equal steps under constant u

    Returns:
        RocketState: state at start.h + span
    """
    dh = span / n_steps
    state = start
    for k in range(n_steps):
        res = stepper.step(state, u, dh, p)
        state = RocketState(start.h + (k + 1) * dh, res.m_next, res.v_next)
    return state


def convergence_study(method, n_steps=(2, 4, 8, 16), p=None, start=SMOOTH_START, u=SMOOTH_CONTROL,
                      span=SMOOTH_SPAN, ref_factor=256, config=None):
    """Errors of a stepper against a fine RK4 solution, and the fitted order

    The error of a run is max(|m - m_ref|, |v - v_ref|) at the end of the span;
    the slope of log2(error) against log2(dh) estimates the order.

    Args:
        method (str): stepper key, E, RK or G
        n_steps (tuple, optional): step counts, increasing
        p (ModelParams, optional): model constants. Defaults to ModelParams().
        start (RocketState, optional): start of the span
        u (float, optional): constant control
        span (float, optional): altitude span
        ref_factor (int, optional): the reference uses ref_factor times the
            smallest step count of RK4 steps
        config (ImplicitSolveConfig, optional): implicit stage settings

    Returns:
        ConvergenceReport: method, table with columns n_steps, dh, error,
        ratio, order and the fitted slope
    """
    n_steps = [int(n) for n in n_steps]
    if len(n_steps) < 2 or any(b <= a for a, b in zip(n_steps, n_steps[1:])) or n_steps[0] < 1:
        raise UsageError(f"Need at least 2 increasing positive step counts, got {n_steps}")
    p = ModelParams() if p is None else p
    stepper = get_stepper(method, config)

    ref = integrate(get_stepper("RK"), start, u, span, ref_factor * n_steps[0], p)
    logger.debug(f"Reference state m={ref.m!r}, v={ref.v!r}")

    rows = []
    for n in n_steps:
        end = integrate(stepper, start, u, span, n, p)
        rows.append({"n_steps": n, "dh": span / n, "error": max(abs(end.m - ref.m), abs(end.v - ref.v))})
    table = pd.DataFrame(rows)
    errors = table["error"].to_numpy()
    ratio = np.r_[np.nan, errors[:-1] / errors[1:]]
    table["ratio"] = ratio
    table["order"] = np.log2(ratio) / np.log2(table["n_steps"].to_numpy() / np.r_[np.nan, n_steps[:-1]])

    fit = stats.linregress(np.log2(table["dh"]), np.log2(table["error"]))
    logger.info(f"{stepper.tableau.name}: observed order {fit.slope:.3f}")
    return ConvergenceReport(method, table, float(fit.slope))
