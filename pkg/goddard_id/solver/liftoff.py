"""Lift-off from rest over the first altitude segment

The altitude-domain dynamics are singular at v = 0, so the first segment is
flown in the time domain from (h0, m0, v = 0):

    h' = v,  v' = (-u - d(v, h)) / m - 1 / h^2,  m' = u / c

until h reaches h0 + dh. The rest of the flight uses the segment tables.
"""
import logging
from collections import namedtuple

import numpy as np
from scipy.integrate import solve_ivp

from goddard_id.errors import InfeasibleStepError, InfeasibleProblemError, UsageError
from goddard_id.models.dynamics import RocketState, gravity
from goddard_id.solver.diagram import _tie_break_order
from goddard_id.solver.steppers import StepResult

__all__ = [
    "LaunchDecision",
    "lift_off",
    "solve_launch",
]

logger = logging.getLogger(__name__)

LaunchDecision = namedtuple("LaunchDecision", "control control_idx state value")

# Normalized time allowed to climb one segment
MAX_LIFT_OFF_TIME = 10.0


def _rhs(t, y, u, p):
    h, v, m = y
    d = p.drag_factor * np.exp(p.beta * (1.0 - h)) * v * v
    return [v, (-u - d) / m - 1.0 / (h * h), u / p.c]


def lift_off(u, dh, p, rtol=1e-10, atol=1e-12):
    """Fly from rest at (h0, m0) up to h0 + dh under a constant control

    Args:
        u (float): control held during the climb
        dh (float): segment length
        p (ModelParams): model constants
        rtol (float, optional): relative tolerance of the integrator
        atol (float, optional): absolute tolerance of the integrator

    Raises:
        UsageError: dh is not positive
        InfeasibleStepError: the thrust does not lift the launch mass, the
            fuel runs out below h0 + dh or the climb ends below v_eps

    Returns:
        StepResult: mass and speed at h0 + dh, stages_used is 0
    """
    if not dh > 0:
        raise UsageError(f"Segment length must be positive, got {dh}")
    if not -u > p.m0 * gravity(p.h0):
        raise InfeasibleStepError(f"Thrust {-u} does not lift the launch weight {p.m0 * gravity(p.h0)}")

    def reach(t, y):
        return y[0] - (p.h0 + dh)
    reach.terminal = True
    reach.direction = 1

    def burnout(t, y):
        return y[2] - p.m_payload
    burnout.terminal = True
    burnout.direction = -1

    sol = solve_ivp(
        fun=lambda t, y: _rhs(t, y, u, p),
        t_span=(0.0, MAX_LIFT_OFF_TIME),
        y0=[p.h0, 0.0, p.m0],
        events=[reach, burnout],
        method="RK45",
        rtol=rtol,
        atol=atol,
    )
    if sol.status == -1:
        raise InfeasibleStepError(f"Lift-off integration failed: {sol.message}")
    if len(sol.t_events[1]) or not len(sol.t_events[0]):
        raise InfeasibleStepError(f"Control {u} burns out before h0 + {dh}")
    _, v1, m1 = sol.y_events[0][0]
    if v1 < p.v_eps:
        raise InfeasibleStepError(f"Control {u} reaches h0 + {dh} at speed {v1:.6g} below v_eps={p.v_eps}")
    return StepResult(float(m1), float(v1), 0)


def solve_launch(vt, grids, plan, p):
    """Lift-off control maximizing the expected terminal mass

    Every control is flown from rest over the first segment; the resulting
    state is valued by bilinear interpolation of the first-boundary values.
    Ties go to the control of smaller |u|, then to the lower index.

    Args:
        vt (ValueTable): solved values
        grids (Grids): grids of the tables
        plan (SegmentPlan): altitude segments
        p (ModelParams): model constants

    Raises:
        InfeasibleProblemError: no control lifts off into live cells

    Returns:
        LaunchDecision: control, its index, state at the first boundary and value
    """
    controls = grids.control.points
    best = None
    for k in _tie_break_order(controls):
        u = float(controls[k])
        try:
            res = lift_off(u, plan.dh, p)
        except InfeasibleStepError as e:
            logger.debug(f"Lift-off with u={u:.6g} rejected: {e}")
            continue
        value = vt.interpolate(grids, 1, res.v_next, res.m_next)
        if np.isnan(value):
            logger.debug(f"Lift-off with u={u:.6g} lands next to a dead cell")
            continue
        if best is None or value > best.value:
            best = LaunchDecision(u, int(k), RocketState(plan.h_of(1), res.m_next, res.v_next), value)
    if best is None:
        raise InfeasibleProblemError("Problem infeasible at this discretization: no control lifts off into live cells")
    logger.info(f"Lift-off with u={best.control:.6g} reaches v={best.state.v:.6g}, m={best.state.m:.6g}")
    return best
