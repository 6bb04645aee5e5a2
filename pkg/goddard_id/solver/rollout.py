"""Deterministic execution of a solved policy"""
import logging
from collections import namedtuple
from dataclasses import dataclass

import numpy as np
import pandas as pd

from goddard_id.errors import InfeasibleStepError, ImplicitSolveError, RolloutError, GridRangeError, UsageError
from goddard_id.models.dynamics import RocketState
from goddard_id.solver.grids import nearest
from goddard_id.solver.liftoff import lift_off, solve_launch
from goddard_id.utils.intervals import group_runs

__all__ = [
    "Trajectory",
    "Subarc",
    "SUBARC_KINDS",
    "initial_state",
    "start_boundary",
    "simulate",
    "launch",
    "subarc_classify",
    "pilot_max_speed",
    "check_speed_range",
]

logger = logging.getLogger(__name__)

PROFILE_COLUMNS = ["h", "u", "v", "m"]

Subarc = namedtuple("Subarc", "kind h_start h_end")
SUBARC_KINDS = ("max-thrust", "variable", "coast")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    Samples (h, u, v, m) at every segment boundary

    Row i holds the state at boundary i and the control applied on segment i;
    the last row repeats the control of the last segment.

    Attributes
    ----------
    h, u, v, m : np.ndarray
        profiles, altitude ascending
    label : str
        run name or provenance of the profile
    """

    h: np.ndarray
    u: np.ndarray
    v: np.ndarray
    m: np.ndarray
    label: str = ""

    def __post_init__(self):
        arrays = [np.asarray(getattr(self, c), dtype=float) for c in PROFILE_COLUMNS]
        if len({len(x) for x in arrays}) != 1 or len(arrays[0]) < 2:
            raise UsageError("A trajectory needs at least 2 samples of equal length h, u, v, m")
        for c, x in zip(PROFILE_COLUMNS, arrays):
            object.__setattr__(self, c, x)

    def __len__(self):
        return len(self.h)

    @property
    def controls(self):
        """Control of each segment"""
        return self.u[:-1]

    @property
    def terminal_mass(self):
        return float(self.m[-1])

    @property
    def terminal_speed(self):
        return float(self.v[-1])

    @property
    def fuel_burned(self):
        return float(self.m[0] - self.m[-1])

    def to_frame(self):
        """Convert to pd.DataFrame with columns h, u, v, m"""
        return pd.DataFrame({c: getattr(self, c) for c in PROFILE_COLUMNS})

    @classmethod
    def from_frame(cls, df, label=""):
        return cls(*(df[c].to_numpy(dtype=float) for c in PROFILE_COLUMNS), label=label)

    def constraint_violations(self, p):
        """Path-constraint violations of the profile

        Args:
            p (ModelParams): model constants

        Returns:
            list: human readable violations, empty if the profile is admissible
        """
        issues = []
        if np.any(np.diff(self.h) <= 0):
            issues.append("altitude is not strictly increasing")
        if np.any(np.diff(self.m) > 0):
            issues.append("mass increases")
        if np.any(self.m < p.m_payload):
            issues.append(f"mass falls below the payload {p.m_payload}")
        if np.any(self.v[1:-1] <= 0):
            issues.append("interior speed is not positive")
        if self.v[-1] < 0:
            issues.append("terminal speed is negative")
        return issues


def initial_state(p, v_start):
    """Launch state of a rollout started in flight at h0

    Raises:
        UsageError: v_start is below the speed grid floor

    Returns:
        RocketState: (h0, m0, v_start)
    """
    if not v_start >= p.v_eps:
        raise UsageError(f"Launch speed {v_start} is below the speed grid floor {p.v_eps}")
    return RocketState(p.h0, p.m0, float(v_start))


def start_boundary(plan, h, rel_tol=1e-9):
    """Index of the segment boundary at altitude h

    Raises:
        UsageError: h is not a boundary of the plan
    """
    tol = rel_tol * max(plan.hT - plan.h0, 1.0)
    hits = np.flatnonzero(np.abs(plan.altitudes - h) <= tol)
    if not len(hits):
        raise UsageError(f"Start altitude {h!r} is not a segment boundary of [{plan.h0!r}, {plan.hT!r}]")
    return int(hits[0])


def _fly(pol, grids, plan, stepper, p, state, k):
    """Samples of the policy flown from boundary k to hT"""
    n = plan.n_segments
    hs, us, vs, ms = [plan.h_of(k)], [], [float(state.v)], [float(state.m)]
    state = RocketState(plan.h_of(k), float(state.m), float(state.v))
    for i in range(k, n):
        iv, im = nearest(grids.speed, state.v), nearest(grids.mass, state.m)
        u = pol.control(i, iv, im)
        if u is None:
            raise RolloutError(i, f"cell (v={iv}, m={im}) is dead")
        try:
            res = stepper.step(state, u, plan.dh, p)
        except (InfeasibleStepError, ImplicitSolveError) as e:
            raise RolloutError(i, str(e)) from e
        terminal = i == n - 1
        if res.m_next < p.m_payload or not (res.v_next >= 0 if terminal else res.v_next > 0):
            raise RolloutError(i, f"step ends at infeasible m={res.m_next}, v={res.v_next}")
        state = RocketState(plan.h_of(i + 1), res.m_next, res.v_next)
        hs.append(state.h)
        us.append(u)
        vs.append(state.v)
        ms.append(state.m)
    return hs, us, vs, ms


def simulate(pol, grids, plan, stepper, p, start, label=""):
    """Roll out a policy from a continuous start state

    The control of the grid cell nearest to the state is held over each
    segment, and the state is advanced with one stepper application.

    Args:
        pol (Policy): solved policy
        grids (Grids): grids of the policy
        plan (SegmentPlan): altitude segments
        stepper (Stepper): integrator used to build the policy
        p (ModelParams): model constants
        start (RocketState): start state on a segment boundary below hT
        label (str, optional): trajectory label

    Raises:
        UsageError: start.h is not a boundary below hT or start.v < v_eps
        RolloutError: the state enters a dead cell or a step is infeasible

    Returns:
        Trajectory: rolled-out profile from start.h to hT
    """
    k = start_boundary(plan, start.h)
    if k == plan.n_segments:
        raise UsageError(f"Start altitude {start.h!r} leaves no segment to fly")
    if not start.v >= p.v_eps:
        raise UsageError(f"Start speed {start.v} is below the speed grid floor {p.v_eps}")
    hs, us, vs, ms = _fly(pol, grids, plan, stepper, p, start, k)
    us.append(us[-1])
    return Trajectory(np.array(hs), np.array(us), np.array(vs), np.array(ms), label=label)


def launch(pol, vt, grids, plan, stepper, p, label=""):
    """Lift off from rest with the best first-segment control, then follow the policy

    The first sample is the rest state (h0, v = 0, m0) and carries the
    lift-off control.

    Raises:
        InfeasibleProblemError: no control lifts off into live cells
        RolloutError: the rollout enters a dead cell or a step is infeasible

    Returns:
        (LaunchDecision, Trajectory): lift-off decision and the rollout
    """
    decision = solve_launch(vt, grids, plan, p)
    hs, us, vs, ms = _fly(pol, grids, plan, stepper, p, decision.state, 1)
    us = [decision.control, *us, (us or [decision.control])[-1]]
    t = Trajectory(np.array([p.h0, *hs]), np.array(us), np.array([0.0, *vs]), np.array([p.m0, *ms]), label=label)
    return decision, t


def check_speed_range(t, p):
    """Fail if a rollout left the speed grid

    Raises:
        GridRangeError: some speed exceeds v_max
    """
    v_top = float(np.max(t.v))
    if v_top > p.v_max:
        raise GridRangeError(f"Rollout speed {v_top:.6g} exceeds the speed grid cap v_max={p.v_max}, raise --v-max")


def subarc_classify(t, tol, u_min):
    """Split a trajectory into maximal max-thrust, variable-thrust and coasting subarcs

    Args:
        t (Trajectory): profile
        tol (float): control tolerance
        u_min (float): maximum-thrust control of the model, ModelParams.u_min

    Returns:
        list: [Subarc(kind, h_start, h_end), ] ordered by altitude
    """
    if not tol > 0:
        raise UsageError(f"Control tolerance must be positive, got {tol}")
    labels = []
    for u in t.controls:
        if abs(u - u_min) <= tol:
            labels.append("max-thrust")
        elif abs(u) <= tol:
            labels.append("coast")
        else:
            labels.append("variable")
    return [Subarc(kind, float(t.h[st]), float(t.h[en + 1])) for kind, st, en in group_runs(labels)]


def pilot_max_speed(p, stepper, dh, v_start=None):
    """Highest speed of a full-thrust-then-coast flight

    Full thrust is held while the payload floor allows it, then the rocket
    coasts; the flight stops at hT or when a step becomes infeasible.

    Args:
        p (ModelParams): model constants
        stepper (Stepper): integrator
        dh (float): segment length
        v_start (float, optional): speed at h0. Defaults to a full-thrust
            lift-off from rest over the first segment.

    Returns:
        float: highest speed reached, 0 if the rocket cannot lift off
    """
    if v_start is None:
        try:
            res = lift_off(p.u_min, dh, p)
        except InfeasibleStepError as e:
            logger.debug(f"Pilot flight cannot lift off: {e}")
            return 0.0
        state = RocketState(p.h0 + dh, res.m_next, res.v_next)
    else:
        state = RocketState(p.h0, p.m0, float(v_start))
    v_top = state.v
    while state.h < p.hT - 0.5 * dh:
        step = None
        for u in (p.u_min, 0.0):
            try:
                res = stepper.step(state, u, dh, p)
            except (InfeasibleStepError, ImplicitSolveError):
                continue
            if res.m_next >= p.m_payload and res.v_next > 0:
                step = res
                break
        if step is None:
            break
        state = RocketState(state.h + dh, step.m_next, step.v_next)
        v_top = max(v_top, state.v)
    logger.debug(f"Pilot flight reaches speed {v_top:.6g}")
    return v_top
