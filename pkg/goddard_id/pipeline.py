"""Build, solve, roll out and report one run"""
import logging
import time
from dataclasses import dataclass

import numpy as np

from goddard_id.analysis.compare import compare
from goddard_id.errors import InfeasibleProblemError
from goddard_id.models.dynamics import ModelParams, RocketState
from goddard_id.parser.profile import (check_span, write_trajectory, write_policy, write_comparison, write_expected,
                                       write_summary)
from goddard_id.solver.diagram import build_transitions, solve, expected_profile, cell_distribution
from goddard_id.solver.grids import nearest
from goddard_id.solver.rollout import (launch, initial_state, simulate, check_speed_range, subarc_classify,
                                       pilot_max_speed)
from goddard_id.solver.steppers import get_stepper
from goddard_id.utils.io import staged_outputs

__all__ = [
    "RunResult",
    "solve_run",
    "run_summary",
    "write_run",
]

logger = logging.getLogger(__name__)

# Controls of the run sit exactly on grid points
SUBARC_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class RunResult:
    """
    Everything produced by one run

    Attributes
    ----------
    spec : RunSpec
    params : ModelParams
    plan : SegmentPlan
    grids : Grids
    transitions : TransitionModel
    values : ValueTable
    policy : Policy
    launch : LaunchDecision or None
        lift-off decision, None when the rollout starts in flight at a given speed
    start_cell : tuple or None
        (v_idx, m_idx) of the in-flight start on the first boundary
    trajectory : Trajectory
        deterministic rollout
    subarcs : list
        [Subarc, ] of the rollout
    expected_v, expected_m : np.ndarray
        expected profile through the tables
    wall_time : float
        seconds spent building and solving the tables
    """

    spec: object
    params: ModelParams
    plan: object
    grids: object
    transitions: object
    values: object
    policy: object
    launch: object
    start_cell: object
    trajectory: object
    subarcs: list
    expected_v: object
    expected_m: object
    wall_time: float

    @property
    def name(self):
        return self.spec.name

    @property
    def launch_state(self):
        """First state valued by the tables, RocketState on boundary 1 or 0"""
        if self.launch is not None:
            return self.launch.state
        t = self.trajectory
        return RocketState(float(t.h[0]), float(t.m[0]), float(t.v[0]))

    @property
    def expected_terminal_mass(self):
        """Optimal expected terminal mass of the launch"""
        if self.launch is not None:
            return self.launch.value
        return self.values.value(0, *self.start_cell)


def solve_run(spec, p=None, threads=1, v_start=None, config=None, progress=False):
    """Solve the influence diagram of a run and roll out its policy

    Args:
        spec (RunSpec): discretization
        p (ModelParams, optional): model constants. Defaults to ModelParams().
        threads (int, optional): worker processes for the tables
        v_start (float, optional): start in flight at h0 with this speed instead
            of lifting off from rest
        config (ImplicitSolveConfig, optional): implicit stage settings
        progress (bool, optional): show a progress bar

    Raises:
        RunSpecError: dh does not divide the altitude span
        InfeasibleProblemError: no feasible lift-off or live start cell
        RolloutError: the rollout enters a dead cell
        GridRangeError: the rollout leaves the speed grid

    Returns:
        RunResult: solved run
    """
    p = ModelParams() if p is None else p
    plan = spec.plan(p)
    grids = spec.grids(p)
    stepper = get_stepper(spec.method, config)
    logger.info(f"Run {spec.name}: {plan.n_segments} segments, {spec.nv}x{spec.nm} cells, {spec.nu} controls")

    v_pilot = pilot_max_speed(p, stepper, plan.dh)
    if v_pilot > p.v_max:
        logger.warning(f"A max-thrust flight reaches speed {v_pilot:.4g} above v_max={p.v_max}")

    t0 = time.perf_counter()
    tm = build_transitions(plan, grids, stepper, p, threads=threads, progress=progress)
    vt, pol = solve(tm)
    wall_time = time.perf_counter() - t0
    logger.info(f"Tables built and solved in {wall_time:.2f}s")

    decision, start_cell = None, None
    if v_start is None:
        decision, traj = launch(pol, vt, grids, plan, stepper, p, label=spec.name)
        dist = cell_distribution(grids, decision.state.v, decision.state.m)
        e_v, e_m = expected_profile(tm, pol, dist, boundary=1)
        e_v, e_m = np.r_[0.0, e_v], np.r_[p.m0, e_m]
    else:
        start = initial_state(p, v_start)
        start_cell = (nearest(grids.speed, start.v), nearest(grids.mass, start.m))
        if not vt.alive[0][start_cell]:
            raise InfeasibleProblemError(f"Start cell {start_cell} at v={start.v} is dead at this discretization")
        traj = simulate(pol, grids, plan, stepper, p, start, label=spec.name)
        e_v, e_m = expected_profile(tm, pol, start_cell)
    check_speed_range(traj, p)
    subarcs = subarc_classify(traj, SUBARC_TOL, p.u_min)
    result = RunResult(spec, p, plan, grids, tm, vt, pol, decision, start_cell, traj, subarcs, e_v, e_m, wall_time)
    logger.info(f"Terminal mass {traj.terminal_mass:.6f}, expected {result.expected_terminal_mass:.6f}")
    return result


def run_summary(result, report=None):
    """Ordered summary entries of a run"""
    t = result.trajectory
    summary = {
        "run": result.name,
        "method": result.transitions.method,
        "segments": result.plan.n_segments,
        "launch_speed": float(t.v[0]),
        "terminal_mass": t.terminal_mass,
        "terminal_speed": t.terminal_speed,
        "fuel_burned": t.fuel_burned,
        "expected_terminal_mass": result.expected_terminal_mass,
        "subarcs": [f"{s.kind} [{s.h_start!r}, {s.h_end!r}]" for s in result.subarcs],
    }
    if result.launch is not None:
        summary["lift_off_control"] = result.launch.control
        summary["lift_off_speed"] = result.launch.state.v
        summary["lift_off_mass"] = result.launch.state.m
    if report is not None:
        summary["reference"] = report.reference
        summary["terminal_mass_diff"] = report.terminal_mass_diff
    summary["solve_wall_time_s"] = f"{result.wall_time:.3f}"
    return summary


def write_run(result, out_dir, reference=None, expected=False):
    """Write the output files of a run

    Files appear only if every write succeeds.

    Args:
        result (RunResult): solved run
        out_dir (str): output directory
        reference (ReferenceProfile, optional): profile to compare with
        expected (bool, optional): also write the expected profile

    Raises:
        SpanMismatchError: reference does not span [h0, hT]

    Returns:
        list: names of the written files
    """
    report = None
    if reference is not None:
        check_span(reference.trajectory, result.params.h0, result.params.hT)
        report = compare(result.trajectory, reference.trajectory)

    name = result.name
    written = []
    with staged_outputs(out_dir) as stage:
        def target(suffix):
            written.append(f"{name}.{suffix}")
            return stage.path(written[-1])

        write_trajectory(result.trajectory, target("trajectory.csv"))
        write_policy(result.policy, target("policy.csv"))
        write_summary(run_summary(result, report), target("summary.txt"))
        if report is not None:
            write_comparison(report, target("compare.csv"))
        if expected:
            write_expected(result.plan.altitudes, result.expected_v, result.expected_m, target("expected.csv"))
    logger.info(f"Wrote {', '.join(written)} to {out_dir}")
    return written
