import numpy as np
import pytest

from goddard_id.analysis import compare, resample, sweep_table
from goddard_id.errors import RolloutError, GridRangeError, SpanMismatchError, UsageError, InfeasibleProblemError
from goddard_id.models import ModelParams, RocketState
from goddard_id.solver import (Trajectory, Policy, solve, simulate, launch, initial_state, start_boundary,
                               StepResult, subarc_classify, pilot_max_speed, check_speed_range, get_stepper)


def _coast_policy(plan, grids):
    idx = np.full((plan.n_segments, grids.speed.n, grids.mass.n), grids.control.n - 1)
    return Policy(idx, grids.control.points)


def _trajectory(us, h0=1.0, dh=1e-3, label="t"):
    n = len(us) + 1
    h = h0 + dh * np.arange(n)
    return Trajectory(h, np.r_[us, us[-1]], np.linspace(0.1, 0.05, n), np.linspace(1.0, 0.8, n), label=label)


def test_all_coast_rollout(toy_model):
    p, plan, grids, stepper, tm = toy_model
    t = simulate(_coast_policy(plan, grids), grids, plan, stepper, p, RocketState(p.h0, 0.9, 0.2))
    assert np.all(t.m == 0.9)
    assert np.all(np.diff(t.v) < 0)
    assert t.fuel_burned == 0.0
    assert list(t.h) == list(plan.altitudes)
    assert t.constraint_violations(p) == []


def test_rollout_matches_expected_mass_on_grid_nodes(toy_model):
    # coasting optimal everywhere, the mass stays on its grid node
    p, plan, grids, stepper, tm = toy_model
    vt, pol = solve(tm)
    assert np.all(pol.control_idx == grids.control.n - 1)
    cell = (grids.speed.n - 1, grids.mass.n - 1)
    t = simulate(pol, grids, plan, stepper, p, RocketState(p.h0, p.m0, grids.speed.point(cell[0])))
    assert t.terminal_mass == vt.values[0][cell]
    assert t.terminal_speed >= 0
    assert t.constraint_violations(p) == []


def test_initial_state(params):
    assert initial_state(params, 0.1) == RocketState(params.h0, params.m0, 0.1)
    with pytest.raises(UsageError):
        initial_state(params, 0.01)


def test_start_boundary(toy_model):
    p, plan, grids, stepper, tm = toy_model
    assert start_boundary(plan, p.h0) == 0
    assert start_boundary(plan, plan.h_of(1)) == 1
    assert start_boundary(plan, p.hT) == plan.n_segments
    with pytest.raises(UsageError):
        start_boundary(plan, p.h0 + 0.3 * plan.dh)


def test_simulate_from_later_boundary(toy_model):
    p, plan, grids, stepper, tm = toy_model
    t = simulate(_coast_policy(plan, grids), grids, plan, stepper, p, RocketState(plan.h_of(1), 0.9, 0.2))
    assert len(t) == plan.n_segments
    assert t.h[0] == plan.h_of(1)
    assert t.h[-1] == p.hT


@pytest.mark.parametrize("start", [
    RocketState(1.0002, 0.9, 0.2),
    RocketState(1.001, 0.9, 0.2),
    RocketState(1.0, 0.9, 0.01),
    RocketState(1.0, 0.9, 0.0),
])
def test_simulate_rejects_bad_start(toy_model, start):
    # off-boundary altitude, no segment left, speeds below the grid floor
    p, plan, grids, stepper, tm = toy_model
    with pytest.raises(UsageError):
        simulate(_coast_policy(plan, grids), grids, plan, stepper, p, start)


def test_launch_lifts_off_from_rest(model_factory):
    p, plan, grids, stepper, tm = model_factory(n_segments=2, dh=1e-3)
    vt, pol = solve(tm)
    decision, t = launch(pol, vt, grids, plan, stepper, p)
    assert (t.h[0], t.v[0], t.m[0]) == (p.h0, 0.0, p.m0)
    assert t.u[0] == decision.control == p.u_min
    assert t.h[1] == decision.state.h == plan.h_of(1)
    assert (t.v[1], t.m[1]) == (decision.state.v, decision.state.m)
    assert decision.state.v >= p.v_eps
    assert list(t.h) == list(plan.altitudes)
    # the last segment coasts, so the lift-off mass is the terminal mass
    assert t.terminal_mass == decision.state.m
    assert decision.value == pytest.approx(t.terminal_mass, abs=1e-12)
    assert t.constraint_violations(p) == []


def test_launch_too_slow_to_lift_off(model_factory):
    # 5e-4 from rest ends below v_eps = 0.06 for every control
    p, plan, grids, stepper, tm = model_factory(n_segments=2, dh=5e-4, v_eps=0.06)
    vt, pol = solve(tm)
    with pytest.raises(InfeasibleProblemError):
        launch(pol, vt, grids, plan, stepper, p)


def test_launch_without_live_cells(model_factory):
    p, plan, grids, stepper, tm = model_factory(n_segments=2, dh=1e-3)
    vt, pol = solve(tm)
    vt.alive[1] = False
    with pytest.raises(InfeasibleProblemError):
        launch(pol, vt, grids, plan, stepper, p)


def test_rollout_dead_cell(toy_model):
    p, plan, grids, stepper, tm = toy_model
    pol = Policy(np.full((plan.n_segments, grids.speed.n, grids.mass.n), Policy.DEAD), grids.control.points)
    with pytest.raises(RolloutError) as e:
        simulate(pol, grids, plan, stepper, p, RocketState(p.h0, p.m0, 0.2))
    assert e.value.segment == 0


def test_rollout_infeasible_step(toy_model):
    p, plan, grids, stepper, tm = toy_model
    thrust = Policy(np.zeros((plan.n_segments, grids.speed.n, grids.mass.n), dtype=int), grids.control.points)
    # full thrust at the payload mass
    with pytest.raises(RolloutError):
        simulate(thrust, grids, plan, stepper, p, RocketState(p.h0, 0.6, 0.2))


class _HalvingStepper:
    """Coasts at constant mass, halving the speed and stopping dead at hT"""

    key = "E"

    def __init__(self, plan):
        self.plan = plan

    def step(self, state, u, dh, p):
        stop = state.h + dh >= self.plan.hT - 1e-12
        return StepResult(state.m, 0.0 if stop else state.v / 2, 0)


def test_rollout_keeps_exact_terminal_stop(toy_model):
    p, plan, grids, stepper, tm = toy_model
    t = simulate(_coast_policy(plan, grids), grids, plan, _HalvingStepper(plan), p, RocketState(p.h0, 0.9, 0.2))
    assert list(t.v) == [0.2, 0.1, 0.0]
    assert t.terminal_speed == 0.0
    assert t.constraint_violations(p) == []


def test_rollout_deterministic(model_factory):
    p, plan, grids, stepper, tm = model_factory(n_segments=2, dh=1e-3)
    vt, pol = solve(tm)
    _, a = launch(pol, vt, grids, plan, stepper, p)
    _, b = launch(pol, vt, grids, plan, stepper, p)
    for c in ("h", "u", "v", "m"):
        assert np.array_equal(getattr(a, c), getattr(b, c))


def test_trajectory_frame():
    t = _trajectory([-3.5, -1.0, 0.0])
    df = t.to_frame()
    assert list(df.columns) == ["h", "u", "v", "m"]
    back = Trajectory.from_frame(df, label="t")
    assert np.array_equal(back.v, t.v)
    assert t.terminal_mass == pytest.approx(0.8)
    assert t.fuel_burned == pytest.approx(0.2)
    with pytest.raises(UsageError):
        Trajectory([1.0], [0.0], [0.1], [1.0])


def test_constraint_violations():
    p = ModelParams()
    t = _trajectory([0.0, 0.0])
    assert t.constraint_violations(p) == []
    bad = Trajectory(t.h, t.u, np.array([0.1, 0.0, 0.05]), np.array([1.0, 0.5, 0.7]))
    issues = bad.constraint_violations(p)
    assert len(issues) == 3


def test_subarcs_three_kinds():
    t = _trajectory([-3.5, -3.5, -1.2, -0.8, 0.0, 0.0])
    arcs = subarc_classify(t, 1e-9, -3.5)
    assert [a.kind for a in arcs] == ["max-thrust", "variable", "coast"]
    assert arcs[0].h_start == t.h[0]
    assert arcs[-1].h_end == t.h[-1]
    for a, b in zip(arcs, arcs[1:]):
        assert a.h_end == b.h_start


def test_subarcs_single():
    arcs = subarc_classify(_trajectory([-3.5] * 4), 1e-9, -3.5)
    assert [a.kind for a in arcs] == ["max-thrust"]
    with pytest.raises(UsageError):
        subarc_classify(_trajectory([0.0]), 0.0, -3.5)


def test_compare_self():
    t = _trajectory([-3.5, -1.0, 0.0, 0.0])
    report = compare(t, t)
    assert all(x == 0.0 for x in report.max_abs_dev.values())
    assert all(x == 0.0 for x in report.rms_dev.values())
    assert report.terminal_mass_diff == 0.0
    assert list(report.to_frame()["profile"]) == ["control", "speed", "mass"]


def test_compare_constant_offset():
    t = _trajectory([-3.5, -1.0, 0.0, 0.0])
    shifted = Trajectory(t.h, t.u, t.v, t.m + 0.01, label="ref")
    report = compare(t, shifted)
    assert report.max_abs_dev["mass"] == pytest.approx(0.01)
    assert report.rms_dev["mass"] == pytest.approx(0.01)
    assert report.max_abs_dev["speed"] == 0.0
    assert report.terminal_mass_diff == pytest.approx(-0.01)
    assert report.reference == "ref" and report.run == "t"
    assert compare(shifted, t).max_abs_dev == pytest.approx(report.max_abs_dev)


def test_resample_at_knots():
    t = _trajectory([-3.5, -1.0, 0.0, 0.0])
    values = resample(t, t.h)
    assert np.array_equal(values["m"], t.m)
    assert np.array_equal(values["u"], t.u)


def test_compare_coarser_reference():
    fine = _trajectory([0.0] * 10, dh=1e-3)
    coarse = Trajectory(fine.h[::2], fine.u[::2], fine.v[::2], fine.m[::2])
    report = compare(fine, coarse)
    # the profiles are linear in h
    assert report.max_abs_dev["mass"] == pytest.approx(0.0, abs=1e-12)


def test_compare_span_mismatch():
    t = _trajectory([0.0] * 4)
    other = _trajectory([0.0] * 4, h0=1.002)
    with pytest.raises(SpanMismatchError):
        compare(t, other)


def test_sweep_table():
    ref = _trajectory([-3.5, -1.0, 0.0, 0.0], label="ref")
    runs = [ref, Trajectory(ref.h, ref.u, ref.v, ref.m - 0.01, label="low")]
    table = sweep_table(runs, ref)
    assert list(table.columns) == ["run", "profile", "max_abs_dev", "rms_dev", "terminal_mass_diff"]
    assert len(table) == 6
    low = table[(table["run"] == "low") & (table["profile"] == "mass")]
    assert low["max_abs_dev"].iloc[0] == pytest.approx(0.01)


def test_speed_range_check():
    p = ModelParams()
    t = _trajectory([0.0, 0.0])
    check_speed_range(t, p)
    fast = Trajectory(t.h, t.u, t.v + 0.2, t.m)
    with pytest.raises(GridRangeError):
        check_speed_range(fast, p)


def test_pilot_max_speed():
    p = ModelParams()
    v_top = pilot_max_speed(p, get_stepper("E"), 5e-4)
    assert 0 < v_top
    assert pilot_max_speed(p, get_stepper("E"), 5e-4, v_start=0.1) >= 0.1
    # fuel runs out before the first segment is climbed
    assert pilot_max_speed(ModelParams(m_payload=0.99), get_stepper("E"), 1e-3) == 0.0
