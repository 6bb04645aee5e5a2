import math

import numpy as np
import pytest

from goddard_id.errors import InfeasibleStepError, InfeasibleProblemError, UsageError
from goddard_id.models import ModelParams
from goddard_id.solver import lift_off, solve_launch, solve


def test_lift_off_constant_mass_without_drag():
    # v^2 = 2 (T - 1) dh when mass and gravity barely change
    p = ModelParams(c=1e6, c_d=1e-12)
    res = lift_off(-3.5, 1e-3, p)
    assert res.v_next == pytest.approx(math.sqrt(2 * 2.5 * 1e-3), rel=1e-3)
    assert res.m_next == pytest.approx(1.0, abs=1e-5)
    assert res.stages_used == 0


def test_lift_off_burns_fuel():
    p = ModelParams()
    res = lift_off(-3.5, 1e-3, p)
    assert p.m_payload < res.m_next < p.m0
    assert p.v_eps <= res.v_next


def test_more_thrust_lifts_off_faster():
    p = ModelParams()
    speeds = [lift_off(u, 1e-3, p).v_next for u in (-1.5, -2.5, -3.5)]
    assert np.all(np.diff(speeds) > 0)


@pytest.mark.parametrize("u", [0.0, -0.5, -1.0])
def test_lift_off_needs_thrust_above_weight(u):
    with pytest.raises(InfeasibleStepError):
        lift_off(u, 1e-3, ModelParams())


def test_lift_off_burnout():
    with pytest.raises(InfeasibleStepError) as e:
        lift_off(-3.5, 1e-3, ModelParams(m_payload=0.99))
    assert "burns out" in str(e.value)


def test_lift_off_below_speed_floor():
    with pytest.raises(InfeasibleStepError):
        lift_off(-3.5, 1e-3, ModelParams(v_eps=0.1))


def test_lift_off_invalid_length():
    with pytest.raises(UsageError):
        lift_off(-3.5, 0.0, ModelParams())


def test_solve_launch_values_the_landing_state(model_factory):
    p, plan, grids, stepper, tm = model_factory(n_segments=2, dh=1e-3)
    vt, pol = solve(tm)
    decision = solve_launch(vt, grids, plan, p)
    assert decision.control == grids.control.points[decision.control_idx]
    assert decision.value == vt.interpolate(grids, 1, decision.state.v, decision.state.m)
    res = lift_off(decision.control, plan.dh, p)
    assert (decision.state.m, decision.state.v) == (res.m_next, res.v_next)


def test_solve_launch_infeasible(model_factory):
    p, plan, grids, stepper, tm = model_factory(n_segments=2, dh=1e-3)
    vt, pol = solve(tm)
    with pytest.raises(InfeasibleProblemError):
        solve_launch(vt, grids, plan, p.replace(m_payload=0.99))
