import pytest

from goddard_id.analysis import refinement_gap
from goddard_id.errors import UsageError
from goddard_id.models import ModelParams
from goddard_id.parser import parse_runspec
from goddard_id.pipeline import solve_run, run_summary

PARAMS = ModelParams(hT=1.002, v_eps=0.05)


@pytest.fixture(scope="module")
def coarse():
    return solve_run(parse_runspec("5.3.5.E.0.001"), PARAMS)


@pytest.fixture(scope="module")
def fine():
    return solve_run(parse_runspec("9.3.9.E.0.001"), PARAMS)


def test_solve_run_lifts_off(coarse):
    t = coarse.trajectory
    assert coarse.launch.control == PARAMS.u_min
    assert coarse.launch_state == coarse.launch.state
    assert (t.h[0], t.v[0], t.m[0]) == (PARAMS.h0, 0.0, PARAMS.m0)
    assert t.constraint_violations(PARAMS) == []
    assert coarse.subarcs[0].kind == "max-thrust"
    assert coarse.subarcs[-1].kind == "coast"


def test_expected_profile_starts_at_rest(coarse):
    assert len(coarse.expected_m) == coarse.plan.n_segments + 1
    assert (coarse.expected_v[0], coarse.expected_m[0]) == (0.0, PARAMS.m0)
    assert coarse.expected_m[-1] == pytest.approx(coarse.expected_terminal_mass, abs=1e-12)


def test_run_summary(coarse):
    summary = run_summary(coarse)
    assert summary["launch_speed"] == 0.0
    assert summary["lift_off_control"] == PARAMS.u_min
    assert summary["lift_off_speed"] == coarse.launch.state.v
    assert summary["expected_terminal_mass"] == coarse.launch.value


def test_in_flight_start():
    result = solve_run(parse_runspec("5.3.5.E.0.001"), PARAMS, v_start=0.2)
    assert result.launch is None
    assert result.trajectory.v[0] == 0.2
    assert result.expected_terminal_mass == result.values.value(0, *result.start_cell)
    assert "lift_off_control" not in run_summary(result)


def test_refinement_gap(coarse, fine):
    assert refinement_gap(coarse, fine) == fine.expected_terminal_mass - coarse.expected_terminal_mass


def test_refinement_gap_needs_common_launch(coarse):
    in_flight = solve_run(parse_runspec("9.3.9.E.0.001"), PARAMS, v_start=0.2)
    with pytest.raises(UsageError):
        refinement_gap(coarse, in_flight)
    other = solve_run(parse_runspec("9.3.9.E.0.001"), PARAMS.replace(v_max=0.25))
    with pytest.raises(UsageError):
        refinement_gap(coarse, other)
