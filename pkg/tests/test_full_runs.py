import numpy as np
import pytest

from goddard_id.analysis import refinement_gap
from goddard_id.parser import parse_runspec
from goddard_id.pipeline import solve_run


@pytest.mark.slow
def test_bang_singular_coast():
    result = solve_run(parse_runspec("101.11.101.E.0.0005"), threads=4)
    t = result.trajectory
    kinds = [s.kind for s in result.subarcs]
    assert result.launch.control == result.params.u_min
    assert kinds[0] == "max-thrust"
    assert kinds[-1] == "coast"
    assert 0.6 <= t.terminal_mass <= 1.0
    assert np.all(t.v >= 0)
    assert t.constraint_violations(result.params) == []


@pytest.mark.slow
def test_refinement_does_not_lose_mass():
    coarse = solve_run(parse_runspec("51.11.51.E.0.0005"), threads=4)
    fine = solve_run(parse_runspec("101.11.101.E.0.0005"), threads=4)
    assert refinement_gap(coarse, fine) >= -1e-3
    for result in (coarse, fine):
        assert result.trajectory.constraint_violations(result.params) == []
