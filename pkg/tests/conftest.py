from pathlib import Path

import pytest

from goddard_id.models import ModelParams
from goddard_id.solver import SegmentPlan, default_grids, get_stepper, build_transitions

test_dir = Path(__file__).parent


@pytest.fixture
def params():
    """Bounded-thrust constants with a speed floor high enough for coarse grids"""
    return ModelParams(v_eps=0.05)


def make_model(nv=5, nm=5, nu=3, n_segments=2, dh=5e-4, method="E", v_eps=0.05, **overrides):
    """Small transition model on [1, 1 + n_segments * dh]"""
    p = ModelParams(v_eps=v_eps, hT=1.0 + n_segments * dh, **overrides)
    plan = SegmentPlan(p.h0, p.hT, n_segments)
    grids = default_grids(p, nv, nm, nu)
    stepper = get_stepper(method)
    tm = build_transitions(plan, grids, stepper, p)
    return p, plan, grids, stepper, tm


@pytest.fixture
def toy_model():
    return make_model()


@pytest.fixture
def model_factory():
    return make_model
