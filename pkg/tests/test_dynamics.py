import math

import numpy as np
import pytest

from goddard_id.errors import DomainError, UsageError
from goddard_id.models import (ModelParams, drag, gravity, mass_rate, speed_rate, DimensionalConstants,
                               QUANTITY_KINDS, nondimensionalize, redimensionalize, dimensional_drag,
                               dimensional_gravity)


def test_drag_at_surface():
    p = ModelParams()
    assert p.drag_factor == pytest.approx(310.0)
    assert drag(1.0, 1.0, p) == pytest.approx(310.0)
    assert drag(0.1, 1.0, p) == pytest.approx(3.1)


def test_drag_decays_with_altitude():
    p = ModelParams()
    assert drag(0.1, 1.01, p) == pytest.approx(3.1 * math.exp(-5.0))
    hs = np.linspace(1.0, 1.01, 11)
    assert np.all(np.diff(drag(0.1, hs, p)) < 0)


def test_gravity():
    assert gravity(1.0) == 1.0
    assert gravity(2.0) == 0.25


def test_mass_rate():
    p = ModelParams()
    assert mass_rate(-3.5, 0.1, p) == pytest.approx(-70.0)
    assert mass_rate(0.0, 0.1, p) == 0.0


def test_speed_rate_coast():
    p = ModelParams()
    # -310 * 0.1 - 1 / 0.1
    assert speed_rate(1.0, 1.0, 0.0, 0.1, p) == pytest.approx(-41.0)


def test_speed_rate_thrust():
    p = ModelParams()
    assert speed_rate(1.0, 0.5, -1.0, 0.1, p) == pytest.approx(20.0 - 62.0 - 10.0)


def test_rates_at_launch_conditions():
    p = ModelParams()
    # 70 - 15.5 - 20
    assert speed_rate(1.0, 1.0, -3.5, 0.05, p) == pytest.approx(34.5)
    assert mass_rate(-3.5, 0.05, p) == pytest.approx(-140.0)
    # 3.1 / e
    assert drag(0.1, 1.002, p) == pytest.approx(1.14043, rel=1e-4)


@pytest.mark.parametrize("h", [0.999, 0.5])
def test_below_surface(h):
    p = ModelParams()
    with pytest.raises(DomainError):
        drag(0.1, h, p)
    with pytest.raises(DomainError):
        gravity(h)
    with pytest.raises(DomainError):
        speed_rate(h, 1.0, -1.0, 0.1, p)
    with pytest.raises(DomainError):
        drag(0.1, np.array([1.0, h]), p)


@pytest.mark.parametrize("v", [0.0, -0.1])
def test_singular_speed(v):
    p = ModelParams()
    with pytest.raises(DomainError):
        mass_rate(-1.0, v, p)
    with pytest.raises(DomainError):
        speed_rate(1.0, 1.0, -1.0, v, p)


def test_singular_mass():
    with pytest.raises(DomainError):
        speed_rate(1.0, 0.0, -1.0, 0.1, ModelParams())


def test_domain_error_is_value_error():
    with pytest.raises(ValueError):
        mass_rate(-1.0, 0.0, ModelParams())


@pytest.mark.parametrize("overrides", [
    {"m_payload": 1.2},
    {"u_min": 0.5},
    {"hT": 0.99},
    {"h0": 0.5, "hT": 0.6},
    {"v_eps": 0.3},
    {"c": 0.0},
])
def test_invalid_params(overrides):
    with pytest.raises(ValueError):
        ModelParams(**overrides)


def test_params_variants():
    p = ModelParams()
    q = p.replace(beta=400.0)
    assert q.beta == 400.0 and p.beta == 500.0
    r = ModelParams.from_mapping({"beta": None, "c_d": "0.04", "threads": 4})
    assert r.beta == 500.0
    assert r.c_d == 0.04


def test_units_round_trip():
    dc = DimensionalConstants()
    for kind in QUANTITY_KINDS:
        assert redimensionalize(nondimensionalize(123.4, kind, dc), kind, dc) == pytest.approx(123.4)
    x = np.array([1.0, 2.0])
    assert np.allclose(redimensionalize(nondimensionalize(x, "speed", dc), "speed", dc), x)


def test_units_scales():
    dc = DimensionalConstants(R=6371e3, g0=9.81)
    assert nondimensionalize(dc.R, "altitude", dc) == pytest.approx(1.0)
    assert nondimensionalize(9.81, "acceleration", dc) == pytest.approx(1.0)
    assert dc.scale("speed") == pytest.approx(math.sqrt(9.81 * 6371e3))
    with pytest.raises(UsageError):
        dc.scale("charge")


def test_dimensional_forces():
    R = 6371e3
    assert dimensional_gravity(R, 9.81, R) == pytest.approx(9.81)
    assert dimensional_gravity(2 * R, 9.81, R) == pytest.approx(9.81 / 4)
    assert dimensional_drag(100.0, R, 1.0, 0.5, 1.2, 500.0, R) == pytest.approx(0.5 * 0.5 * 1.2 * 1e4)
