import math

import pytest
from pydantic import ValidationError

from kite_ctol.airframe import (
    AeroPolar,
    AircraftConfig,
    Environment,
    aero_forces,
    coefficients,
)
from kite_ctol.errors import PolarRangeError


@pytest.fixture
def aircraft() -> AircraftConfig:
    return AircraftConfig(
        mass=0.35, wing_area=0.0576, wingspan=0.6, pitch_rate_limit=math.radians(20)
    )


def test_default_polar_anchors():
    """c_L peaks at the stall angle and c_L/c_D at the steady angle."""
    polar = AeroPolar.default()
    cl, _ = coefficients(polar, math.radians(9.0))
    assert cl == pytest.approx(1.4002)
    cl0, cd0 = coefficients(polar, 0.0)
    assert cl0 / cd0 == pytest.approx(76.557, abs=1e-3)
    assert polar.stall_angle == pytest.approx(math.radians(9.0))
    assert polar.steady_angle == 0.0


def test_interpolation_midpoint_is_mean():
    """Halfway between breakpoints the coefficients are the arithmetic mean."""
    polar = AeroPolar.default()
    cl_a, cd_a = coefficients(polar, 0.0)
    cl_b, cd_b = coefficients(polar, math.radians(9.0))
    cl, cd = coefficients(polar, math.radians(4.5))
    assert cl == pytest.approx(0.5 * (cl_a + cl_b))
    assert cd == pytest.approx(0.5 * (cd_a + cd_b))


def test_out_of_range_is_an_error():
    polar = AeroPolar.default()
    with pytest.raises(PolarRangeError) as info:
        coefficients(polar, math.radians(40.0))
    assert info.value.alpha == pytest.approx(math.radians(40.0))


@pytest.mark.parametrize(
    "rows, stall, steady",
    [
        ([(0.0, 1.0, 0.02), (0.0, 1.2, 0.03)], 0.0, 0.0),  # not increasing
        ([(0.0, 1.0, 0.02), (5.0, 1.2, 0.0)], 5.0, 0.0),  # zero drag
        ([(0.0, 1.0, 0.02), (5.0, 1.2, 0.03)], 0.0, 0.0),  # c_L peak elsewhere
        ([(0.0, 1.0, 0.02), (5.0, 1.2, 0.03)], 5.0, 5.0),  # L/D peak elsewhere
    ],
)
def test_polar_invariants_checked_at_load(rows, stall, steady):
    with pytest.raises(ValidationError):
        AeroPolar.from_degrees(rows, stall, steady)


def test_aero_forces(aircraft: AircraftConfig):
    env = Environment()
    polar = AeroPolar.default()
    alpha = math.radians(9.0)
    assert aero_forces(aircraft, env, polar, 0.0, alpha) == (0.0, 0.0)
    lift, drag = aero_forces(aircraft, env, polar, 7.98, alpha)
    assert lift == pytest.approx(3.146, abs=1e-3)
    lift2, drag2 = aero_forces(aircraft, env, polar, 2 * 7.98, alpha)
    assert lift2 == pytest.approx(4 * lift, rel=1e-14)
    assert drag2 == pytest.approx(4 * drag, rel=1e-14)
    with pytest.raises(ValueError):
        aero_forces(aircraft, env, polar, -1.0, alpha)


def test_aircraft_thrust_bounds():
    with pytest.raises(ValidationError):
        AircraftConfig(
            mass=0.35,
            wing_area=0.0576,
            wingspan=0.6,
            thrust_min=1.5,
            thrust_max=1.0,
            pitch_rate_limit=0.3,
        )


def test_environment_rejects_wind():
    with pytest.raises(ValidationError, match="no-wind"):
        Environment(wind_speed=3.0)
