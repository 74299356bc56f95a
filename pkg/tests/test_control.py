import math
from typing import Dict

import numpy as np
import pytest

from kite_ctol.airframe import AircraftConfig
from kite_ctol.control import (
    LqrLaw,
    PidController,
    PidGains,
    lqr_command,
    lqr_step,
    pid_step,
    saturate,
    wrap_angle,
)
from kite_ctol.dynamics import ControlInput, FlightState
from kite_ctol.supervisor import PhaseId
from kite_ctol.synthesis import LqrDesign


@pytest.fixture
def aircraft() -> AircraftConfig:
    return AircraftConfig(
        mass=0.35, wing_area=0.0576, wingspan=0.6, pitch_rate_limit=math.radians(20)
    )


def test_saturate_bounds(aircraft: AircraftConfig):
    u = saturate(ControlInput(2.0, math.radians(-30)), aircraft)
    assert u.thrust == 1.5
    assert u.pitch_rate == pytest.approx(math.radians(-20))
    assert saturate(ControlInput(-0.5, 0.1), aircraft).thrust == 0.0


@pytest.mark.parametrize("thrust, rate", [(-1.0, -1.0), (0.7, 0.1), (1.5, 0.35), (9.0, 9.0)])
def test_saturate_idempotent(aircraft: AircraftConfig, thrust, rate):
    once = saturate(ControlInput(thrust, rate), aircraft)
    assert saturate(once, aircraft) == once


def test_pid_first_step_has_no_derivative_kick():
    pid = PidController(PidGains(kp=1.0, kd=5.0))
    assert pid_step(pid, 1.0, 0.0, 0.01) == 1.0
    # error unchanged: derivative still zero
    assert pid_step(pid, 1.0, 0.0, 0.01) == 1.0


def test_pid_is_linear_when_unbounded():
    gains = PidGains(kp=0.7, ki=0.08, kd=0.05)
    a, b = PidController(gains), PidController(gains)
    for error in (0.3, 0.1, -0.2):
        assert pid_step(b, 3 * error, 0.0, 0.01) == pytest.approx(3 * pid_step(a, error, 0.0, 0.01))


def test_pid_anti_windup():
    """A saturated loop does not integrate further and recovers on the first reversed error."""
    pid = PidController(PidGains(kp=0.0, ki=1.0, output_min=-1.0, output_max=1.0))
    for _ in range(100):
        assert pid.step(10.0, 0.0, 0.1) <= 1.0
    assert pid.integral == pytest.approx(1.0)
    assert pid.step(-1.0, 0.0, 0.1) < 1.0


def test_pid_integrates_through_saturation_without_anti_windup():
    gains = PidGains(kp=0.0, ki=1.0, output_min=-1.0, output_max=1.0, anti_windup=False)
    pid = PidController(gains)
    for _ in range(100):
        assert pid.step(10.0, 0.0, 0.1) == 1.0
    assert pid.integral == pytest.approx(100.0)
    # the wound-up integral keeps the output pinned after the error reverses
    assert pid.step(-1.0, 0.0, 0.1) == 1.0


def test_pid_reset():
    pid = PidController(PidGains(kp=1.0, ki=1.0, kd=1.0))
    pid.step(1.0, 0.0, 0.1)
    pid.reset()
    assert pid.integral == 0.0
    assert pid.previous_error is None


def test_pid_gain_bounds():
    with pytest.raises(ValueError):
        PidGains(kp=1.0, output_min=1.0, output_max=0.0)


def test_wrap_angle():
    assert wrap_angle(2 * math.pi + 0.1) == pytest.approx(0.1)
    assert wrap_angle(-math.pi) == pytest.approx(math.pi)


def test_lqr_reference_gives_reference_input(aircraft: AircraftConfig):
    law = LqrLaw(x_ref=(0.1, 10.0, 0.0, 0.0), u_ref=(0.2, 0.0), gain=np.ones((2, 4)))
    state = FlightState(0.0, 0.1, 10.0, 0.0, 0.0, False)
    assert lqr_command(law, state) == ControlInput(0.2, 0.0)


def test_lqr_step_saturates(aircraft: AircraftConfig):
    law = LqrLaw(x_ref=(0.1, 10.0, 0.0, 0.0), u_ref=(0.2, 0.0), gain=np.full((2, 4), 10.0))
    state = FlightState(0.0, 0.0, 8.0, 0.0, 0.0, True)
    raw = lqr_command(law, state)
    assert raw.thrust > 1.5
    u = lqr_step(law, state, aircraft)
    assert u.thrust == 1.5
    assert u.pitch_rate == pytest.approx(math.radians(20))


def test_lqr_gain_shape():
    with pytest.raises(ValueError):
        LqrLaw(x_ref=(0.0, 0.0, 0.0, 0.0), u_ref=(0.0, 0.0), gain=np.ones((4, 2)))


def _offset(law: LqrLaw, delta) -> FlightState:
    beta, airspeed, gamma, theta = (x + d for x, d in zip(law.x_ref, delta))
    return FlightState(0.0, beta, airspeed, gamma, theta, False)


def _vector(u: ControlInput) -> np.ndarray:
    return np.array([u.thrust, u.pitch_rate])


def test_lqr_command_is_affine(designs: Dict[PhaseId, LqrDesign]):
    law = designs[PhaseId.P4].law()
    delta = (math.radians(0.3), 0.2, math.radians(-0.4), math.radians(0.5))
    plus = _vector(lqr_command(law, _offset(law, delta)))
    minus = _vector(lqr_command(law, _offset(law, tuple(-d for d in delta))))
    centre = _vector(lqr_command(law, _offset(law, (0.0, 0.0, 0.0, 0.0))))
    np.testing.assert_allclose(plus + minus, 2.0 * centre, atol=1e-9)
    np.testing.assert_allclose(plus - centre, -law.gain @ np.array(delta), atol=1e-9)


@pytest.mark.parametrize("phase", [PhaseId.P3, PhaseId.P4, PhaseId.P6])
def test_lqr_command_restores_elevation_offset(designs: Dict[PhaseId, LqrDesign], phase: PhaseId):
    """Along the linear model the Riccati cost of a +0.5 deg elevation offset decreases."""
    design = designs[phase]
    law = design.law()
    x = np.array([math.radians(0.5), 0.0, 0.0, 0.0])
    du = _vector(lqr_command(law, _offset(law, tuple(x)))) - np.array(law.u_ref)
    x_dot = design.linear_model.A @ x + design.linear_model.B @ du
    assert 2.0 * x @ design.P @ x_dot < 0.0
