"""Controllers bound to each phase."""

from abc import ABC, abstractmethod
from typing import Dict, Literal, Mapping, Optional, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict

from ..airframe import AircraftConfig
from ..control import LqrLaw, PidController, PidGains, lqr_step, saturate
from ..dynamics import ControlInput, FlightModel, FlightState
from ..errors import ConfigError
from ..synthesis import LqrDesign, TrimSpec, design_lqr, solve_operating_point
from ._phases import PhaseId

LQR_PHASES = (PhaseId.P3, PhaseId.P4, PhaseId.P6)


class PidLoop(BaseModel):
    """
    One PID loop: gains and reference (radians for angle loops, m/s for speed loops).

    Attributes:
        kp (float): Proportional gain.
        ki (float): Integral gain.
        kd (float): Derivative gain.
        reference (float): Loop reference.
        anti_windup (bool): Conditional integration; off keeps integrating while the
            output is pinned. Default: True
    """

    model_config = ConfigDict(frozen=True)

    kp: float
    ki: float
    kd: float
    reference: float
    anti_windup: bool = True

    def controller(self, lower: float, upper: float) -> PidController:
        gains = PidGains(
            kp=self.kp,
            ki=self.ki,
            kd=self.kd,
            output_min=lower,
            output_max=upper,
            anti_windup=self.anti_windup,
        )
        return PidController(gains)


class TwoLoopGains(BaseModel):
    """Pitch (or flight-path) loop on the pitch rate plus airspeed loop on the thrust."""

    model_config = ConfigDict(frozen=True)

    attitude: PidLoop
    speed: PidLoop


class GlideGains(TwoLoopGains):
    """
    Altitude-holding deceleration loops.

    Attributes:
        theta_ceiling (float): Pitch ceiling applied after the flight-path loop [rad].
    """

    theta_ceiling: float


class FlareGains(BaseModel):
    model_config = ConfigDict(frozen=True)

    attitude: PidLoop


class ControllerGains(BaseModel):
    """
    PID gains of the PID-driven phases.

    Attributes:
        p1 (TwoLoopGains): Ground roll, pitch held at its reference.
        p2 (TwoLoopGains): Rotation.
        p5 (GlideGains): Deceleration; the attitude loop tracks the flight-path angle.
        p7 (FlareGains): Flare, thrust forced to zero.
    """

    model_config = ConfigDict(frozen=True)

    p1: TwoLoopGains
    p2: TwoLoopGains
    p5: GlideGains
    p7: FlareGains


class LqrSettings(BaseModel):
    """
    Operating point and weights of one LQR phase.

    Attributes:
        reference (Literal["table", "trim"]): ``table`` keeps ``x_ref`` as given and solves
            only the thrust; ``trim`` recomputes the airspeed for an exact trim.
        x_ref (Tuple[float, float, float, float]): ``(beta, airspeed, gamma, theta)``.
        q (Tuple[float, float, float, float]): Diagonal of Q.
        r (Tuple[float, float]): Diagonal of R.
    """

    model_config = ConfigDict(frozen=True)

    reference: Literal["table", "trim"] = "table"
    x_ref: Tuple[float, float, float, float]
    q: Tuple[float, float, float, float]
    r: Tuple[float, float]

    def trim_spec(self, phase: PhaseId) -> TrimSpec:
        beta, airspeed, gamma, theta = self.x_ref
        return TrimSpec(
            phase=phase.value,
            beta=beta,
            gamma=gamma,
            alpha=theta - gamma,
            airspeed=airspeed if self.reference == "table" else None,
            airspeed_guess=airspeed,
        )


def synthesize_designs(
    model: FlightModel, settings: Mapping[PhaseId, LqrSettings]
) -> Dict[PhaseId, LqrDesign]:
    """Solve the operating points and LQR gains of P3, P4 and P6; gains are then frozen."""
    designs: Dict[PhaseId, LqrDesign] = {}
    for phase in LQR_PHASES:
        if phase not in settings:
            raise ConfigError("missing LQR settings", key=f"controllers.{phase.value.lower()}")
        lqr = settings[phase]
        point = solve_operating_point(lqr.trim_spec(phase), model)
        designs[phase] = design_lqr(phase.value, point, model, np.diag(lqr.q), np.diag(lqr.r))
    return designs


class PhaseController(ABC):
    """Controller of one phase; its output is already saturated."""

    def __init__(self, aircraft: AircraftConfig, dt: float) -> None:
        self.aircraft = aircraft
        self.dt = dt

    def reset(self) -> None:
        """Forget integrator and derivative memory."""

    @abstractmethod
    def command(self, t: float, state: FlightState) -> ControlInput: ...

    def __call__(self, t: float, state: FlightState) -> ControlInput:
        return saturate(self.command(t, state), self.aircraft)


class OpenLoopController(PhaseController):
    def __init__(self, aircraft: AircraftConfig, dt: float, thrust: float = 0.0, pitch_rate: float = 0.0) -> None:
        super().__init__(aircraft, dt)
        self.control = ControlInput(thrust, pitch_rate)

    def command(self, t: float, state: FlightState) -> ControlInput:
        return self.control


class TwoPidController(PhaseController):
    """Pitch-rate loop on pitch (or flight path) and thrust loop on airspeed."""

    def __init__(
        self,
        aircraft: AircraftConfig,
        dt: float,
        gains: TwoLoopGains,
        track_flight_path: bool = False,
        theta_ceiling: Optional[float] = None,
    ) -> None:
        super().__init__(aircraft, dt)
        self.gains = gains
        self.track_flight_path = track_flight_path
        self.theta_ceiling = theta_ceiling
        limit = aircraft.pitch_rate_limit
        self.attitude = gains.attitude.controller(-limit, limit)
        self.speed = gains.speed.controller(aircraft.thrust_min, aircraft.thrust_max)

    def reset(self) -> None:
        self.attitude.reset()
        self.speed.reset()

    def command(self, t: float, state: FlightState) -> ControlInput:
        measured = state.gamma if self.track_flight_path else state.theta
        pitch_rate = self.attitude.step(self.gains.attitude.reference, measured, self.dt)
        if self.theta_ceiling is not None:
            # the ceiling is reached within one step and never crossed
            pitch_rate = min(pitch_rate, (self.theta_ceiling - state.theta) / self.dt)
        thrust = self.speed.step(self.gains.speed.reference, state.airspeed, self.dt)
        return ControlInput(thrust, pitch_rate)


class FlareController(PhaseController):
    def __init__(self, aircraft: AircraftConfig, dt: float, gains: FlareGains) -> None:
        super().__init__(aircraft, dt)
        self.gains = gains
        limit = aircraft.pitch_rate_limit
        self.attitude = gains.attitude.controller(-limit, limit)

    def reset(self) -> None:
        self.attitude.reset()

    def command(self, t: float, state: FlightState) -> ControlInput:
        pitch_rate = self.attitude.step(self.gains.attitude.reference, state.theta, self.dt)
        return ControlInput(0.0, pitch_rate)


class LqrController(PhaseController):
    def __init__(self, aircraft: AircraftConfig, dt: float, law: LqrLaw) -> None:
        super().__init__(aircraft, dt)
        self.law = law

    def command(self, t: float, state: FlightState) -> ControlInput:
        return lqr_step(self.law, state, self.aircraft)


class ClimbOutController(LqrController):
    """
    Full thrust at the reference angle of attack, then the LQR.

    The pitch follows ``gamma + alpha_ref`` (on the ground ``alpha_ref`` itself) until
    the aircraft is airborne at or above the reference elevation; from there on the
    LQR flies the phase.

    Attributes:
        engaged (bool): Whether the LQR has taken over.
    """

    def __init__(self, aircraft: AircraftConfig, dt: float, law: LqrLaw) -> None:
        super().__init__(aircraft, dt, law)
        beta_ref, _, gamma_ref, theta_ref = law.x_ref
        self.beta_ref = beta_ref
        self.alpha_ref = theta_ref - gamma_ref
        self.engaged = False

    def reset(self) -> None:
        self.engaged = False

    def command(self, t: float, state: FlightState) -> ControlInput:
        if not self.engaged and not state.grounded and state.beta >= self.beta_ref:
            self.engaged = True
            logger.debug("climb-out hands over to the LQR at t={:.3f} s", t)
        if self.engaged:
            return super().command(t, state)
        pitch_rate = (state.gamma + self.alpha_ref - state.theta) / self.dt
        return ControlInput(self.aircraft.thrust_max, pitch_rate)


def references_for_phase(
    phase: PhaseId,
    gains: ControllerGains,
    designs: Mapping[PhaseId, LqrDesign],
    aircraft: AircraftConfig,
    dt: float,
) -> PhaseController:
    """Bind the controller of ``phase`` with its gains and references.

    Raises:
        ConfigError: If an LQR phase has no synthesized design.
        NotImplementedError: For the pumping-cycle phases.
    """
    if phase in (PhaseId.REST, PhaseId.P8):
        return OpenLoopController(aircraft, dt)
    if phase is PhaseId.P1:
        return TwoPidController(aircraft, dt, gains.p1)
    if phase is PhaseId.P2:
        return TwoPidController(aircraft, dt, gains.p2)
    if phase is PhaseId.P5:
        return TwoPidController(
            aircraft, dt, gains.p5, track_flight_path=True, theta_ceiling=gains.p5.theta_ceiling
        )
    if phase is PhaseId.P7:
        return FlareController(aircraft, dt, gains.p7)
    if phase in LQR_PHASES:
        design = designs.get(phase)
        if design is None:
            raise ConfigError("no LQR design synthesized", key=f"controllers.{phase.value.lower()}")
        logger.debug("{} bound to LQR about x_ref={}", phase.value, design.point.x_ref)
        if phase is PhaseId.P3:
            return ClimbOutController(aircraft, dt, design.law())
        return LqrController(aircraft, dt, design.law())
    raise NotImplementedError(f"phase {phase.value} has no controller")
