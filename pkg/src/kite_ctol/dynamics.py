"""Tethered longitudinal flight model.

State ``(phi, beta, airspeed, gamma, theta)`` with control ``(thrust, pitch_rate)``.
The aircraft flies on a sphere of radius ``r`` around the anchor; ``alpha = theta - gamma``
is always derived, never stored.
"""

import math
from dataclasses import dataclass, replace
from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field

from .airframe import AeroPolar, AircraftConfig, Environment
from .errors import GeometryError, SingularityError

V_MIN_AIRBORNE = 0.5
"""Below this airspeed [m/s] the flight-path equation is singular; the state must be grounded."""

Rates = Tuple[float, float, float, float, float]


class TetherConfig(BaseModel):
    """
    Rigid, taut tether of constant length.

    Attributes:
        length (float): Tether length r [m].
        attachment (str): Where the tether meets the aircraft.
    """

    model_config = ConfigDict(frozen=True)

    length: float = Field(gt=0)
    attachment: str = "wing tip, aligned with the centre of mass"


@dataclass(frozen=True)
class FlightState:
    """
    A point of the tethered state space.

    Attributes:
        phi (float): Azimuth [rad].
        beta (float): Elevation of the tether [rad].
        airspeed (float): Airspeed V_a [m/s].
        gamma (float): Flight-path angle [rad].
        theta (float): Pitch [rad].
        grounded (bool): True while rolling on the ground (beta = gamma = 0).

    Raises:
        GeometryError: If beta is outside [0, pi/2).
        ValueError: On a negative airspeed or a grounded state off the ground plane.
    """

    phi: float = 0.0
    beta: float = 0.0
    airspeed: float = 0.0
    gamma: float = 0.0
    theta: float = 0.0
    grounded: bool = True

    def __post_init__(self) -> None:
        if self.airspeed < 0:
            raise ValueError(f"airspeed must be non-negative, got {self.airspeed!r}")
        if not 0.0 <= self.beta < 0.5 * math.pi:
            raise GeometryError(f"elevation {self.beta!r} rad outside [0, pi/2)")
        if self.grounded and (self.beta != 0.0 or self.gamma != 0.0):
            raise ValueError("grounded states require beta = 0 and gamma = 0")

    @property
    def alpha(self) -> float:
        return self.theta - self.gamma

    def values(self) -> Rates:
        return (self.phi, self.beta, self.airspeed, self.gamma, self.theta)

    def with_values(self, **changes: float) -> "FlightState":
        return replace(self, **changes)


@dataclass(frozen=True)
class ControlInput:
    """Thrust F_p [N] and pitch rate omega_q [rad/s]."""

    thrust: float = 0.0
    pitch_rate: float = 0.0


@dataclass(frozen=True)
class StateDerivative:
    phi: float
    beta: float
    airspeed: float
    gamma: float
    theta: float

    def values(self) -> Rates:
        return (self.phi, self.beta, self.airspeed, self.gamma, self.theta)

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in self.values()):
            raise ValueError(f"non-finite state derivative {self.values()!r}")


@dataclass(frozen=True)
class FlightModel:
    """The parameter bundle every evaluation of the model needs.

    The ``*_rates`` methods work on plain floats so the integrator does not allocate a
    state object per stage; the module-level functions wrap them with the typed API.
    """

    aircraft: AircraftConfig
    env: Environment
    polar: AeroPolar
    tether: TetherConfig

    @property
    def weight(self) -> float:
        return self.aircraft.mass * self.env.gravity

    def forces(self, airspeed: float, alpha: float) -> Tuple[float, float]:
        cl, cd = self.polar.interpolate(alpha)
        qa = 0.5 * self.env.air_density * self.aircraft.wing_area * airspeed * airspeed
        return qa * cl, qa * cd

    def airborne_rates(
        self,
        beta: float,
        airspeed: float,
        gamma: float,
        theta: float,
        thrust: float,
        pitch_rate: float,
    ) -> Rates:
        if airspeed < V_MIN_AIRBORNE:
            raise SingularityError(
                f"airspeed {airspeed!r} m/s below the airborne minimum {V_MIN_AIRBORNE} m/s"
            )
        if abs(beta) >= 0.5 * math.pi:
            raise GeometryError(f"elevation {beta!r} rad outside the tether hemisphere")
        m = self.aircraft.mass
        g = self.env.gravity
        r = self.tether.length
        alpha = theta - gamma
        lift, drag = self.forces(airspeed, alpha)
        cos_beta = math.cos(beta)
        cos_gamma = math.cos(gamma)
        sin_gamma = math.sin(gamma)

        phi_dot = airspeed * cos_gamma / (r * cos_beta)
        beta_dot = airspeed * sin_gamma / r
        v_dot = (-drag + thrust * math.cos(alpha) - m * g * cos_beta * sin_gamma) / m
        gamma_dot = (
            lift
            + thrust * math.sin(alpha)
            - m * g * cos_beta * cos_gamma
            - (m * airspeed * airspeed / r) * math.tan(beta) * cos_gamma
        ) / (m * airspeed)
        return (phi_dot, beta_dot, v_dot, gamma_dot, pitch_rate)

    def normal_force(self, airspeed: float, theta: float, thrust: float) -> float:
        lift, _ = self.forces(airspeed, theta)
        return max(0.0, self.weight - lift - thrust * math.sin(theta))

    def ground_rates(
        self, airspeed: float, theta: float, thrust: float, pitch_rate: float
    ) -> Rates:
        m = self.aircraft.mass
        lift, drag = self.forces(airspeed, theta)
        normal = max(0.0, self.weight - lift - thrust * math.sin(theta))
        friction = self.aircraft.rolling_friction * normal
        push = thrust * math.cos(theta) - drag
        if airspeed > 0.0:
            v_dot = (push - friction) / m
        else:
            # static friction holds the aircraft until thrust exceeds it
            v_dot = max(0.0, push - friction) / m
        theta_dot = 0.0 if theta <= 0.0 and pitch_rate < 0.0 else pitch_rate
        return (airspeed / self.tether.length, 0.0, v_dot, 0.0, theta_dot)

    def liftoff_ready(self, airspeed: float, theta: float, thrust: float) -> bool:
        """Zero normal force with a non-negative airborne flight-path rate at beta = gamma = 0."""
        if airspeed < V_MIN_AIRBORNE:
            return False
        lift, _ = self.forces(airspeed, theta)
        return lift + thrust * math.sin(theta) >= self.weight

    def tension(self, beta: float, airspeed: float, gamma: float) -> float:
        return _radial_tension(
            self.aircraft.mass, self.env.gravity, self.tether.length, beta, airspeed, gamma
        )


def _radial_tension(
    m: float, g: float, r: float, beta: float, airspeed: float, gamma: float
) -> float:
    cos_beta = math.cos(beta)
    beta_dot = airspeed * math.sin(gamma) / r
    phi_dot = airspeed * math.cos(gamma) / (r * cos_beta)
    return m * r * (beta_dot**2 + (phi_dot * cos_beta) ** 2) - m * g * math.sin(beta)


def rhs_airborne(
    state: FlightState,
    control: ControlInput,
    config: AircraftConfig,
    env: Environment,
    polar: AeroPolar,
    tether: TetherConfig,
) -> StateDerivative:
    """Evaluate the airborne state derivative.

    Raises:
        SingularityError: If the airspeed is below ``V_MIN_AIRBORNE``.
        GeometryError: If ``|beta| >= pi/2``.
        PolarRangeError: If ``theta - gamma`` is outside the polar.
    """
    if state.grounded:
        raise ValueError("rhs_airborne called on a grounded state")
    model = FlightModel(config, env, polar, tether)
    return StateDerivative(
        *model.airborne_rates(
            state.beta,
            state.airspeed,
            state.gamma,
            state.theta,
            control.thrust,
            control.pitch_rate,
        )
    )


def rhs_ground_roll(
    state: FlightState,
    control: ControlInput,
    config: AircraftConfig,
    env: Environment,
    polar: AeroPolar,
    tether: TetherConfig,
) -> StateDerivative:
    """Evaluate the ground-roll derivative; beta and gamma stay at zero."""
    if not state.grounded:
        raise ValueError("rhs_ground_roll called on an airborne state")
    model = FlightModel(config, env, polar, tether)
    return StateDerivative(
        *model.ground_rates(state.airspeed, state.theta, control.thrust, control.pitch_rate)
    )


def liftoff_ready(
    state: FlightState,
    control: ControlInput,
    config: AircraftConfig,
    env: Environment,
    polar: AeroPolar,
    tether: TetherConfig,
) -> bool:
    return FlightModel(config, env, polar, tether).liftoff_ready(
        state.airspeed, state.theta, control.thrust
    )


def tether_tension(
    state: FlightState,
    config: AircraftConfig,
    env: Environment,
    tether: TetherConfig,
) -> float:
    """Tether pull F_t [N] from the radial force balance; negative means slack.

    Grounded states (beta = gamma = 0) give the centripetal pull ``m V_a^2 / r``.
    """
    return _radial_tension(
        config.mass, env.gravity, tether.length, state.beta, state.airspeed, state.gamma
    )


def height_from_beta(beta: float, tether: TetherConfig) -> float:
    """Height above the anchor plane, ``h = r sin(beta)``."""
    if not 0.0 <= beta <= 0.5 * math.pi:
        raise GeometryError(f"elevation {beta!r} rad outside [0, pi/2]")
    return tether.length * math.sin(beta)


def height_to_beta(height: float, tether: TetherConfig) -> float:
    if height > tether.length:
        raise GeometryError(f"height {height!r} m exceeds tether length {tether.length!r} m")
    if height < 0:
        raise GeometryError(f"height {height!r} m below the ground plane")
    return math.asin(height / tether.length)
