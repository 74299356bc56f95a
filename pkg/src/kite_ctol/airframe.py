"""Aircraft, environment and aerodynamic polar models."""

import math
from typing import Any, List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from .errors import PolarRangeError

# (alpha_deg, cl, cd) against aircraft angle of attack. The 9 deg and 0 deg rows carry
# the published c_L max and L/D max; c_L(0) is calibrated so the loiter trim lands on
# 10.84 m/s. The -15 and 25 deg rows only keep transients inside the table.
DEFAULT_POLAR_ROWS: List[Tuple[float, float, float]] = [
    (-15.0, 0.55, 0.060),
    (-6.0, 1.20, 0.024),
    (0.0, 1.3416, 0.0175241976),
    (9.0, 1.4002, 0.0385532347),
    (14.0, 1.39, 0.070),
    (25.0, 1.00, 0.250),
]
DEFAULT_STALL_ANGLE_DEG = 9.0
DEFAULT_STEADY_ANGLE_DEG = 0.0


class AircraftConfig(BaseModel):
    """
    Physical parameters of the tethered aircraft.

    Attributes:
        mass (float): Aircraft mass m [kg].
        wing_area (float): Wing area A [m^2].
        wingspan (float): Wingspan b [m].
        incidence (float): Wing incidence [rad]. Metadata only, the polar is tabulated
            against aircraft angle of attack.
        thrust_min (float): Lower thrust bound [N].
        thrust_max (float): Upper thrust bound [N].
        pitch_rate_limit (float): Symmetric pitch-rate bound [rad/s].
        rolling_friction (float): Rolling friction coefficient on the ground. Default: 0.03
    """

    model_config = ConfigDict(frozen=True)

    mass: float = Field(gt=0)
    wing_area: float = Field(gt=0)
    wingspan: float = Field(gt=0)
    incidence: float = 0.0
    thrust_min: float = Field(default=0.0, ge=0)
    thrust_max: float = 1.5
    pitch_rate_limit: float = Field(gt=0)
    rolling_friction: float = Field(default=0.03, ge=0)

    @model_validator(mode="after")
    def _check_thrust_bounds(self) -> "AircraftConfig":
        if not self.thrust_min < self.thrust_max:
            raise ValueError(
                f"thrust_min ({self.thrust_min}) must be below thrust_max ({self.thrust_max})"
            )
        return self


class Environment(BaseModel):
    """
    Atmosphere and gravity.

    Attributes:
        air_density (float): Air density rho [kg/m^3]. Default: 1.225
        gravity (float): Gravitational acceleration g [m/s^2]. Default: 9.8
        wind_speed (float): Wind speed [m/s]. Only a still atmosphere is modelled. Default: 0
    """

    model_config = ConfigDict(frozen=True)

    air_density: float = Field(default=1.225, gt=0)
    gravity: float = Field(default=9.8, gt=0)
    wind_speed: float = 0.0

    @model_validator(mode="after")
    def _check_no_wind(self) -> "Environment":
        if self.wind_speed != 0.0:
            raise ValueError(
                "wind_speed must be 0: the tethered model only covers a no-wind situation"
            )
        return self


class PolarPoint(BaseModel):
    """One breakpoint of the polar (alpha in radians)."""

    model_config = ConfigDict(frozen=True)

    alpha: float
    cl: float
    cd: float


class AeroPolar(BaseModel):
    """
    Piecewise-linear lift and drag coefficients against aircraft angle of attack.

    Attributes:
        points (Tuple[PolarPoint, ...]): Breakpoints, strictly increasing in alpha.
        stall_angle (float): Angle of maximum c_L [rad].
        steady_angle (float): Angle of maximum c_L/c_D [rad].
    """

    model_config = ConfigDict(frozen=True)

    points: Tuple[PolarPoint, ...]
    stall_angle: float
    steady_angle: float

    _alpha: Any = PrivateAttr(default=None)
    _cl: Any = PrivateAttr(default=None)
    _cd: Any = PrivateAttr(default=None)

    @model_validator(mode="after")
    def _check_table(self) -> "AeroPolar":
        if len(self.points) < 2:
            raise ValueError("polar needs at least two breakpoints")
        alphas = [p.alpha for p in self.points]
        if any(b <= a for a, b in zip(alphas, alphas[1:])):
            raise ValueError("polar breakpoints must be strictly increasing in alpha")
        if any(p.cd <= 0 for p in self.points):
            raise ValueError("polar c_D must be positive at every breakpoint")
        # Both maxima of a piecewise-linear table (and of its L/D ratio) sit on breakpoints.
        cl_peak = max(self.points, key=lambda p: p.cl)
        if not math.isclose(cl_peak.alpha, self.stall_angle, abs_tol=1e-9):
            raise ValueError(
                f"c_L peaks at {math.degrees(cl_peak.alpha):.3f} deg, "
                f"not at the stall angle {math.degrees(self.stall_angle):.3f} deg"
            )
        ld_peak = max(self.points, key=lambda p: p.cl / p.cd)
        if not math.isclose(ld_peak.alpha, self.steady_angle, abs_tol=1e-9):
            raise ValueError(
                f"c_L/c_D peaks at {math.degrees(ld_peak.alpha):.3f} deg, "
                f"not at the steady angle {math.degrees(self.steady_angle):.3f} deg"
            )
        return self

    def model_post_init(self, __context: Any) -> None:
        self._alpha = np.array([p.alpha for p in self.points], dtype=float)
        self._cl = np.array([p.cl for p in self.points], dtype=float)
        self._cd = np.array([p.cd for p in self.points], dtype=float)

    @classmethod
    def from_degrees(
        cls,
        rows: Sequence[Sequence[float]],
        stall_angle_deg: float,
        steady_angle_deg: float,
    ) -> "AeroPolar":
        """Build a polar from ``(alpha_deg, cl, cd)`` rows."""
        return cls(
            points=tuple(
                PolarPoint(alpha=math.radians(a), cl=cl, cd=cd) for a, cl, cd in rows
            ),
            stall_angle=math.radians(stall_angle_deg),
            steady_angle=math.radians(steady_angle_deg),
        )

    @classmethod
    def default(cls) -> "AeroPolar":
        return cls.from_degrees(
            DEFAULT_POLAR_ROWS, DEFAULT_STALL_ANGLE_DEG, DEFAULT_STEADY_ANGLE_DEG
        )

    @property
    def alpha_range(self) -> Tuple[float, float]:
        return self.points[0].alpha, self.points[-1].alpha

    def interpolate(self, alpha: float) -> Tuple[float, float]:
        lower, upper = self.alpha_range
        if not lower <= alpha <= upper:
            raise PolarRangeError(alpha, lower, upper)
        if self._alpha is None:
            # built through model_construct
            self.model_post_init(None)
        cl = float(np.interp(alpha, self._alpha, self._cl))
        cd = float(np.interp(alpha, self._alpha, self._cd))
        return cl, cd


def coefficients(polar: AeroPolar, alpha: float) -> Tuple[float, float]:
    """Interpolate ``(c_L, c_D)`` at ``alpha`` [rad].

    Raises:
        PolarRangeError: If ``alpha`` lies outside the breakpoint table.
    """
    return polar.interpolate(alpha)


def dynamic_pressure_area(config: AircraftConfig, env: Environment, airspeed: float) -> float:
    """Return 1/2 rho A V^2 [N per unit coefficient]."""
    return 0.5 * env.air_density * config.wing_area * airspeed * airspeed


def aero_forces(
    config: AircraftConfig,
    env: Environment,
    polar: AeroPolar,
    airspeed: float,
    alpha: float,
) -> Tuple[float, float]:
    """Return ``(F_L, F_D)`` [N] at airspeed ``airspeed`` and angle of attack ``alpha``."""
    if airspeed < 0:
        raise ValueError(f"airspeed must be non-negative, got {airspeed!r}")
    cl, cd = coefficients(polar, alpha)
    qa = dynamic_pressure_area(config, env, airspeed)
    return qa * cl, qa * cd
