"""Document schema of a run configuration.

Sections keep the units they are written in (degrees, deg/s); ``RunConfig.build_model``
converts them into the radian-based domain objects.
"""

import math
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Any, Dict, Iterator, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, ValidationError, model_validator

from ..airframe import (
    DEFAULT_POLAR_ROWS,
    DEFAULT_STALL_ANGLE_DEG,
    DEFAULT_STEADY_ANGLE_DEG,
    AeroPolar,
    AircraftConfig,
    Environment,
)
from ..dynamics import FlightModel, TetherConfig
from ..envelope import Balance, EnvelopeQuery
from ..errors import ConfigError, DynamicsError, SynthesisError
from ..simkernel import SimSettings
from ..supervisor import (
    ControllerGains,
    FlareGains,
    GlideGains,
    LqrSettings,
    PhaseId,
    PhaseParameters,
    PidLoop,
    ScenarioSpec,
    TwoLoopGains,
)
from ..synthesis import bryson_init

# Reduced-state entries written in degrees: beta, gamma, theta.
_ANGLE_ENTRIES = (0, 2, 3)


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class AircraftSection(_Section):
    """
    Airframe parameters.

    Attributes:
        mass (float): Mass [kg]. Default: 0.35
        wing_area (float): Wing area [m^2]. Default: 0.0576
        wingspan (float): Wingspan [m]. Default: 0.6
        incidence_deg (float): Wing incidence [deg]. Default: 6
        rolling_friction (float): Rolling friction coefficient. Default: 0.03
    """

    mass: float = 0.35
    wing_area: float = 0.0576
    wingspan: float = 0.6
    incidence_deg: float = 6.0
    rolling_friction: float = 0.03


class EnvSection(_Section):
    air_density: float = 1.225
    gravity: float = 9.8
    wind_speed: float = 0.0


class TetherSection(_Section):
    length: float = 2.4


class AeroSection(_Section):
    """
    Aerodynamic polar.

    Attributes:
        polar (List[Tuple[float, float, float]]): ``[alpha_deg, cl, cd]`` rows against
            aircraft angle of attack.
        stall_angle_deg (float): Angle of maximum c_L [deg]. Default: 9
        steady_angle_deg (float): Angle of maximum c_L/c_D [deg]. Default: 0
    """

    polar: List[Tuple[float, float, float]] = Field(
        default_factory=lambda: list(DEFAULT_POLAR_ROWS)
    )
    stall_angle_deg: float = DEFAULT_STALL_ANGLE_DEG
    steady_angle_deg: float = DEFAULT_STEADY_ANGLE_DEG


class PhasesSection(_Section):
    """Phase thresholds and targets; angles in degrees."""

    v_rot: float = 7.98
    v_loiter: float = 10.84
    v_glide: float = 8.29
    gamma_climb_deg: float = 3.0
    gamma_glide_deg: float = -1.0
    theta_rot_deg: float = 9.0
    theta_flare_deg: float = 12.0
    h_0: float = 0.3
    h_flare: float = 0.063


class _PidSection(_Section):
    kp: float
    ki: float
    kd: float
    anti_windup: bool = True


class AnglePidSection(_PidSection):
    reference_deg: float

    def loop(self) -> PidLoop:
        return PidLoop(
            kp=self.kp,
            ki=self.ki,
            kd=self.kd,
            reference=math.radians(self.reference_deg),
            anti_windup=self.anti_windup,
        )


class SpeedPidSection(_PidSection):
    reference: float

    def loop(self) -> PidLoop:
        return PidLoop(
            kp=self.kp, ki=self.ki, kd=self.kd, reference=self.reference, anti_windup=self.anti_windup
        )


class TwoLoopSection(_Section):
    pitch: AnglePidSection
    speed: SpeedPidSection

    def gains(self) -> TwoLoopGains:
        return TwoLoopGains(attitude=self.pitch.loop(), speed=self.speed.loop())


class GlideSection(_Section):
    """
    Deceleration loops.

    Attributes:
        flight_path (AnglePidSection): Flight-path loop driving the pitch rate.
        speed (SpeedPidSection): Airspeed loop driving the thrust.
        theta_ceiling_deg (float): Pitch ceiling [deg].
    """

    flight_path: AnglePidSection
    speed: SpeedPidSection
    theta_ceiling_deg: float

    def gains(self) -> GlideGains:
        return GlideGains(
            attitude=self.flight_path.loop(),
            speed=self.speed.loop(),
            theta_ceiling=math.radians(self.theta_ceiling_deg),
        )


class FlareSection(_Section):
    pitch: AnglePidSection

    def gains(self) -> FlareGains:
        return FlareGains(attitude=self.pitch.loop())


class OperatingPointSection(_Section):
    beta_deg: float
    va: float
    gamma_deg: float
    theta_deg: float

    def values(self) -> Tuple[float, float, float, float]:
        return (
            math.radians(self.beta_deg),
            self.va,
            math.radians(self.gamma_deg),
            math.radians(self.theta_deg),
        )


class BrysonSection(_Section):
    """
    Maximum acceptable deviations.

    Attributes:
        state_scales (Tuple[...]): ``beta_deg, va, gamma_deg, theta_deg``; ``ignore`` or 0
            drops the state from the cost.
        control_scales (Tuple[float, float]): Thrust [N] and pitch rate [deg/s].
    """

    state_scales: Tuple[
        Union[float, Literal["ignore"]],
        Union[float, Literal["ignore"]],
        Union[float, Literal["ignore"]],
        Union[float, Literal["ignore"]],
    ]
    control_scales: Tuple[float, float]


class LqrSection(_Section):
    """
    One LQR phase.

    Attributes:
        reference (Literal["table", "trim"]): How the operating point is obtained.
            Default: table
        x_ref (OperatingPointSection): Reference state.
        q (Tuple[float, float, float, float], optional): Diagonal of Q.
        r (Tuple[float, float], optional): Diagonal of R.
        bryson (BrysonSection, optional): Deviation scales instead of ``q`` and ``r``.
    """

    reference: Literal["table", "trim"] = "table"
    x_ref: OperatingPointSection
    q: Optional[Tuple[float, float, float, float]] = None
    r: Optional[Tuple[float, float]] = None
    bryson: Optional[BrysonSection] = None

    @model_validator(mode="after")
    def _check_weights(self) -> "LqrSection":
        explicit = self.q is not None and self.r is not None
        if explicit == (self.bryson is not None):
            raise ValueError("give either both q and r, or bryson")
        if (self.q is None) != (self.r is None):
            raise ValueError("q and r must be given together")
        return self

    def weights(self) -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
        if self.q is not None and self.r is not None:
            return self.q, self.r
        assert self.bryson is not None
        states: List[Optional[float]] = []
        for index, scale in enumerate(self.bryson.state_scales):
            if scale == "ignore":
                states.append(None)
            else:
                value = float(scale)
                states.append(math.radians(value) if index in _ANGLE_ENTRIES else value)
        thrust_scale, rate_scale = self.bryson.control_scales
        Q, R = bryson_init(states, [thrust_scale, math.radians(rate_scale)])
        return tuple(float(v) for v in Q.diagonal()), tuple(float(v) for v in R.diagonal())

    def settings(self) -> LqrSettings:
        q, r = self.weights()
        return LqrSettings(
            reference=self.reference,
            x_ref=self.x_ref.values(),
            q=(q[0], q[1], q[2], q[3]),
            r=(r[0], r[1]),
        )


class ControllersSection(_Section):
    p1: TwoLoopSection
    p2: TwoLoopSection
    p3: LqrSection
    p4: LqrSection
    p5: GlideSection
    p6: LqrSection
    p7: FlareSection


class LimitsSection(_Section):
    thrust_min: float = 0.0
    thrust_max: float = 1.5
    pitch_rate_limit_degs: float = 20.0


class SimSection(_Section):
    dt: float = 1e-3
    max_time: float = 120.0
    event_tolerance: Optional[float] = None


class ScenarioSection(_Section):
    takeoff_time: Optional[float] = 0.0
    landing_time: float = 20.0
    stop_speed: float = 0.05


class EnvelopeSection(_Section):
    radii: List[float] = Field(default_factory=lambda: [1.2, 2.4, 3.6, 4.8, 6.0, 7.2, 9.6])
    betas_deg: List[float] = Field(default_factory=lambda: [float(b) for b in range(0, 61)])
    alphas_deg: List[float] = Field(default_factory=lambda: [0.0, 9.0])
    balance: Balance = "full"


@dataclass(frozen=True)
class RunSetup:
    """Domain objects of a run, all angles in radians."""

    aircraft: AircraftConfig
    env: Environment
    polar: AeroPolar
    tether: TetherConfig
    params: PhaseParameters
    gains: ControllerGains
    lqr: Dict[PhaseId, LqrSettings]
    sim: SimSettings
    scenario: ScenarioSpec
    envelope: EnvelopeQuery
    balance: Balance

    @property
    def model(self) -> FlightModel:
        return FlightModel(self.aircraft, self.env, self.polar, self.tether)


class RunConfig(BaseModel):
    """
    A complete run configuration.

    Attributes:
        aircraft (AircraftSection): Airframe parameters.
        env (EnvSection): Atmosphere.
        tether (TetherSection): Tether length.
        aero (AeroSection): Polar table and its characteristic angles.
        phases (PhasesSection): Phase thresholds and targets.
        controllers (ControllersSection): Gains and LQR settings; required.
        limits (LimitsSection): Actuator bounds.
        sim (SimSection): Integration settings.
        scenario (ScenarioSection): Operator commands.
        envelope (EnvelopeSection): Envelope grid.
    """

    model_config = ConfigDict(extra="forbid")

    aircraft: AircraftSection = Field(default_factory=AircraftSection)
    env: EnvSection = Field(default_factory=EnvSection)
    tether: TetherSection = Field(default_factory=TetherSection)
    aero: AeroSection = Field(default_factory=AeroSection)
    phases: PhasesSection = Field(default_factory=PhasesSection)
    controllers: ControllersSection
    limits: LimitsSection = Field(default_factory=LimitsSection)
    sim: SimSection = Field(default_factory=SimSection)
    scenario: ScenarioSection = Field(default_factory=ScenarioSection)
    envelope: EnvelopeSection = Field(default_factory=EnvelopeSection)

    _notices: List[str] = PrivateAttr(default_factory=list)

    @property
    def notices(self) -> List[str]:
        """Dotted keys that were filled from the built-in defaults."""
        return self._notices

    def __eq__(self, other: Any) -> bool:
        # notices describe the source document, not the configuration
        if not isinstance(other, RunConfig):
            return NotImplemented
        return self.model_dump() == other.model_dump()

    def build_model(self) -> RunSetup:
        """Convert the document into domain objects.

        Raises:
            ConfigError: Naming the section whose invariants fail.
        """
        with _section("aircraft"):
            aircraft = AircraftConfig(
                mass=self.aircraft.mass,
                wing_area=self.aircraft.wing_area,
                wingspan=self.aircraft.wingspan,
                incidence=math.radians(self.aircraft.incidence_deg),
                thrust_min=self.limits.thrust_min,
                thrust_max=self.limits.thrust_max,
                pitch_rate_limit=math.radians(self.limits.pitch_rate_limit_degs),
                rolling_friction=self.aircraft.rolling_friction,
            )
        with _section("env"):
            env = Environment(**self.env.model_dump())
        with _section("tether"):
            tether = TetherConfig(length=self.tether.length)
        with _section("aero"):
            polar = AeroPolar.from_degrees(
                self.aero.polar, self.aero.stall_angle_deg, self.aero.steady_angle_deg
            )
        with _section("phases"):
            p = self.phases
            params = PhaseParameters(
                v_rot=p.v_rot,
                v_loiter=p.v_loiter,
                v_glide=p.v_glide,
                gamma_climb=math.radians(p.gamma_climb_deg),
                gamma_glide=math.radians(p.gamma_glide_deg),
                theta_rot=math.radians(p.theta_rot_deg),
                theta_flare=math.radians(p.theta_flare_deg),
                h_0=p.h_0,
                h_flare=p.h_flare,
                theta_ceiling=math.radians(self.controllers.p5.theta_ceiling_deg),
            )
            params.beta_0(tether)
            params.beta_flare(tether)
        c = self.controllers
        gains = ControllerGains(p1=c.p1.gains(), p2=c.p2.gains(), p5=c.p5.gains(), p7=c.p7.gains())
        lqr: Dict[PhaseId, LqrSettings] = {}
        for phase, section in ((PhaseId.P3, c.p3), (PhaseId.P4, c.p4), (PhaseId.P6, c.p6)):
            with _section(f"controllers.{phase.value.lower()}"):
                lqr[phase] = section.settings()
        with _section("sim"):
            sim = SimSettings(**self.sim.model_dump())
        with _section("scenario"):
            scenario = ScenarioSpec(**self.scenario.model_dump())
        with _section("envelope"):
            envelope = EnvelopeQuery.from_degrees(
                self.envelope.radii, self.envelope.betas_deg, self.envelope.alphas_deg
            )
        return RunSetup(
            aircraft=aircraft,
            env=env,
            polar=polar,
            tether=tether,
            params=params,
            gains=gains,
            lqr=lqr,
            sim=sim,
            scenario=scenario,
            envelope=envelope,
            balance=self.envelope.balance,
        )


@contextmanager
def _section(key: str) -> Iterator[None]:
    """Turn domain validation failures into a ``ConfigError`` naming ``key``."""
    try:
        yield
    except ValidationError as exc:
        first = exc.errors()[0]
        field = ".".join(str(part) for part in first["loc"])
        raise ConfigError(_clean(first["msg"]), key=f"{key}.{field}" if field else key) from exc
    except (ValueError, DynamicsError, SynthesisError) as exc:
        raise ConfigError(str(exc), key=key) from exc


def _clean(message: str) -> str:
    return message.removeprefix("Value error, ")
