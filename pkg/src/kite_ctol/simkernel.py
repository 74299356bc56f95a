"""Fixed-step RK4 integration, event stepping and telemetry recording."""

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, List, Optional, Protocol, Sequence, Tuple

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .dynamics import ControlInput, FlightModel, FlightState
from .errors import DynamicsError, IntegrationError

Vector = Tuple[float, ...]
VectorField = Callable[[Vector], Sequence[float]]
Predicate = Callable[[float, FlightState], bool]


class SimSettings(BaseModel):
    """
    Integration settings.

    Attributes:
        dt (float): Fixed step [s]. Default: 0.001
        max_time (float): Absolute simulated time limit [s]. Default: 120
        event_tolerance (float, optional): Window for time-triggered events [s], at most
            ``dt``. Default: ``dt``
    """

    model_config = ConfigDict(frozen=True)

    dt: float = Field(default=1e-3, gt=0)
    max_time: float = Field(default=120.0, gt=0)
    event_tolerance: Optional[float] = Field(default=None, ge=0)

    @model_validator(mode="after")
    def _check_tolerance(self) -> "SimSettings":
        if self.event_tolerance is not None and self.event_tolerance > self.dt:
            raise ValueError(
                f"event_tolerance ({self.event_tolerance}) must not exceed dt ({self.dt})"
            )
        return self

    @property
    def tolerance(self) -> float:
        return self.dt if self.event_tolerance is None else self.event_tolerance

    def time_at(self, step: int) -> float:
        # k * dt, never accumulated
        return step * self.dt


class ExitReason(str, Enum):
    PREDICATE = "predicate"
    TIMEOUT = "timeout"
    DYNAMICS_ERROR = "dynamics_error"


@dataclass(frozen=True)
class TelemetryRecord:
    """
    One sample per integration step, taken at the start of the step.

    Angles are in radians and rates in rad/s; conversion to degrees happens when the
    record is written out.
    """

    t: float
    phase: str
    phi: float
    beta: float
    height: float
    airspeed: float
    gamma: float
    theta: float
    alpha: float
    thrust: float
    pitch_rate: float
    lift: float
    drag: float
    tension: float
    grounded: bool

    @property
    def slack(self) -> bool:
        return not self.grounded and self.tension < 0.0


@dataclass(frozen=True)
class RegimeEvent:
    """A touchdown or lift-off applied at a step boundary."""

    kind: str
    t: float
    airspeed: float
    sink_rate: float
    theta: float


@dataclass
class RunResult:
    state: FlightState
    telemetry: List[TelemetryRecord]
    exit_reason: ExitReason
    steps: int
    end_step: int
    events: List[RegimeEvent] = field(default_factory=list)
    error: Optional[DynamicsError] = None


class Controller(Protocol):
    def __call__(self, t: float, state: FlightState) -> ControlInput: ...


def _stage(f: VectorField, y: Vector, stage: int) -> Vector:
    try:
        return tuple(f(y))
    except IntegrationError:
        raise
    except DynamicsError as exc:
        raise IntegrationError(stage, y, exc) from exc


def rk4(f: VectorField, y: Sequence[float], dt: float) -> Vector:
    """One classical fourth-order Runge-Kutta step of ``y' = f(y)``.

    Raises:
        IntegrationError: If ``f`` raises a ``DynamicsError``; names the failing stage.
    """
    y0 = tuple(y)
    half = 0.5 * dt
    k1 = _stage(f, y0, 1)
    k2 = _stage(f, tuple(a + half * b for a, b in zip(y0, k1)), 2)
    k3 = _stage(f, tuple(a + half * b for a, b in zip(y0, k2)), 3)
    k4 = _stage(f, tuple(a + dt * b for a, b in zip(y0, k3)), 4)
    sixth = dt / 6.0
    return tuple(
        a + sixth * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
        for a, b1, b2, b3, b4 in zip(y0, k1, k2, k3, k4)
    )


def rk4_step(
    state: FlightState, control: ControlInput, dt: float, model: FlightModel
) -> FlightState:
    """Advance ``state`` by ``dt`` with ``control`` held; the regime does not change."""
    thrust = control.thrust
    pitch_rate = control.pitch_rate
    if state.grounded:

        def ground(y: Vector) -> Sequence[float]:
            return model.ground_rates(y[2], y[4], thrust, pitch_rate)

        phi, _, airspeed, _, theta = rk4(ground, state.values(), dt)
        return FlightState(phi, 0.0, max(airspeed, 0.0), 0.0, max(theta, 0.0), True)

    def airborne(y: Vector) -> Sequence[float]:
        return model.airborne_rates(y[1], y[2], y[3], y[4], thrust, pitch_rate)

    phi, beta, airspeed, gamma, theta = rk4(airborne, state.values(), dt)
    # the ground plane stops the elevation; settle_regime turns beta = 0 into a touchdown
    return FlightState(phi, max(beta, 0.0), airspeed, gamma, theta, False)


def settle_regime(
    state: FlightState, control: ControlInput, model: FlightModel, t: float
) -> Tuple[FlightState, Optional[RegimeEvent]]:
    """Apply touchdown or lift-off at a step boundary."""
    if state.grounded:
        if model.liftoff_ready(state.airspeed, state.theta, control.thrust):
            event = RegimeEvent("liftoff", t, state.airspeed, 0.0, state.theta)
            return replace(state, grounded=False), event
        return state, None
    if state.beta > 0.0:
        return state, None
    sink_rate = state.airspeed * math.sin(state.gamma) * math.cos(state.beta)
    landed = FlightState(
        phi=state.phi,
        beta=0.0,
        airspeed=state.airspeed * math.cos(state.gamma),
        gamma=0.0,
        theta=max(state.theta, 0.0),
        grounded=True,
    )
    return landed, RegimeEvent("touchdown", t, landed.airspeed, sink_rate, state.theta)


def make_record(
    t: float, phase: str, state: FlightState, control: ControlInput, model: FlightModel
) -> TelemetryRecord:
    lift, drag = model.forces(state.airspeed, state.alpha)
    return TelemetryRecord(
        t=t,
        phase=phase,
        phi=state.phi,
        beta=state.beta,
        height=model.tether.length * math.sin(state.beta),
        airspeed=state.airspeed,
        gamma=state.gamma,
        theta=state.theta,
        alpha=state.alpha,
        thrust=control.thrust,
        pitch_rate=control.pitch_rate,
        lift=lift,
        drag=drag,
        tension=model.tension(state.beta, state.airspeed, state.gamma),
        grounded=state.grounded,
    )


def run_until(
    state: FlightState,
    controller: Controller,
    predicate: Predicate,
    settings: SimSettings,
    model: FlightModel,
    start_step: int = 0,
    phase: str = "",
) -> RunResult:
    """Step until ``predicate(t, state)`` holds or ``settings.max_time`` is reached.

    The predicate is checked at every step boundary before the step is taken, so a
    transition is reported at the first boundary where it holds.

    Args:
        state (FlightState): Initial state at ``t = start_step * dt``.
        controller (Controller): Called once per step; its output is held for the step.
        predicate (Predicate): Pure function of ``(t, state)``.
        settings (SimSettings): Step size and time limit.
        model (FlightModel): Parameters of the flight model.
        start_step (int, optional): Global step index of ``state``. Defaults to 0.
        phase (str, optional): Phase label written into the telemetry. Defaults to "".

    Returns:
        RunResult: Final state, telemetry, exit reason and regime events.
    """
    records: List[TelemetryRecord] = []
    events: List[RegimeEvent] = []
    step = start_step
    reason = ExitReason.TIMEOUT
    error: Optional[DynamicsError] = None
    while True:
        t = settings.time_at(step)
        if predicate(t, state):
            reason = ExitReason.PREDICATE
            break
        if t >= settings.max_time:
            reason = ExitReason.TIMEOUT
            break
        control = controller(t, state)
        try:
            records.append(make_record(t, phase, state, control, model))
            next_state = rk4_step(state, control, settings.dt, model)
            next_state, event = settle_regime(
                next_state, control, model, settings.time_at(step + 1)
            )
        except DynamicsError as exc:
            logger.warning("{} stopped at t={:.3f} s: {}", phase or "run", t, exc)
            reason = ExitReason.DYNAMICS_ERROR
            error = exc
            break
        if event is not None:
            logger.debug("{} at t={:.3f} s (V_a={:.3f} m/s)", event.kind, event.t, event.airspeed)
            events.append(event)
        state = next_state
        step += 1
    return RunResult(
        state=state,
        telemetry=records,
        exit_reason=reason,
        steps=step - start_step,
        end_step=step,
        events=events,
        error=error,
    )
