"""Supervisory phases and their transition predicates."""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..dynamics import FlightState, TetherConfig, height_to_beta


class PhaseId(str, Enum):
    REST = "Rest"
    P1 = "P1"
    P2 = "P2"
    P3 = "P3"
    P4 = "P4"
    P5 = "P5"
    P6 = "P6"
    P7 = "P7"
    P8 = "P8"
    # Pumping-cycle states; present so the machine documents its boundary.
    ASCEND = "Ascend"
    TETHERED_FLIGHT = "TetheredFlight"
    DESCEND = "Descend"


LOITER = PhaseId.P4
# the P5 pitch ceiling is met by one exact step, up to rounding
CEILING_TOLERANCE = 1e-9
STUB_PHASES = (PhaseId.ASCEND, PhaseId.TETHERED_FLIGHT, PhaseId.DESCEND)
SCENARIO_ORDER = (
    PhaseId.REST,
    PhaseId.P1,
    PhaseId.P2,
    PhaseId.P3,
    PhaseId.P4,
    PhaseId.P5,
    PhaseId.P6,
    PhaseId.P7,
    PhaseId.P8,
    PhaseId.REST,
)
SUCCESSORS: Dict[PhaseId, PhaseId] = {
    a: b for a, b in zip(SCENARIO_ORDER[:-1], SCENARIO_ORDER[1:]) if a is not PhaseId.REST
}
SUCCESSORS[PhaseId.REST] = PhaseId.P1

# Intervals [s] of the reference take-off/landing run (landing command at 20 s).
BASELINE_INTERVALS: Dict[PhaseId, Tuple[float, float]] = {
    PhaseId.P1: (0.0, 2.14),
    PhaseId.P2: (2.14, 2.53),
    PhaseId.P3: (2.53, 3.34),
    PhaseId.P4: (3.34, 20.0),
    PhaseId.P5: (20.0, 31.43),
    PhaseId.P6: (31.43, 35.11),
    PhaseId.P7: (35.11, 35.86),
}


class PhaseParameters(BaseModel):
    """
    Targets and thresholds of the phases, angles in radians.

    Attributes:
        v_rot (float): Rotation speed ending the ground roll [m/s]. Default: 7.98
        v_loiter (float): Loiter speed [m/s]. Default: 10.84
        v_glide (float): Speed that ends the deceleration [m/s]. Default: 8.29
        gamma_climb (float): Climb flight-path angle [rad]. Default: 3 deg
        gamma_glide (float): Glide flight-path angle [rad]. Default: -1 deg
        theta_rot (float): Pitch that ends the rotation [rad]. Default: 9 deg
        theta_flare (float): Flare pitch [rad]. Default: 12 deg
        h_0 (float): Loiter height [m]. Default: 0.3
        h_flare (float): Height that starts the flare [m]. Default: 0.063
        theta_ceiling (float): Pitch ceiling of the deceleration [rad]. Reaching it while
            descending means the altitude can no longer be held and starts the glide.
            Default: 9 deg
    """

    model_config = ConfigDict(frozen=True)

    v_rot: float = Field(default=7.98, gt=0)
    v_loiter: float = Field(default=10.84, gt=0)
    v_glide: float = Field(default=8.29, gt=0)
    gamma_climb: float = math.radians(3.0)
    gamma_glide: float = math.radians(-1.0)
    theta_rot: float = math.radians(9.0)
    theta_flare: float = math.radians(12.0)
    h_0: float = Field(default=0.3, gt=0)
    h_flare: float = Field(default=0.063, gt=0)
    theta_ceiling: float = math.radians(9.0)

    @model_validator(mode="after")
    def _check_heights(self) -> "PhaseParameters":
        if not self.h_flare < self.h_0:
            raise ValueError(f"h_flare ({self.h_flare}) must be below h_0 ({self.h_0})")
        return self

    def beta_0(self, tether: TetherConfig) -> float:
        return height_to_beta(self.h_0, tether)

    def beta_flare(self, tether: TetherConfig) -> float:
        return height_to_beta(self.h_flare, tether)


class ScenarioSpec(BaseModel):
    """
    Operator commands of one scenario.

    Attributes:
        takeoff_time (float, optional): Take-off command [s]; None means never issued.
            Default: 0
        landing_time (float): Landing command [s]. Default: 20
        stop_speed (float): Speed below which the final roll counts as stopped [m/s].
            Default: 0.05
    """

    model_config = ConfigDict(frozen=True)

    takeoff_time: Optional[float] = Field(default=0.0, ge=0)
    landing_time: float = Field(default=20.0, gt=0)
    stop_speed: float = Field(default=0.05, gt=0)

    @model_validator(mode="after")
    def _check_order(self) -> "ScenarioSpec":
        if self.takeoff_time is not None and not self.takeoff_time < self.landing_time:
            raise ValueError(
                f"takeoff_time ({self.takeoff_time}) must precede landing_time ({self.landing_time})"
            )
        return self


@dataclass(frozen=True)
class PhaseDescriptor:
    """Static description of a phase: targets, controller binding and exit condition."""

    id: PhaseId
    binding: str
    targets: str
    exit_condition: str
    successor: Optional[PhaseId]


PHASE_TABLE: Dict[PhaseId, PhaseDescriptor] = {
    d.id: d
    for d in (
        PhaseDescriptor(PhaseId.REST, "open loop (0, 0)", "V_a = 0", "take-off command", PhaseId.P1),
        PhaseDescriptor(PhaseId.P1, "two PIDs", "theta = 0, V_a -> V_rot", "V_a >= V_rot", PhaseId.P2),
        PhaseDescriptor(PhaseId.P2, "two PIDs", "V_a = V_rot, theta -> theta_rot", "theta >= theta_rot", PhaseId.P3),
        PhaseDescriptor(PhaseId.P3, "climb-out, then LQR", "gamma = gamma_climb, alpha = alpha_L", "h >= h_0", PhaseId.P4),
        PhaseDescriptor(PhaseId.P4, "LQR", "h = h_0, V_a = V_loiter, alpha = alpha_0", "landing command", PhaseId.P5),
        PhaseDescriptor(
            PhaseId.P5,
            "two PIDs",
            "gamma = 0, V_a -> V_glide",
            "V_a <= V_glide, or theta at its ceiling while descending",
            PhaseId.P6,
        ),
        PhaseDescriptor(PhaseId.P6, "LQR", "gamma = gamma_glide, alpha = alpha_L", "h <= h_flare", PhaseId.P7),
        PhaseDescriptor(PhaseId.P7, "one PID, F_p = 0", "theta = theta_flare", "touchdown", PhaseId.P8),
        PhaseDescriptor(PhaseId.P8, "open loop (0, 0)", "V_a -> 0", "V_a <= stop speed", PhaseId.REST),
        PhaseDescriptor(PhaseId.ASCEND, "not available", "-", "-", None),
        PhaseDescriptor(PhaseId.TETHERED_FLIGHT, "not available", "-", "-", None),
        PhaseDescriptor(PhaseId.DESCEND, "not available", "-", "-", None),
    )
}


def enter_phase(phase: PhaseId) -> PhaseDescriptor:
    """Return the descriptor of ``phase``; the pumping-cycle stubs refuse entry."""
    if phase in STUB_PHASES:
        raise NotImplementedError(f"phase {phase.value} is outside the take-off/landing sequence")
    return PHASE_TABLE[phase]


def next_phase(
    current: PhaseId,
    t: float,
    state: FlightState,
    spec: ScenarioSpec,
    params: PhaseParameters,
    tether: TetherConfig,
    tolerance: float = 0.0,
) -> PhaseId:
    """Return the successor of ``current`` when its exit condition holds, else ``current``.

    Time-triggered exits fire within ``tolerance / 2`` of the commanded time.
    """
    height = tether.length * math.sin(state.beta)
    slack = 0.5 * tolerance
    if current is PhaseId.REST:
        fire = spec.takeoff_time is not None and t >= spec.takeoff_time - slack
    elif current is PhaseId.P1:
        fire = state.airspeed >= params.v_rot
    elif current is PhaseId.P2:
        fire = state.theta >= params.theta_rot
    elif current is PhaseId.P3:
        fire = height >= params.h_0
    elif current is PhaseId.P4:
        fire = t >= spec.landing_time - slack
    elif current is PhaseId.P5:
        # a touchdown before the flare is not a landing: stay until timeout
        fire = not state.grounded and (
            state.airspeed <= params.v_glide
            or (state.theta >= params.theta_ceiling - CEILING_TOLERANCE and state.gamma < 0.0)
        )
    elif current is PhaseId.P6:
        fire = not state.grounded and height <= params.h_flare
    elif current is PhaseId.P7:
        fire = state.grounded
    elif current is PhaseId.P8:
        fire = state.airspeed <= spec.stop_speed
    else:
        fire = False
    if not fire:
        return current
    return SUCCESSORS[current]
