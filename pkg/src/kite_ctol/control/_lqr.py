import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import numpy.typing as npt

from ..airframe import AircraftConfig
from ..dynamics import ControlInput, FlightState
from ._saturation import saturate

StateVector = Tuple[float, float, float, float]
ControlVector = Tuple[float, float]

# beta, gamma and theta are angles; airspeed is not
_ANGLE_MASK = (True, False, True, True)


def wrap_angle(delta: float) -> float:
    """Map an angle difference onto (-pi, pi]."""
    wrapped = math.remainder(delta, 2.0 * math.pi)
    return math.pi if wrapped == -math.pi else wrapped


def reduced_state(state: FlightState) -> StateVector:
    """The azimuth-free state ``(beta, airspeed, gamma, theta)``."""
    return (state.beta, state.airspeed, state.gamma, state.theta)


@dataclass(frozen=True)
class LqrLaw:
    """
    State feedback ``u = u_ref - K (x - x_ref)`` about an operating point.

    Attributes:
        x_ref (StateVector): Reference ``(beta, airspeed, gamma, theta)``.
        u_ref (ControlVector): Reference ``(thrust, pitch_rate)``.
        gain (npt.NDArray[np.float64]): Feedback gain K, shape (2, 4).
    """

    x_ref: StateVector
    u_ref: ControlVector
    gain: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        gain = np.asarray(self.gain, dtype=float)
        if gain.shape != (2, 4):
            raise ValueError(f"LQR gain must be 2x4, got {gain.shape}")
        if not np.all(np.isfinite(gain)):
            raise ValueError("LQR gain has non-finite entries")
        object.__setattr__(self, "gain", gain)

    def error(self, state: FlightState) -> StateVector:
        x = reduced_state(state)
        deltas = [
            wrap_angle(a - b) if angle else a - b
            for a, b, angle in zip(x, self.x_ref, _ANGLE_MASK)
        ]
        return (deltas[0], deltas[1], deltas[2], deltas[3])


def lqr_command(law: LqrLaw, state: FlightState) -> ControlInput:
    """Unsaturated feedback command; affine in the state."""
    correction = law.gain @ np.asarray(law.error(state))
    return ControlInput(
        thrust=law.u_ref[0] - float(correction[0]),
        pitch_rate=law.u_ref[1] - float(correction[1]),
    )


def lqr_step(law: LqrLaw, state: FlightState, config: AircraftConfig) -> ControlInput:
    return saturate(lqr_command(law, state), config)
