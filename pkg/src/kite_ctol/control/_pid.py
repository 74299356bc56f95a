import math
from typing import Optional

from pydantic import BaseModel, ConfigDict, model_validator

from ._saturation import clamp


class PidGains(BaseModel):
    """
    Gains and output bounds of one parallel-form PID loop.

    Attributes:
        kp (float): Proportional gain.
        ki (float): Integral gain.
        kd (float): Derivative gain, applied to the backward difference of the error.
        output_min (float): Lower output bound. Default: -inf
        output_max (float): Upper output bound. Default: inf
        anti_windup (bool): Freeze the integral while it would push a saturated output
            further out. Default: True
    """

    model_config = ConfigDict(frozen=True)

    kp: float
    ki: float = 0.0
    kd: float = 0.0
    output_min: float = -math.inf
    output_max: float = math.inf
    anti_windup: bool = True

    @model_validator(mode="after")
    def _check_bounds(self) -> "PidGains":
        if not self.output_min <= self.output_max:
            raise ValueError(
                f"output_min ({self.output_min}) must not exceed output_max ({self.output_max})"
            )
        return self

    def with_bounds(self, lower: float, upper: float) -> "PidGains":
        return self.model_copy(update={"output_min": lower, "output_max": upper})


class PidController:
    """
    Discrete PID with conditional-integration anti-windup.

    ``u = kp*e + ki*I + kd*(e - e_prev)/dt`` with ``I`` the running integral of the error.
    With ``anti_windup`` the integral only advances when the output is inside its
    bounds, or when the error pulls a saturated output back; without it the integral
    always advances and only the output is clamped. The derivative term is zero on the
    first step after a reset.

    Attributes:
        gains (PidGains): Loop gains and bounds.
        integral (float): Integral of the error [error unit * s].
        previous_error (float, optional): Error of the last step, None after a reset.
    """

    def __init__(self, gains: PidGains) -> None:
        self.gains = gains
        self.integral = 0.0
        self.previous_error: Optional[float] = None

    def reset(self) -> None:
        self.integral = 0.0
        self.previous_error = None

    def step(self, reference: float, measurement: float, dt: float) -> float:
        if dt <= 0:
            raise ValueError(f"dt must be positive, got {dt!r}")
        g = self.gains
        error = reference - measurement
        derivative = 0.0 if self.previous_error is None else (error - self.previous_error) / dt
        self.previous_error = error

        candidate = self.integral + error * dt
        raw = g.kp * error + g.ki * candidate + g.kd * derivative
        push = g.ki * error
        pushing_out = (raw > g.output_max and push > 0.0) or (raw < g.output_min and push < 0.0)
        if g.anti_windup and pushing_out:
            # frozen: integrating would only push further into saturation
            raw = g.kp * error + g.ki * self.integral + g.kd * derivative
        else:
            self.integral = candidate
        return clamp(raw, g.output_min, g.output_max)


def pid_step(pid: PidController, reference: float, measurement: float, dt: float) -> float:
    """Advance ``pid`` one step and return the clamped command."""
    return pid.step(reference, measurement, dt)
