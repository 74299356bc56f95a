from ._lqr import LqrLaw, lqr_command, lqr_step, reduced_state, wrap_angle
from ._pid import PidController, PidGains, pid_step
from ._saturation import clamp, saturate

__all__ = [
    "LqrLaw",
    "lqr_command",
    "lqr_step",
    "reduced_state",
    "wrap_angle",
    "PidController",
    "PidGains",
    "pid_step",
    "clamp",
    "saturate",
]
