from ..airframe import AircraftConfig
from ..dynamics import ControlInput


def clamp(value: float, lower: float, upper: float) -> float:
    return min(max(value, lower), upper)


def saturate(u: ControlInput, config: AircraftConfig) -> ControlInput:
    """Clamp thrust and pitch rate to the actuator bounds; idempotent."""
    return ControlInput(
        thrust=clamp(u.thrust, config.thrust_min, config.thrust_max),
        pitch_rate=clamp(u.pitch_rate, -config.pitch_rate_limit, config.pitch_rate_limit),
    )
