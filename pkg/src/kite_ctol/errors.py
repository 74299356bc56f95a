"""Exception hierarchy and process exit codes."""

from enum import IntEnum
from typing import List, Optional, Sequence


class ExitCode(IntEnum):
    """Process exit codes of the ``kite-ctol`` command line."""

    OK = 0
    CONFIG_ERROR = 3
    SYNTHESIS_ERROR = 4
    SCENARIO_TIMEOUT = 5
    CHECK_FAILED = 6
    DYNAMICS_ERROR = 7


class KiteCtolError(Exception):
    """Base class for every error raised by kite_ctol."""

    exit_code: ExitCode = ExitCode.DYNAMICS_ERROR


class ConfigError(KiteCtolError):
    """Exception raised when a run configuration cannot be loaded.

    Attributes:
        key (str): Dotted path of the offending key, e.g. ``controllers.p2``.
        line (int, optional): 1-based line in the source document when known.
    """

    exit_code = ExitCode.CONFIG_ERROR

    def __init__(self, message: str, key: str = "", line: Optional[int] = None) -> None:
        self.message = message
        self.key = key
        self.line = line
        location = key or "<document>"
        if line is not None:
            location = f"{location} (line {line})"
        super().__init__(f"{location}: {message}")


class DynamicsError(KiteCtolError):
    """The flight model was evaluated outside its domain."""

    exit_code = ExitCode.DYNAMICS_ERROR


class PolarRangeError(DynamicsError):
    """Angle of attack outside the breakpoint table."""

    def __init__(self, alpha: float, lower: float, upper: float) -> None:
        self.alpha = alpha
        self.lower = lower
        self.upper = upper
        super().__init__(
            f"angle of attack {alpha!r} rad outside polar range [{lower!r}, {upper!r}]"
        )


class SingularityError(DynamicsError):
    """Airborne dynamics evaluated below the minimum airborne speed."""

    ...


class GeometryError(DynamicsError):
    """Elevation or height outside the tether sphere."""

    ...


class IntegrationError(DynamicsError):
    """A Runge-Kutta stage failed.

    Attributes:
        stage (int): 1-based stage index (1..4).
        values (Sequence[float]): The stage state (phi, beta, airspeed, gamma, theta).
    """

    def __init__(self, stage: int, values: Sequence[float], cause: DynamicsError) -> None:
        self.stage = stage
        self.values = tuple(values)
        self.cause = cause
        super().__init__(f"RK4 stage {stage} failed: {cause}")


class SynthesisError(KiteCtolError):
    """Control design failed.

    Attributes:
        phase (str): Phase whose design failed, empty for standalone solves.
        residuals (List[float]): Residual history of the failing solve.
    """

    exit_code = ExitCode.SYNTHESIS_ERROR

    def __init__(
        self, message: str, phase: str = "", residuals: Optional[List[float]] = None
    ) -> None:
        self.phase = phase
        self.residuals = list(residuals or [])
        prefix = f"{phase}: " if phase else ""
        super().__init__(prefix + message)


class LinearizationError(SynthesisError):
    """The right-hand side failed at a perturbed point of a finite difference."""

    def __init__(self, coordinate: str, value: float, cause: DynamicsError) -> None:
        self.coordinate = coordinate
        self.value = value
        self.cause = cause
        super().__init__(f"perturbed {coordinate}={value!r} failed: {cause}")


class TrimError(SynthesisError):
    """The operating-point iteration did not converge."""

    def __init__(self, message: str, last_residual: float) -> None:
        self.last_residual = last_residual
        super().__init__(f"{message} (last residual {last_residual:.3e})")


class ScenarioTimeoutError(KiteCtolError):
    """A scenario ran out of time inside a phase."""

    exit_code = ExitCode.SCENARIO_TIMEOUT

    def __init__(self, phase: str, t: float) -> None:
        self.phase = phase
        self.t = t
        super().__init__(f"scenario timed out in phase {phase} at t={t:.3f} s")
