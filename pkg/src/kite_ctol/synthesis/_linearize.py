from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
import numpy.typing as npt

from ..dynamics import FlightModel
from ..errors import DynamicsError, LinearizationError
from ._trim import OperatingPoint

Array = npt.NDArray[np.float64]
ReducedRhs = Callable[[Array, Array], Array]

STATE_NAMES = ("beta", "airspeed", "gamma", "theta")
CONTROL_NAMES = ("thrust", "pitch_rate")


@dataclass(frozen=True)
class LinearModel:
    """``x~' = A x~ + B u~`` about ``point`` (state without the azimuth)."""

    point: OperatingPoint
    A: Array
    B: Array

    def __post_init__(self) -> None:
        if self.A.shape != (4, 4) or self.B.shape != (4, 2):
            raise ValueError(f"expected A 4x4 and B 4x2, got {self.A.shape} and {self.B.shape}")
        if not (np.all(np.isfinite(self.A)) and np.all(np.isfinite(self.B))):
            raise ValueError("linear model has non-finite entries")


def reduced_rhs(model: FlightModel) -> ReducedRhs:
    """Azimuth-free airborne right-hand side ``(x, u) -> (beta', V_a', gamma', theta')``."""

    def rhs(x: Array, u: Array) -> Array:
        _, beta_dot, v_dot, gamma_dot, theta_dot = model.airborne_rates(
            float(x[0]), float(x[1]), float(x[2]), float(x[3]), float(u[0]), float(u[1])
        )
        return np.array([beta_dot, v_dot, gamma_dot, theta_dot])

    return rhs


def _fd_step(value: float, scale: float) -> float:
    return scale * max(1e-6, 1e-6 * abs(value))


def jacobians(
    rhs: ReducedRhs, x0: Array, u0: Array, step_scale: float = 1.0
) -> Tuple[Array, Array]:
    """Central finite differences of ``rhs`` with step ``max(1e-6, 1e-6|v|)`` per coordinate."""
    A = np.zeros((4, 4))
    B = np.zeros((4, 2))
    for target, base, names, other, is_state in (
        (A, x0, STATE_NAMES, u0, True),
        (B, u0, CONTROL_NAMES, x0, False),
    ):
        for i, name in enumerate(names):
            h = _fd_step(float(base[i]), step_scale)
            columns = []
            for sign in (1.0, -1.0):
                shifted = base.copy()
                shifted[i] += sign * h
                try:
                    columns.append(rhs(shifted, other) if is_state else rhs(other, shifted))
                except DynamicsError as exc:
                    raise LinearizationError(name, float(shifted[i]), exc) from exc
            target[:, i] = (columns[0] - columns[1]) / (2.0 * h)
    return A, B


def linearize(
    point: OperatingPoint,
    model: FlightModel,
    rhs: Optional[ReducedRhs] = None,
    step_scale: float = 1.0,
) -> LinearModel:
    """Linearize the reduced airborne model about ``point``.

    Args:
        point (OperatingPoint): Linearization point; need not be an equilibrium.
        model (FlightModel): Model parameters.
        rhs (ReducedRhs, optional): Replacement right-hand side. Defaults to the airborne model.
        step_scale (float, optional): Multiplier on the difference steps. Defaults to 1.

    Raises:
        LinearizationError: If the right-hand side fails at a perturbed point.
    """
    f = rhs if rhs is not None else reduced_rhs(model)
    A, B = jacobians(f, np.array(point.x_ref, dtype=float), np.array(point.u_ref, dtype=float), step_scale)
    return LinearModel(point=point, A=A, B=B)
