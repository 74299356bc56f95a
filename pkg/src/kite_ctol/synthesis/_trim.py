"""Operating points of the tethered model.

A ``TrimSpec`` fixes elevation, flight-path angle and angle of attack (so the pitch
``theta = gamma + alpha`` is fixed and the pitch rate is zero). The airspeed is either
free, which gives a true trim, or fixed to a published reference, in which case only
the thrust is solved for and the leftover residual tells how far the reference is from
an equilibrium.
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import numpy.typing as npt
from loguru import logger
from pydantic import BaseModel, ConfigDict
from scipy.optimize import least_squares  # type: ignore[import-untyped]

from ..control import clamp
from ..dynamics import V_MIN_AIRBORNE, FlightModel
from ..errors import DynamicsError, TrimError

EXACT_TRIM_TOLERANCE = 1e-9
_MAX_AIRSPEED = 100.0
_MAX_EVALUATIONS = 400


class TrimSpec(BaseModel):
    """
    Fixed quantities of an operating point.

    Attributes:
        phase (str): Phase the point belongs to, e.g. ``P4``.
        beta (float): Elevation [rad].
        gamma (float): Flight-path angle [rad].
        alpha (float): Angle of attack [rad].
        airspeed (float, optional): Fixed airspeed [m/s]; None leaves it free. Default: None
        airspeed_guess (float, optional): Start value when the airspeed is free. Default: None
    """

    model_config = ConfigDict(frozen=True)

    phase: str
    beta: float
    gamma: float
    alpha: float
    airspeed: Optional[float] = None
    airspeed_guess: Optional[float] = None

    @property
    def theta(self) -> float:
        return self.gamma + self.alpha

    @property
    def holds_elevation(self) -> bool:
        """Level points also hold beta; climbing or gliding points cannot."""
        return self.gamma == 0.0


@dataclass(frozen=True)
class OperatingPoint:
    """
    A state-control pair and how well it balances the model.

    Attributes:
        phase (str): Phase label.
        x_ref (Tuple[float, float, float, float]): ``(beta, airspeed, gamma, theta)``.
        u_ref (Tuple[float, float]): ``(thrust, pitch_rate)``.
        residual (float): Euclidean norm of the held derivatives at the point.
        holds_elevation (bool): Whether beta_dot is among the held derivatives.
        thrust_clamped (bool): Whether the thrust ended on one of its bounds.
        evaluations (int): Right-hand-side evaluations spent by the solver.
    """

    phase: str
    x_ref: Tuple[float, float, float, float]
    u_ref: Tuple[float, float]
    residual: float
    holds_elevation: bool = False
    thrust_clamped: bool = False
    evaluations: int = 0

    @property
    def feasible(self) -> bool:
        return self.residual <= EXACT_TRIM_TOLERANCE

    @property
    def airspeed(self) -> float:
        return self.x_ref[1]

    @property
    def thrust(self) -> float:
        return self.u_ref[0]


def held_derivatives(
    model: FlightModel,
    x_ref: Tuple[float, float, float, float],
    u_ref: Tuple[float, float],
    holds_elevation: bool,
) -> npt.NDArray[np.float64]:
    beta, airspeed, gamma, theta = x_ref
    _, beta_dot, v_dot, gamma_dot, theta_dot = model.airborne_rates(
        beta, airspeed, gamma, theta, u_ref[0], u_ref[1]
    )
    held = [v_dot, gamma_dot, theta_dot]
    if holds_elevation:
        held.insert(0, beta_dot)
    return np.array(held, dtype=float)


def trim_residual(point: OperatingPoint, model: FlightModel) -> float:
    """Recompute the residual norm of ``point``; equals ``point.residual``."""
    return float(
        np.linalg.norm(held_derivatives(model, point.x_ref, point.u_ref, point.holds_elevation))
    )


def _initial_airspeed(spec: TrimSpec, model: FlightModel) -> float:
    if spec.airspeed_guess is not None:
        return spec.airspeed_guess
    cl, _ = model.polar.interpolate(spec.alpha)
    qa_unit = 0.5 * model.env.air_density * model.aircraft.wing_area * max(cl, 1e-3)
    return max(math.sqrt(model.weight / qa_unit), 2.0 * V_MIN_AIRBORNE)


def solve_operating_point(spec: TrimSpec, model: FlightModel) -> OperatingPoint:
    """Solve the free unknowns of ``spec`` so the held derivatives vanish.

    A bounded trust-region Gauss-Newton iteration (``scipy.optimize.least_squares``)
    drives ``(V_dot, gamma_dot)`` to zero over thrust and, when free, airspeed. When the
    thrust bound binds the best-effort point is returned with its residual; callers read
    ``feasible``.

    Raises:
        TrimError: If the iteration stops on its evaluation budget.
    """
    aircraft = model.aircraft
    fixed_airspeed = spec.airspeed

    def unpack(z: npt.NDArray[np.float64]) -> Tuple[float, float]:
        if fixed_airspeed is None:
            return float(z[0]), float(z[1])
        return fixed_airspeed, float(z[0])

    def residuals(z: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        airspeed, thrust = unpack(z)
        x = (spec.beta, airspeed, spec.gamma, spec.theta)
        # theta_dot is identically zero here; only the force balances are solved
        return held_derivatives(model, x, (thrust, 0.0), False)[:2]

    thrust_guess = clamp(
        0.25 * (aircraft.thrust_min + aircraft.thrust_max),
        aircraft.thrust_min,
        aircraft.thrust_max,
    )
    if fixed_airspeed is None:
        z0 = np.array([_initial_airspeed(spec, model), thrust_guess])
        bounds = ([V_MIN_AIRBORNE, aircraft.thrust_min], [_MAX_AIRSPEED, aircraft.thrust_max])
    else:
        z0 = np.array([thrust_guess])
        bounds = ([aircraft.thrust_min], [aircraft.thrust_max])

    try:
        solution = least_squares(
            residuals,
            z0,
            bounds=bounds,
            method="trf",
            xtol=1e-14,
            ftol=1e-14,
            gtol=1e-14,
            max_nfev=_MAX_EVALUATIONS,
        )
    except DynamicsError as exc:
        raise TrimError(f"{spec.phase}: model left its domain during the trim solve: {exc}", math.inf) from exc

    airspeed, thrust = unpack(solution.x)
    x_ref = (spec.beta, airspeed, spec.gamma, spec.theta)
    u_ref = (thrust, 0.0)
    residual = float(
        np.linalg.norm(held_derivatives(model, x_ref, u_ref, spec.holds_elevation))
    )
    if solution.status == 0 and residual > EXACT_TRIM_TOLERANCE:
        raise TrimError(f"{spec.phase}: trim did not converge in {solution.nfev} evaluations", residual)

    span = aircraft.thrust_max - aircraft.thrust_min
    clamped = min(thrust - aircraft.thrust_min, aircraft.thrust_max - thrust) <= 1e-9 * span
    point = OperatingPoint(
        phase=spec.phase,
        x_ref=x_ref,
        u_ref=u_ref,
        residual=residual,
        holds_elevation=spec.holds_elevation,
        thrust_clamped=clamped,
        evaluations=int(solution.nfev),
    )
    if point.feasible:
        logger.debug(
            "{} trim: V_a={:.4f} m/s, F_p={:.4f} N, residual {:.2e}",
            spec.phase, airspeed, thrust, residual,
        )
    else:
        logger.warning(
            "{} reference is not an exact trim: residual {:.3e} (F_p={:.4f} N{})",
            spec.phase, residual, thrust, ", on its bound" if clamped else "",
        )
    return point
