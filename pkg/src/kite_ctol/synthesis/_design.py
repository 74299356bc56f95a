import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from loguru import logger

from ..control import LqrLaw
from ..dynamics import FlightModel
from ..errors import SynthesisError
from ._linearize import LinearModel, linearize
from ._riccati import CareSolution, solve_care
from ._trim import OperatingPoint

Array = npt.NDArray[np.float64]


@dataclass(frozen=True)
class ClosedLoopMode:
    eigenvalue: complex
    damping_ratio: float
    time_constant: float


@dataclass(frozen=True)
class LqrDesign:
    """
    One phase's LQR design, frozen after synthesis.

    Attributes:
        phase (str): Phase label.
        linear_model (LinearModel): Linearization about the phase operating point.
        Q (Array): Diagonal state weight (4x4).
        R (Array): Diagonal control weight (2x2).
        care (CareSolution): Riccati solution, gain and closed-loop eigenvalues.
    """

    phase: str
    linear_model: LinearModel
    Q: Array
    R: Array
    care: CareSolution

    @property
    def point(self) -> OperatingPoint:
        return self.linear_model.point

    @property
    def K(self) -> Array:
        return self.care.K

    @property
    def P(self) -> Array:
        return self.care.P

    @property
    def eigenvalues(self) -> npt.NDArray[np.complex128]:
        return self.care.eigenvalues

    @property
    def spectral_abscissa(self) -> float:
        return float(np.max(self.care.eigenvalues.real))

    def closed_loop_modes(self) -> List[ClosedLoopMode]:
        modes: List[ClosedLoopMode] = []
        for lam in sorted(self.care.eigenvalues, key=lambda z: (z.real, z.imag)):
            magnitude = abs(lam)
            damping = -lam.real / magnitude if magnitude > 0 else 1.0
            tau = -1.0 / lam.real if lam.real < 0 else math.inf
            modes.append(ClosedLoopMode(complex(lam), damping, tau))
        return modes

    def law(self) -> LqrLaw:
        return LqrLaw(x_ref=self.point.x_ref, u_ref=self.point.u_ref, gain=self.care.K)


def bryson_init(
    state_scales: Sequence[Optional[float]], control_scales: Sequence[float]
) -> Tuple[Array, Array]:
    """Diagonal weights from maximum acceptable deviations, ``W_ii = 1/max_i^2``.

    A state scale of ``None``, ``0`` or ``inf`` marks an ignored state (zero weight).

    Raises:
        SynthesisError: If a control scale is not a positive finite number.
    """
    q = []
    for scale in state_scales:
        if scale is None or scale == 0 or math.isinf(scale):
            q.append(0.0)
        elif scale < 0:
            raise SynthesisError(f"state scale must be positive, got {scale!r}")
        else:
            q.append(1.0 / scale**2)
    r = []
    for scale in control_scales:
        if not (scale > 0 and math.isfinite(scale)):
            raise SynthesisError(f"control scale must be positive and finite, got {scale!r}")
        r.append(1.0 / scale**2)
    return np.diag(q), np.diag(r)


def design_lqr(
    phase: str,
    point: OperatingPoint,
    model: FlightModel,
    Q: Array,
    R: Array,
) -> LqrDesign:
    """Linearize about ``point`` and solve the Riccati equation with weights ``Q``, ``R``."""
    Q = np.asarray(Q, dtype=float)
    R = np.asarray(R, dtype=float)
    if Q.shape != (4, 4) or R.shape != (2, 2):
        raise SynthesisError(f"weights must be 4x4 and 2x2, got {Q.shape} and {R.shape}", phase=phase)
    if np.count_nonzero(Q - np.diag(np.diag(Q))) or np.count_nonzero(R - np.diag(np.diag(R))):
        raise SynthesisError("Q and R must be diagonal", phase=phase)
    linear_model = linearize(point, model)
    try:
        care = solve_care(linear_model.A, linear_model.B, Q, R)
    except SynthesisError as exc:
        raise SynthesisError(str(exc), phase=phase, residuals=exc.residuals) from exc
    design = LqrDesign(phase=phase, linear_model=linear_model, Q=Q, R=R, care=care)
    logger.info(
        "{} LQR: residual {:.2e}, spectral abscissa {:.4f} 1/s",
        phase, care.residual, design.spectral_abscissa,
    )
    return design
