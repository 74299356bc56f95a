from dataclasses import dataclass, field
from typing import List

import numpy as np
import numpy.typing as npt
from loguru import logger
from scipy import linalg as la  # type: ignore[import-untyped]

from ..errors import SynthesisError

Array = npt.NDArray[np.float64]

CARE_TOLERANCE = 1e-8
_REFINEMENTS = 6


@dataclass(frozen=True)
class CareSolution:
    """
    Stabilizing solution of ``A'P + PA - PBR^-1B'P + Q = 0``.

    Attributes:
        P (Array): Riccati solution, symmetric positive semidefinite.
        K (Array): Gain ``R^-1 B' P``.
        eigenvalues (npt.NDArray[np.complex128]): Eigenvalues of ``A - BK``.
        residual (float): Frobenius norm of the Riccati residual at ``P``.
        residual_history (List[float]): Residual after the direct solve and each refinement.
    """

    P: Array
    K: Array
    eigenvalues: npt.NDArray[np.complex128]
    residual: float
    residual_history: List[float] = field(default_factory=list)


def care_residual(A: Array, B: Array, Q: Array, R: Array, P: Array) -> float:
    gain_term = P @ B @ la.solve(R, B.T @ P)
    return float(np.linalg.norm(A.T @ P + P @ A - gain_term + Q, ord="fro"))


def solve_care(A: Array, B: Array, Q: Array, R: Array) -> CareSolution:
    """Solve the continuous algebraic Riccati equation with a residual certificate.

    The Schur-method solution from ``scipy.linalg.solve_continuous_are`` is refined with
    Newton-Kleinman steps while its residual is above ``CARE_TOLERANCE``.

    Raises:
        SynthesisError: If the pair is not stabilizable, the weights are invalid, the
            residual stays above tolerance, or ``A - BK`` is not Hurwitz.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    R = np.atleast_2d(np.asarray(R, dtype=float))
    if np.any(np.linalg.eigvalsh(0.5 * (Q + Q.T)) < -1e-12):
        raise SynthesisError("Q must be positive semidefinite")
    if np.any(np.linalg.eigvalsh(0.5 * (R + R.T)) <= 0):
        raise SynthesisError("R must be positive definite")

    try:
        P = la.solve_continuous_are(A, B, Q, R)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SynthesisError(f"Riccati solve failed: {exc}") from exc
    P = 0.5 * (P + P.T)
    history = [care_residual(A, B, Q, R, P)]

    for _ in range(_REFINEMENTS):
        if history[-1] <= 0.1 * CARE_TOLERANCE:
            break
        K = la.solve(R, B.T @ P)
        closed = A - B @ K
        try:
            candidate = la.solve_continuous_lyapunov(closed.T, -(Q + K.T @ R @ K))
        except (np.linalg.LinAlgError, ValueError) as exc:
            logger.debug("Newton-Kleinman refinement stopped: {}", exc)
            break
        candidate = 0.5 * (candidate + candidate.T)
        residual = care_residual(A, B, Q, R, candidate)
        if residual >= history[-1]:
            break
        P = candidate
        history.append(residual)

    if history[-1] > CARE_TOLERANCE:
        raise SynthesisError(
            f"Riccati residual {history[-1]:.3e} above {CARE_TOLERANCE:.0e}", residuals=history
        )
    if np.min(np.linalg.eigvalsh(P)) < -1e-9 * max(1.0, float(np.max(np.abs(P)))):
        raise SynthesisError("Riccati solution is not positive semidefinite", residuals=history)

    K = la.solve(R, B.T @ P)
    eigenvalues = np.linalg.eigvals(A - B @ K)
    if np.max(eigenvalues.real) >= 0:
        raise SynthesisError(
            f"closed loop is not stable (spectral abscissa {np.max(eigenvalues.real):.3e})",
            residuals=history,
        )
    return CareSolution(P=P, K=K, eigenvalues=eigenvalues, residual=history[-1], residual_history=history)
