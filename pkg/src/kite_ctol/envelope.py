"""Flight-envelope analytics: maximum elevation and level-flight speed on the tether sphere."""

import math
from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, field_validator

from .airframe import AeroPolar, AircraftConfig, Environment, coefficients

Balance = Literal["full", "thrust", "high_speed"]
ENVELOPE_COLUMNS = ["r", "beta_deg", "va", "feasible"]


class EnvelopeQuery(BaseModel):
    """
    Grid of an envelope evaluation, angles in radians.

    Attributes:
        radii (Tuple[float, ...]): Tether lengths r [m].
        betas (Tuple[float, ...]): Elevations [rad], in [0, pi/2).
        alphas (Tuple[float, ...]): Angles of attack [rad], one curve family each.
    """

    model_config = ConfigDict(frozen=True)

    radii: Tuple[float, ...]
    betas: Tuple[float, ...]
    alphas: Tuple[float, ...]

    @field_validator("radii", "betas")
    @classmethod
    def _check_grid(cls, grid: Tuple[float, ...]) -> Tuple[float, ...]:
        if not grid:
            raise ValueError("grid must not be empty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("grid must be strictly increasing")
        return grid

    @field_validator("radii")
    @classmethod
    def _check_radii(cls, radii: Tuple[float, ...]) -> Tuple[float, ...]:
        if radii[0] <= 0:
            raise ValueError("tether lengths must be positive")
        return radii

    @field_validator("betas")
    @classmethod
    def _check_betas(cls, betas: Tuple[float, ...]) -> Tuple[float, ...]:
        if betas[0] < 0 or betas[-1] >= 0.5 * math.pi:
            raise ValueError("elevations must lie in [0, pi/2)")
        return betas

    @field_validator("alphas")
    @classmethod
    def _check_alphas(cls, alphas: Tuple[float, ...]) -> Tuple[float, ...]:
        if not alphas:
            raise ValueError("at least one angle of attack is required")
        return alphas

    @classmethod
    def from_degrees(
        cls, radii: List[float], betas_deg: List[float], alphas_deg: List[float]
    ) -> "EnvelopeQuery":
        return cls(
            radii=tuple(radii),
            betas=tuple(math.radians(b) for b in betas_deg),
            alphas=tuple(math.radians(a) for a in alphas_deg),
        )


def _lift_per_speed_squared(
    config: AircraftConfig, env: Environment, polar: AeroPolar, alpha: float
) -> float:
    cl, _ = coefficients(polar, alpha)
    return 0.5 * env.air_density * config.wing_area * cl


def beta_max(
    config: AircraftConfig, env: Environment, polar: AeroPolar, alpha: float, r: float
) -> float:
    """Highest elevation [rad] sustainable at ``alpha`` on a tether of length ``r``.

    In the high-speed limit the weight is negligible and lift only balances the
    centripetal term, so ``tan(beta) = (1/2 rho A c_L / m) r``.
    """
    if r <= 0:
        raise ValueError(f"tether length must be positive, got {r!r}")
    return math.atan(_lift_per_speed_squared(config, env, polar, alpha) * r / config.mass)


def level_speed(
    config: AircraftConfig,
    env: Environment,
    polar: AeroPolar,
    alpha: float,
    beta: float,
    r: float,
    balance: Balance = "full",
) -> Optional[float]:
    """Airspeed [m/s] of level circular flight (gamma = 0, gamma_dot = 0), or None.

    ``full`` balances lift against weight and the centripetal term without thrust;
    ``thrust`` adds the vertical component of full thrust to the lift side;
    ``high_speed`` drops the weight, so no finite speed exists and only feasibility
    (``beta < beta_max``) is reported, as ``inf``.
    """
    m = config.mass
    lift_coefficient = _lift_per_speed_squared(config, env, polar, alpha)
    denominator = lift_coefficient - (m / r) * math.tan(beta)
    if denominator <= 0:
        return None
    if balance == "high_speed":
        return math.inf
    numerator = m * env.gravity * math.cos(beta)
    if balance == "thrust":
        numerator -= config.thrust_max * math.sin(alpha)
    if numerator <= 0:
        return None
    return math.sqrt(numerator / denominator)


def level_speed_grid(
    config: AircraftConfig,
    env: Environment,
    polar: AeroPolar,
    query: EnvelopeQuery,
    balance: Balance = "full",
) -> Dict[float, pd.DataFrame]:
    """One frame per angle of attack with columns ``r, beta_deg, va, feasible``.

    Infeasible points carry ``va = NaN``.
    """
    frames: Dict[float, pd.DataFrame] = {}
    for alpha in query.alphas:
        rows = []
        for r in query.radii:
            for beta in query.betas:
                va = level_speed(config, env, polar, alpha, beta, r, balance)
                feasible = va is not None
                rows.append(
                    {
                        "r": r,
                        "beta_deg": math.degrees(beta),
                        "va": va if va is not None and math.isfinite(va) else np.nan,
                        "feasible": int(feasible),
                    }
                )
        frames[alpha] = pd.DataFrame(rows, columns=ENVELOPE_COLUMNS)
    return frames


def beta_max_table(
    config: AircraftConfig, env: Environment, polar: AeroPolar, query: EnvelopeQuery
) -> pd.DataFrame:
    """``beta_max`` for every (alpha, r) pair, in degrees."""
    rows = [
        {
            "alpha_deg": math.degrees(alpha),
            "r": r,
            "beta_max_deg": math.degrees(beta_max(config, env, polar, alpha, r)),
        }
        for alpha in query.alphas
        for r in query.radii
    ]
    return pd.DataFrame(rows, columns=["alpha_deg", "r", "beta_max_deg"])


def feasibility_boundary(frame: pd.DataFrame) -> pd.Series:
    """Largest feasible elevation [deg] per tether length of a ``level_speed_grid`` frame."""
    feasible = frame[frame["feasible"] == 1]
    return feasible.groupby("r")["beta_deg"].max()
