from ._design import ClosedLoopMode, LqrDesign, bryson_init, design_lqr
from ._linearize import CONTROL_NAMES, STATE_NAMES, LinearModel, jacobians, linearize, reduced_rhs
from ._riccati import CARE_TOLERANCE, CareSolution, care_residual, solve_care
from ._trim import (
    EXACT_TRIM_TOLERANCE,
    OperatingPoint,
    TrimSpec,
    held_derivatives,
    solve_operating_point,
    trim_residual,
)

__all__ = [
    "ClosedLoopMode",
    "LqrDesign",
    "bryson_init",
    "design_lqr",
    "CONTROL_NAMES",
    "STATE_NAMES",
    "LinearModel",
    "jacobians",
    "linearize",
    "reduced_rhs",
    "CARE_TOLERANCE",
    "CareSolution",
    "care_residual",
    "solve_care",
    "EXACT_TRIM_TOLERANCE",
    "OperatingPoint",
    "TrimSpec",
    "held_derivatives",
    "solve_operating_point",
    "trim_residual",
]
