from .airframe import AeroPolar, AircraftConfig, Environment, aero_forces, coefficients
from .config import RunConfig, dump_config, load_config, load_default_config, parse_config
from .dynamics import (
    ControlInput,
    FlightModel,
    FlightState,
    TetherConfig,
    height_from_beta,
    height_to_beta,
    liftoff_ready,
    rhs_airborne,
    rhs_ground_roll,
    tether_tension,
)
from .envelope import EnvelopeQuery, beta_max, level_speed
from .errors import ExitCode, KiteCtolError
from .simkernel import SimSettings, TelemetryRecord, rk4_step, run_until
from .supervisor import PhaseId, ScenarioSpec, next_phase, references_for_phase, run_scenario
from .synthesis import design_lqr, linearize, solve_care, solve_operating_point
from .telemetry import write_telemetry

from .version import __version__

ABOUT = "kite-ctol - Circular take-off and landing of tethered aircraft."
__all__ = [
    "AeroPolar",
    "AircraftConfig",
    "Environment",
    "aero_forces",
    "coefficients",
    "RunConfig",
    "dump_config",
    "load_config",
    "load_default_config",
    "parse_config",
    "ControlInput",
    "FlightModel",
    "FlightState",
    "TetherConfig",
    "height_from_beta",
    "height_to_beta",
    "liftoff_ready",
    "rhs_airborne",
    "rhs_ground_roll",
    "tether_tension",
    "EnvelopeQuery",
    "beta_max",
    "level_speed",
    "ExitCode",
    "KiteCtolError",
    "SimSettings",
    "TelemetryRecord",
    "rk4_step",
    "run_until",
    "PhaseId",
    "ScenarioSpec",
    "next_phase",
    "references_for_phase",
    "run_scenario",
    "design_lqr",
    "linearize",
    "solve_care",
    "solve_operating_point",
    "write_telemetry",
    "__version__",
    "ABOUT",
]
