from ._controllers import (
    LQR_PHASES,
    ClimbOutController,
    ControllerGains,
    FlareController,
    FlareGains,
    GlideGains,
    LqrController,
    LqrSettings,
    OpenLoopController,
    PhaseController,
    PidLoop,
    TwoLoopGains,
    TwoPidController,
    references_for_phase,
    synthesize_designs,
)
from ._phases import (
    BASELINE_INTERVALS,
    LOITER,
    PHASE_TABLE,
    SCENARIO_ORDER,
    STUB_PHASES,
    SUCCESSORS,
    PhaseDescriptor,
    PhaseId,
    PhaseParameters,
    ScenarioSpec,
    enter_phase,
    next_phase,
)
from ._scenario import PhaseLogEntry, ScenarioResult, phase_report, run_scenario

__all__ = [
    "LQR_PHASES",
    "ClimbOutController",
    "ControllerGains",
    "FlareController",
    "FlareGains",
    "GlideGains",
    "LqrController",
    "LqrSettings",
    "OpenLoopController",
    "PhaseController",
    "PidLoop",
    "TwoLoopGains",
    "TwoPidController",
    "references_for_phase",
    "synthesize_designs",
    "BASELINE_INTERVALS",
    "LOITER",
    "PHASE_TABLE",
    "SCENARIO_ORDER",
    "STUB_PHASES",
    "SUCCESSORS",
    "PhaseDescriptor",
    "PhaseId",
    "PhaseParameters",
    "ScenarioSpec",
    "enter_phase",
    "next_phase",
    "PhaseLogEntry",
    "ScenarioResult",
    "phase_report",
    "run_scenario",
]
