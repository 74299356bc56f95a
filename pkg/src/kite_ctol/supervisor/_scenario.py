"""Scenario execution: one pass through the take-off, loiter and landing phases."""

import math
from dataclasses import dataclass, field
from typing import List, Mapping, Optional

import pandas as pd
from loguru import logger

from ..airframe import AeroPolar, AircraftConfig, Environment
from ..dynamics import ControlInput, FlightModel, FlightState, TetherConfig
from ..errors import DynamicsError
from ..simkernel import (
    ExitReason,
    RegimeEvent,
    SimSettings,
    TelemetryRecord,
    make_record,
    run_until,
)
from ..synthesis import LqrDesign
from ._controllers import ControllerGains, references_for_phase
from ._phases import (
    BASELINE_INTERVALS,
    SCENARIO_ORDER,
    PhaseId,
    PhaseParameters,
    ScenarioSpec,
    enter_phase,
    next_phase,
)


@dataclass
class PhaseLogEntry:
    """
    One visited phase.

    Attributes:
        phase (PhaseId): The phase.
        entry (float): Entry time [s].
        exit (float): Exit time [s]; equals the scenario end for the phase that stopped it.
        sink_rate (float, optional): Sink rate at a touchdown inside the phase [m/s].
        touchdown_theta (float, optional): Pitch at that touchdown [rad].
    """

    phase: PhaseId
    entry: float
    exit: float
    sink_rate: Optional[float] = None
    touchdown_theta: Optional[float] = None

    @property
    def duration(self) -> float:
        return self.exit - self.entry

    @property
    def baseline(self) -> Optional[float]:
        interval = BASELINE_INTERVALS.get(self.phase)
        if interval is None:
            return None
        return interval[1] - interval[0]

    @property
    def deviation(self) -> Optional[float]:
        """Relative deviation of the duration from the reference run."""
        baseline = self.baseline
        if not baseline:
            return None
        return (self.duration - baseline) / baseline


@dataclass
class ScenarioResult:
    """
    Outcome of ``run_scenario``.

    Attributes:
        telemetry (List[TelemetryRecord]): One record per step, plus the final Rest record.
        phase_log (List[PhaseLogEntry]): Visited phases in order.
        exit_reason (ExitReason): ``PREDICATE`` when the scenario returned to Rest.
        stuck_phase (PhaseId, optional): Phase in which a timeout or dynamics error occurred.
        error (DynamicsError, optional): The error that stopped the scenario.
        events (List[RegimeEvent]): Lift-off and touchdown events.
        final_state (FlightState): State at the end of the run.
    """

    telemetry: List[TelemetryRecord]
    phase_log: List[PhaseLogEntry]
    exit_reason: ExitReason
    final_state: FlightState
    stuck_phase: Optional[PhaseId] = None
    error: Optional[DynamicsError] = None
    events: List[RegimeEvent] = field(default_factory=list)

    @property
    def completed(self) -> bool:
        return self.exit_reason is ExitReason.PREDICATE

    @property
    def visited(self) -> List[PhaseId]:
        return [entry.phase for entry in self.phase_log]

    @property
    def slack_count(self) -> int:
        return sum(1 for record in self.telemetry if record.slack)

    def entry_for(self, phase: PhaseId) -> Optional[PhaseLogEntry]:
        """First log entry of ``phase``."""
        return next((e for e in self.phase_log if e.phase is phase), None)


def run_scenario(
    spec: ScenarioSpec,
    config: AircraftConfig,
    env: Environment,
    polar: AeroPolar,
    tether: TetherConfig,
    settings: SimSettings,
    gains: ControllerGains,
    designs: Mapping[PhaseId, LqrDesign],
    params: Optional[PhaseParameters] = None,
) -> ScenarioResult:
    """Run Rest, P1 to P8 and back to Rest from a standstill on the ground.

    Each phase gets a fresh controller; the LQR designs are used as given. A timeout or
    a dynamics error ends the run early with the telemetry recorded so far.

    Args:
        spec (ScenarioSpec): Operator command times and the stop threshold.
        config (AircraftConfig): Aircraft parameters and actuator bounds.
        env (Environment): Atmosphere.
        polar (AeroPolar): Aerodynamic polar.
        tether (TetherConfig): Tether geometry.
        settings (SimSettings): Step size and time limit.
        gains (ControllerGains): PID gains of P1, P2, P5 and P7.
        designs (Mapping[PhaseId, LqrDesign]): LQR designs of P3, P4 and P6.
        params (PhaseParameters, optional): Phase thresholds. Defaults to the built-in values.

    Returns:
        ScenarioResult: Telemetry, phase log and how the run ended.
    """
    params = params or PhaseParameters()
    model = FlightModel(config, env, polar, tether)
    state = FlightState()
    step = 0
    telemetry: List[TelemetryRecord] = []
    events: List[RegimeEvent] = []
    phase_log: List[PhaseLogEntry] = []
    tolerance = settings.tolerance
    slack_reported = False

    for phase in SCENARIO_ORDER[:-1]:
        enter_phase(phase)
        controller = references_for_phase(phase, gains, designs, config, settings.dt)
        controller.reset()
        entry = settings.time_at(step)
        logger.info("entering {} at t={:.3f} s (V_a={:.3f} m/s)", phase.value, entry, state.airspeed)

        def leaves(t: float, s: FlightState, current: PhaseId = phase) -> bool:
            return next_phase(current, t, s, spec, params, tether, tolerance) is not current

        run = run_until(state, controller, leaves, settings, model, start_step=step, phase=phase.value)
        telemetry.extend(run.telemetry)
        events.extend(run.events)
        log_entry = PhaseLogEntry(phase, entry, settings.time_at(run.end_step))
        for event in run.events:
            if event.kind == "touchdown":
                log_entry.sink_rate = event.sink_rate
                log_entry.touchdown_theta = event.theta
                logger.info(
                    "touchdown at t={:.3f} s: sink rate {:.3f} m/s, theta {:.2f} deg",
                    event.t, event.sink_rate, math.degrees(event.theta),
                )
        phase_log.append(log_entry)
        if not slack_reported:
            first = next((r for r in run.telemetry if r.slack), None)
            if first is not None:
                logger.warning("tether slack at t={:.3f} s in {}", first.t, phase.value)
                slack_reported = True
        state = run.state
        step = run.end_step
        if run.exit_reason is not ExitReason.PREDICATE:
            if run.exit_reason is ExitReason.TIMEOUT:
                logger.warning("scenario timed out in {} at t={:.3f} s", phase.value, log_entry.exit)
            return ScenarioResult(
                telemetry=telemetry,
                phase_log=phase_log,
                exit_reason=run.exit_reason,
                final_state=state,
                stuck_phase=phase,
                error=run.error,
                events=events,
            )

    t_end = settings.time_at(step)
    telemetry.append(make_record(t_end, PhaseId.REST.value, state, ControlInput(), model))
    phase_log.append(PhaseLogEntry(PhaseId.REST, t_end, t_end))
    logger.info("scenario back at rest at t={:.3f} s", t_end)
    return ScenarioResult(
        telemetry=telemetry,
        phase_log=phase_log,
        exit_reason=ExitReason.PREDICATE,
        final_state=state,
        events=events,
    )


def phase_report(result: ScenarioResult) -> pd.DataFrame:
    """Tabulate the phase log against the reference run.

    Columns: ``phase, entry, exit, duration, baseline, deviation, sink_rate,
    touchdown_theta_deg``; missing values are NaN.
    """
    nan = float("nan")
    rows = [
        {
            "phase": e.phase.value,
            "entry": e.entry,
            "exit": e.exit,
            "duration": e.duration,
            "baseline": nan if e.baseline is None else e.baseline,
            "deviation": nan if e.deviation is None else e.deviation,
            "sink_rate": nan if e.sink_rate is None else e.sink_rate,
            "touchdown_theta_deg": (
                nan if e.touchdown_theta is None else math.degrees(e.touchdown_theta)
            ),
        }
        for e in result.phase_log
    ]
    return pd.DataFrame(
        rows,
        columns=[
            "phase", "entry", "exit", "duration", "baseline", "deviation",
            "sink_rate", "touchdown_theta_deg",
        ],
    )
