"""Invariant suite behind ``kite-ctol --seed-check``."""

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from .config import RunSetup
from .control import saturate
from .dynamics import ControlInput, FlightModel, FlightState, height_from_beta, tether_tension
from .envelope import beta_max
from .errors import KiteCtolError
from .simkernel import TelemetryRecord
from .supervisor import LQR_PHASES, PhaseId, synthesize_designs
from .synthesis import (
    CARE_TOLERANCE,
    LqrDesign,
    TrimSpec,
    linearize,
    solve_operating_point,
)


@dataclass(frozen=True)
class CheckResult:
    """
    Outcome of one check.

    Attributes:
        name (str): Check name.
        passed (bool): Whether the invariant holds.
        detail (str): Measured values.
        informational (bool): Reported only; never fails the suite.
    """

    name: str
    passed: bool
    detail: str
    informational: bool = False

    @property
    def label(self) -> str:
        if self.informational:
            return "INFO"
        return "PASS" if self.passed else "FAIL"


@dataclass(frozen=True)
class RotationMargins:
    """Lift minus weight [N] at the rotation speed; negative means the aircraft stays down."""

    steady: float
    stall: float
    steady_with_thrust: float
    stall_with_thrust: float


def rotation_margins(model: FlightModel, v_rot: float, theta_rot: float) -> RotationMargins:
    """Evaluate ``F_L(alpha_0, V_rot) - mg`` and ``F_L(alpha_L, V_rot) - mg``.

    The ``*_with_thrust`` variants add the vertical component of full thrust at ``theta_rot``.
    """
    weight = model.weight
    lift_steady, _ = model.forces(v_rot, model.polar.steady_angle)
    lift_stall, _ = model.forces(v_rot, model.polar.stall_angle)
    push = model.aircraft.thrust_max * math.sin(theta_rot)
    return RotationMargins(
        steady=lift_steady - weight,
        stall=lift_stall - weight,
        steady_with_thrust=lift_steady + push - weight,
        stall_with_thrust=lift_stall + push - weight,
    )


def _sample_states(model: FlightModel) -> List[Tuple[FlightState, ControlInput]]:
    lower, upper = model.polar.alpha_range
    samples = []
    for beta_deg, airspeed, gamma_deg, alpha_deg, thrust in itertools.product(
        (0.0, 5.0, 15.0), (3.0, 8.0, 12.0), (-4.0, 0.0, 6.0), (-3.0, 4.0, 9.0), (0.0, 0.7, 1.5)
    ):
        alpha = math.radians(alpha_deg)
        if not lower <= alpha <= upper:
            continue
        gamma = math.radians(gamma_deg)
        state = FlightState(0.3, math.radians(beta_deg), airspeed, gamma, gamma + alpha, False)
        samples.append((state, ControlInput(thrust, 0.1)))
    return samples


def telemetry_samples(records: Iterable[TelemetryRecord]) -> List[Tuple[FlightState, ControlInput]]:
    """Airborne records as state and applied control."""
    return [
        (
            FlightState(r.phi, r.beta, r.airspeed, r.gamma, r.theta, False),
            ControlInput(r.thrust, r.pitch_rate),
        )
        for r in records
        if not r.grounded
    ]


def energy_gap(model: FlightModel, state: FlightState, control: ControlInput) -> float:
    """``|m V V' + m g h' - V (F cos(alpha) - F_D)|`` scaled by ``max(1, m g V)``."""
    m = model.aircraft.mass
    g = model.env.gravity
    _, beta_dot, v_dot, _, _ = model.airborne_rates(
        state.beta, state.airspeed, state.gamma, state.theta, control.thrust, control.pitch_rate
    )
    _, drag = model.forces(state.airspeed, state.alpha)
    h_dot = model.tether.length * math.cos(state.beta) * beta_dot
    power = state.airspeed * (control.thrust * math.cos(state.alpha) - drag)
    gap = abs(m * state.airspeed * v_dot + m * g * h_dot - power)
    return gap / max(1.0, m * g * state.airspeed)


def check_energy_identity(
    model: FlightModel,
    samples: Optional[Sequence[Tuple[FlightState, ControlInput]]] = None,
    name: str = "energy identity",
) -> CheckResult:
    """Energy balance at ``samples``, by default a grid of airborne states."""
    points = _sample_states(model) if samples is None else samples
    worst = max((energy_gap(model, state, control) for state, control in points), default=0.0)
    detail = f"worst scaled gap {worst:.3e} over {len(points)} states"
    return CheckResult(name, bool(points) and worst <= 1e-9, detail)


def check_saturate_idempotent(model: FlightModel) -> CheckResult:
    config = model.aircraft
    limit = config.pitch_rate_limit
    failures = 0
    for thrust, rate in itertools.product((-1.0, 0.0, 0.9, 1.5, 2.0), (-2 * limit, -limit, 0.0, 0.5 * limit, 3 * limit)):
        once = saturate(ControlInput(thrust, rate), config)
        if saturate(once, config) != once:
            failures += 1
    return CheckResult("saturate idempotence", failures == 0, f"{failures} non-idempotent inputs")


def check_azimuth_invariance(model: FlightModel) -> CheckResult:
    spread = 0.0
    for beta_deg, airspeed, gamma_deg in itertools.product((0.0, 7.18, 20.0), (4.0, 10.84), (-2.0, 0.0, 3.0)):
        tensions = [
            tether_tension(
                FlightState(phi, math.radians(beta_deg), airspeed, math.radians(gamma_deg), 0.0, False),
                model.aircraft,
                model.env,
                model.tether,
            )
            for phi in (0.0, 1.0, math.pi, 12.5)
        ]
        spread = max(spread, max(tensions) - min(tensions))
    return CheckResult("tether azimuth invariance", spread == 0.0, f"max spread {spread:.3e} N")


def check_geometry_anchors(setup: RunSetup) -> CheckResult:
    h_0 = height_from_beta(math.radians(7.18), setup.tether)
    h_flare = height_from_beta(math.radians(1.50), setup.tether)
    passed = abs(h_0 - setup.params.h_0) <= 1e-3 and abs(h_flare - setup.params.h_flare) <= 1e-3
    return CheckResult("geometry anchors", passed, f"h(7.18 deg)={h_0:.5f} m, h(1.50 deg)={h_flare:.5f} m")


def check_beta_max_anchor(setup: RunSetup) -> CheckResult:
    value = math.degrees(
        beta_max(setup.aircraft, setup.env, setup.polar, setup.polar.stall_angle, setup.tether.length)
    )
    return CheckResult("beta_max anchor", abs(value - 18.71) <= 0.01, f"beta_max={value:.4f} deg")


def check_care_certificates(designs: Mapping[PhaseId, LqrDesign]) -> List[CheckResult]:
    results = []
    for phase in LQR_PHASES:
        design = designs[phase]
        P = design.P
        symmetric = bool(np.allclose(P, P.T, rtol=0.0, atol=1e-12 * max(1.0, float(np.abs(P).max()))))
        psd = bool(np.linalg.eigvalsh(0.5 * (P + P.T)).min() >= -1e-10)
        hurwitz = design.spectral_abscissa < 0.0
        passed = design.care.residual <= CARE_TOLERANCE and symmetric and psd and hurwitz
        results.append(
            CheckResult(
                f"CARE certificate {phase.value}",
                passed,
                f"residual {design.care.residual:.2e}, spectral abscissa {design.spectral_abscissa:.4f}",
            )
        )
    return results


def check_loiter_trim(setup: RunSetup) -> CheckResult:
    beta, airspeed, gamma, theta = setup.lqr[PhaseId.P4].x_ref
    spec = TrimSpec(phase="P4", beta=beta, gamma=gamma, alpha=theta - gamma, airspeed_guess=airspeed)
    point = solve_operating_point(spec, setup.model)
    passed = abs(point.airspeed - setup.params.v_loiter) <= 0.01 and point.feasible
    return CheckResult(
        "loiter trim", passed, f"V_a={point.airspeed:.4f} m/s, residual {point.residual:.2e}"
    )


def check_glide_reference(setup: RunSetup) -> CheckResult:
    """The P6 reference state is not an exact trim at its published airspeed."""
    beta, airspeed, gamma, theta = setup.lqr[PhaseId.P6].x_ref
    spec = TrimSpec(phase="P6", beta=beta, gamma=gamma, alpha=theta - gamma, airspeed=airspeed)
    point = solve_operating_point(spec, setup.model)
    return CheckResult(
        "glide reference infeasible", not point.feasible, f"residual {point.residual:.3e}"
    )


def check_jacobian(designs: Mapping[PhaseId, LqrDesign], model: FlightModel) -> CheckResult:
    """Loiter linearization against a half-step recomputation and the analytic thrust partial."""
    design = designs[PhaseId.P4]
    point = design.point
    halved = linearize(point, model, step_scale=0.5)
    agree = np.allclose(design.linear_model.A, halved.A, rtol=1e-5, atol=1e-8) and np.allclose(
        design.linear_model.B, halved.B, rtol=1e-5, atol=1e-8
    )
    alpha = point.x_ref[3] - point.x_ref[2]
    expected = math.cos(alpha) / model.aircraft.mass
    partial = float(design.linear_model.B[1, 0])
    analytic = abs(partial - expected) <= 1e-6 * abs(expected)
    return CheckResult(
        "loiter jacobian", bool(agree and analytic), f"dV/dF={partial:.8f}, cos(alpha)/m={expected:.8f}"
    )


def _guard(name: str, check: Callable[[], CheckResult]) -> CheckResult:
    try:
        return check()
    except KiteCtolError as exc:
        return CheckResult(name, False, f"error: {exc}")


def run_checks(setup: RunSetup, designs: Optional[Mapping[PhaseId, LqrDesign]] = None) -> List[CheckResult]:
    """Run the invariant suite; ``designs`` are synthesized when not given."""
    model = setup.model
    results = [
        _guard("energy identity", lambda: check_energy_identity(model)),
        _guard("saturate idempotence", lambda: check_saturate_idempotent(model)),
        _guard("tether azimuth invariance", lambda: check_azimuth_invariance(model)),
        _guard("geometry anchors", lambda: check_geometry_anchors(setup)),
        _guard("beta_max anchor", lambda: check_beta_max_anchor(setup)),
        _guard("loiter trim", lambda: check_loiter_trim(setup)),
        _guard("glide reference infeasible", lambda: check_glide_reference(setup)),
    ]
    if designs is None:
        try:
            designs = synthesize_designs(model, setup.lqr)
        except KiteCtolError as exc:
            results.append(CheckResult("LQR synthesis", False, f"error: {exc}"))
    if designs is not None:
        results.extend(check_care_certificates(designs))
        resolved = designs
        results.append(_guard("loiter jacobian", lambda: check_jacobian(resolved, model)))
    margins = rotation_margins(model, setup.params.v_rot, setup.params.theta_rot)
    results.append(
        CheckResult(
            "rotation margins",
            True,
            f"steady {margins.steady:+.3f} N, stall {margins.stall:+.3f} N, "
            f"stall with thrust {margins.stall_with_thrust:+.3f} N",
            informational=True,
        )
    )
    failed = [r.name for r in results if not r.passed and not r.informational]
    if failed:
        logger.warning("invariant checks failed: {}", ", ".join(failed))
    return results
