import math

import numpy as np
import pytest
from pydantic import ValidationError

from kite_ctol.airframe import AeroPolar, PolarPoint
from kite_ctol.config import RunSetup
from kite_ctol.dynamics import FlightModel
from kite_ctol.envelope import (
    ENVELOPE_COLUMNS,
    EnvelopeQuery,
    beta_max,
    beta_max_table,
    feasibility_boundary,
    level_speed,
    level_speed_grid,
)

STALL = math.radians(9.0)


def test_beta_max_anchor(setup: RunSetup):
    value = beta_max(setup.aircraft, setup.env, setup.polar, STALL, 2.4)
    assert math.degrees(value) == pytest.approx(18.7131, abs=1e-3)


def test_beta_max_grows_with_tether_length(setup: RunSetup):
    values = [beta_max(setup.aircraft, setup.env, setup.polar, STALL, r) for r in (1.2, 2.4, 4.8, 9.6)]
    assert values == sorted(values)
    assert all(0.0 < v < 0.5 * math.pi for v in values)


def test_beta_max_without_lift(setup: RunSetup):
    flat = AeroPolar.model_construct(
        points=(
            PolarPoint(alpha=-0.5, cl=0.0, cd=0.05),
            PolarPoint(alpha=0.5, cl=0.0, cd=0.05),
        ),
        stall_angle=0.0,
        steady_angle=0.0,
    )
    assert beta_max(setup.aircraft, setup.env, flat, 0.0, 2.4) == 0.0
    assert level_speed(setup.aircraft, setup.env, flat, 0.0, 0.0, 2.4) is None


def test_beta_max_rejects_bad_length(setup: RunSetup):
    with pytest.raises(ValueError):
        beta_max(setup.aircraft, setup.env, setup.polar, STALL, 0.0)


@pytest.mark.parametrize("beta_deg, expected", [(0.0, 8.3328), (10.0, 11.942)])
def test_level_speed(setup: RunSetup, beta_deg: float, expected: float):
    va = level_speed(setup.aircraft, setup.env, setup.polar, STALL, math.radians(beta_deg), 2.4)
    assert va == pytest.approx(expected, abs=2e-3)


def test_level_speed_is_level(model: FlightModel):
    """Level speed zeroes the flight-path rate of the airborne model."""
    beta = math.radians(10.0)
    va = level_speed(model.aircraft, model.env, model.polar, STALL, beta, model.tether.length)
    assert va is not None
    _, beta_dot, _, gamma_dot, _ = model.airborne_rates(beta, va, 0.0, STALL, 0.0, 0.0)
    assert beta_dot == 0.0
    assert abs(gamma_dot) <= 1e-9


def test_level_speed_beyond_beta_max(setup: RunSetup):
    limit = beta_max(setup.aircraft, setup.env, setup.polar, STALL, 2.4)
    args = (setup.aircraft, setup.env, setup.polar, STALL)
    assert level_speed(*args, limit + 1e-6, 2.4) is None
    assert level_speed(*args, limit + 1e-6, 2.4, balance="high_speed") is None
    assert level_speed(*args, limit - 1e-3, 2.4, balance="high_speed") == math.inf
    assert level_speed(*args, limit - 1e-3, 2.4) > 50.0


def test_thrust_balance_is_slower(setup: RunSetup):
    args = (setup.aircraft, setup.env, setup.polar, STALL, math.radians(5.0), 2.4)
    full = level_speed(*args)
    thrust = level_speed(*args, balance="thrust")
    assert full is not None and thrust is not None
    assert thrust < full


def test_grid_boundary_approaches_beta_max(setup: RunSetup):
    query = EnvelopeQuery.from_degrees([2.4, 4.8], list(np.arange(0.0, 60.0, 0.01)), [9.0])
    frame = level_speed_grid(setup.aircraft, setup.env, setup.polar, query)[query.alphas[0]]
    assert list(frame.columns) == ENVELOPE_COLUMNS
    assert frame.loc[frame["feasible"] == 0, "va"].isna().all()
    boundary = feasibility_boundary(frame)
    for r, edge in boundary.items():
        limit = math.degrees(beta_max(setup.aircraft, setup.env, setup.polar, STALL, r))
        assert limit - 0.01 <= edge < limit


def test_grid_shape(setup: RunSetup):
    frames = level_speed_grid(setup.aircraft, setup.env, setup.polar, setup.envelope)
    assert set(frames) == set(setup.envelope.alphas)
    for frame in frames.values():
        assert len(frame) == len(setup.envelope.radii) * len(setup.envelope.betas)


def test_beta_max_table(setup: RunSetup):
    table = beta_max_table(setup.aircraft, setup.env, setup.polar, setup.envelope)
    assert list(table.columns) == ["alpha_deg", "r", "beta_max_deg"]
    assert len(table) == len(setup.envelope.alphas) * len(setup.envelope.radii)
    row = table[(table["alpha_deg"].round(6) == 9.0) & (table["r"] == 2.4)].iloc[0]
    assert row["beta_max_deg"] == pytest.approx(18.7131, abs=1e-3)


@pytest.mark.parametrize(
    "radii, betas, alphas",
    [
        ((), (0.0,), (0.0,)),
        ((0.0, 1.0), (0.0,), (0.0,)),
        ((2.4,), (0.2, 0.1), (0.0,)),
        ((2.4,), (0.0, 1.6), (0.0,)),
        ((2.4,), (0.0,), ()),
    ],
)
def test_query_validation(radii, betas, alphas):
    with pytest.raises(ValidationError):
        EnvelopeQuery(radii=radii, betas=betas, alphas=alphas)
