import math
from typing import Dict

import pytest

from kite_ctol.checks import CheckResult, rotation_margins, run_checks
from kite_ctol.config import RunSetup
from kite_ctol.dynamics import FlightModel
from kite_ctol.supervisor import PhaseId
from kite_ctol.synthesis import LqrDesign


def test_invariant_suite_passes(setup: RunSetup, designs: Dict[PhaseId, LqrDesign]):
    results = run_checks(setup, designs)
    failed = [r for r in results if r.label == "FAIL"]
    assert failed == [], [f"{r.name}: {r.detail}" for r in failed]
    names = {r.name for r in results}
    assert {"CARE certificate P3", "CARE certificate P4", "CARE certificate P6"} <= names
    assert "loiter jacobian" in names


def test_rotation_margins(model: FlightModel):
    """At the rotation speed lift stays just short of the weight, even at the stall angle."""
    margins = rotation_margins(model, 7.98, math.radians(9.0))
    assert margins.stall == pytest.approx(3.146 - 3.43, abs=2e-3)
    assert margins.steady < margins.stall < 0.0
    assert margins.stall_with_thrust - margins.stall == pytest.approx(1.5 * math.sin(math.radians(9.0)))


def test_check_labels():
    assert CheckResult("a", True, "").label == "PASS"
    assert CheckResult("a", False, "").label == "FAIL"
    assert CheckResult("a", False, "", informational=True).label == "INFO"
