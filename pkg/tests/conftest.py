import pytest
from typing import Dict

from kite_ctol.config import RunConfig, RunSetup, load_default_config
from kite_ctol.dynamics import FlightModel
from kite_ctol.supervisor import PhaseId, ScenarioResult, run_scenario, synthesize_designs
from kite_ctol.synthesis import LqrDesign


@pytest.fixture(scope="session")
def default_config() -> RunConfig:
    return load_default_config()


@pytest.fixture(scope="session")
def setup(default_config: RunConfig) -> RunSetup:
    return default_config.build_model()


@pytest.fixture(scope="session")
def model(setup: RunSetup) -> FlightModel:
    return setup.model


@pytest.fixture(scope="session")
def designs(setup: RunSetup) -> Dict[PhaseId, LqrDesign]:
    return synthesize_designs(setup.model, setup.lqr)


@pytest.fixture(scope="session")
def scenario(setup: RunSetup, designs: Dict[PhaseId, LqrDesign]) -> ScenarioResult:
    """The default take-off, loiter and landing run, shared by the scenario tests."""
    return run_scenario(
        setup.scenario,
        setup.aircraft,
        setup.env,
        setup.polar,
        setup.tether,
        setup.sim,
        setup.gains,
        designs,
        setup.params,
    )
