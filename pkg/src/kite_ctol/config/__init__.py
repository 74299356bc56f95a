from ._loader import (
    DEFAULT_CONFIG_NAME,
    apply_override,
    default_config_text,
    dump_config,
    load_config,
    load_default_config,
    parse_config,
    validate_document,
)
from ._schema import (
    AeroSection,
    AircraftSection,
    ControllersSection,
    EnvelopeSection,
    EnvSection,
    LimitsSection,
    LqrSection,
    PhasesSection,
    RunConfig,
    RunSetup,
    ScenarioSection,
    SimSection,
    TetherSection,
)

__all__ = [
    "DEFAULT_CONFIG_NAME",
    "apply_override",
    "default_config_text",
    "dump_config",
    "load_config",
    "load_default_config",
    "parse_config",
    "validate_document",
    "AeroSection",
    "AircraftSection",
    "ControllersSection",
    "EnvelopeSection",
    "EnvSection",
    "LimitsSection",
    "LqrSection",
    "PhasesSection",
    "RunConfig",
    "RunSetup",
    "ScenarioSection",
    "SimSection",
    "TetherSection",
]
