# settings.py

from pydantic_settings import BaseSettings


class KiteCtolSettings(BaseSettings):
    LOG_LEVEL: str = "INFO"
    OUTPUT_DIR: str = "runs"
    SWEEP_WORKERS: int = 1

    model_config = {"env_prefix": "KITE_CTOL_", "env_file": ".env", "extra": "ignore"}


def get_settings() -> KiteCtolSettings:
    """Read the settings from the environment (and ``.env``) at call time."""
    return KiteCtolSettings()
