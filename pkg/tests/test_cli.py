from pathlib import Path

import pandas as pd
import pytest
from typer.testing import CliRunner

from kite_ctol.cli import app
from kite_ctol.config import RunConfig, apply_override, dump_config
from kite_ctol.errors import ConfigError, ExitCode
from kite_ctol.settings import get_settings
from kite_ctol.sweep import run_sweep

runner = CliRunner()


@pytest.fixture
def short_config(tmp_path: Path, default_config: RunConfig) -> Path:
    """The default run cut off after one second, still inside the ground roll."""
    path = tmp_path / "short.yaml"
    path.write_text(dump_config(apply_override(default_config, "sim.max_time", 1.0)), encoding="utf-8")
    return path


def test_version():
    result = runner.invoke(app, ["version"])
    assert result.exit_code == 0
    assert "kite-ctol version" in result.stdout


def test_no_command_prints_help():
    result = runner.invoke(app, [])
    assert result.exit_code == 0
    assert "envelope" in result.stdout


def test_seed_check_passes():
    result = runner.invoke(app, ["--seed-check"])
    assert result.exit_code == int(ExitCode.OK), result.stdout
    assert "FAIL" not in result.stdout


def test_bad_config_exit_code(tmp_path: Path):
    path = tmp_path / "bad.yaml"
    path.write_text("aircraft:\n  colour: red\n", encoding="utf-8")
    result = runner.invoke(app, ["linearize", "--config", str(path)])
    assert result.exit_code == int(ExitCode.CONFIG_ERROR)


def test_linearize():
    result = runner.invoke(app, ["linearize"])
    assert result.exit_code == 0
    assert "K[thrust,beta]" in result.stdout
    assert "phase = P6" in result.stdout


def test_envelope(tmp_path: Path):
    result = runner.invoke(app, ["envelope", "--out", str(tmp_path)])
    assert result.exit_code == 0
    assert (tmp_path / "envelope_alpha_0.csv").exists()
    assert (tmp_path / "envelope_alpha_9.csv").exists()
    summary = pd.read_csv(tmp_path / "envelope_summary.csv")
    assert list(summary.columns) == ["alpha_deg", "r", "beta_max_deg"]


def test_envelope_unknown_balance(tmp_path: Path):
    result = runner.invoke(app, ["envelope", "--out", str(tmp_path), "--balance", "sideways"])
    assert result.exit_code == int(ExitCode.CONFIG_ERROR)


def test_run_timeout_still_writes_telemetry(tmp_path: Path, short_config: Path):
    out = tmp_path / "run"
    result = runner.invoke(app, ["run", "--config", str(short_config), "--out", str(out)])
    assert result.exit_code == int(ExitCode.SCENARIO_TIMEOUT)
    telemetry = pd.read_csv(out / "telemetry.csv")
    assert set(telemetry["phase"]) <= {"Rest", "P1"}
    assert telemetry["t"].max() < 1.0
    assert (out / "phases.csv").exists()
    assert (out / "design_P4.txt").exists()
    assert (out / "run.log").exists()


def test_sweep(tmp_path: Path, short_config: Path):
    result = runner.invoke(
        app,
        ["sweep", "--key", "aircraft.mass", "--values", "0.35,0.4", "--config", str(short_config),
         "--out", str(tmp_path)],
    )
    assert result.exit_code == 0
    summary = pd.read_csv(tmp_path / "summary.csv")
    assert list(summary["value"]) == [0.35, 0.4]
    assert set(summary["exit_reason"]) == {"timeout"}
    assert (tmp_path / "telemetry_0.csv").exists()
    assert (tmp_path / "telemetry_1.csv").exists()


def test_sweep_bad_key(tmp_path: Path):
    result = runner.invoke(
        app, ["sweep", "--key", "aircraft.colour", "--values", "1", "--out", str(tmp_path)]
    )
    assert result.exit_code == int(ExitCode.CONFIG_ERROR)


def test_sweep_bad_values(tmp_path: Path):
    result = runner.invoke(app, ["sweep", "--key", "sim.dt", "--values", "a,b", "--out", str(tmp_path)])
    assert result.exit_code == int(ExitCode.CONFIG_ERROR)


def test_run_sweep_rejects_invalid_points(tmp_path: Path, default_config: RunConfig):
    short = apply_override(default_config, "sim.max_time", 0.5)
    summary = run_sweep(short, "aircraft.mass", [0.35, -1.0], tmp_path)
    assert list(summary["exit_reason"]) == ["timeout", "error"]
    with pytest.raises(ValueError):
        run_sweep(short, "aircraft.mass", [], tmp_path)
    with pytest.raises(ConfigError):
        run_sweep(short, "aircraft.nope", [1.0], tmp_path)


def test_settings_from_environment(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.setenv("KITE_CTOL_SWEEP_WORKERS", "3")
    monkeypatch.setenv("KITE_CTOL_LOG_LEVEL", "DEBUG")
    settings = get_settings()
    assert settings.SWEEP_WORKERS == 3
    assert settings.LOG_LEVEL == "DEBUG"
    assert settings.OUTPUT_DIR == "runs"
