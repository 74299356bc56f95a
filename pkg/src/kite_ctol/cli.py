import math
import sys
from pathlib import Path
from typing import Annotated, List, NoReturn, Optional

import typer
from loguru import logger

from .checks import run_checks
from .config import RunConfig, apply_override, load_config, load_default_config
from .envelope import Balance, beta_max_table, level_speed_grid
from .errors import ExitCode, KiteCtolError, ScenarioTimeoutError
from .settings import get_settings
from .simkernel import ExitReason
from .supervisor import phase_report, synthesize_designs
from .sweep import run_sweep, simulate
from .telemetry import format_design, write_designs, write_frame, write_telemetry
from .version import APP_NAME, VERSION

app = typer.Typer(help="Circular take-off and landing simulator for tethered aircraft.")

ConfigOption = Annotated[
    Optional[Path], typer.Option("--config", help="Run configuration (YAML). Defaults to the shipped one.")
]
OutOption = Annotated[
    Optional[Path], typer.Option("--out", help="Output directory. Defaults to KITE_CTOL_OUTPUT_DIR.")
]


def _configure_logging(out: Optional[Path] = None) -> None:
    logger.remove()
    logger.add(sys.stderr, level=get_settings().LOG_LEVEL)
    if out is not None:
        logger.add(out / "run.log", level="DEBUG", mode="w")


def _fail(exc: KiteCtolError) -> NoReturn:
    typer.echo(typer.style(f"{type(exc).__name__}: {exc}", fg=typer.colors.RED, bold=True), err=True)
    raise typer.Exit(int(exc.exit_code))


def _output_dir(out: Optional[Path]) -> Path:
    directory = out if out is not None else Path(get_settings().OUTPUT_DIR)
    directory.mkdir(parents=True, exist_ok=True)
    return directory


def _load(config: Optional[Path], dt: Optional[float] = None, land_at: Optional[float] = None) -> RunConfig:
    loaded = load_config(config) if config is not None else load_default_config()
    if dt is not None:
        loaded = apply_override(loaded, "sim.dt", dt)
    if land_at is not None:
        loaded = apply_override(loaded, "scenario.landing_time", land_at)
    return loaded


def _report_checks(config: Optional[Path]) -> int:
    try:
        setup = _load(config).build_model()
    except KiteCtolError as exc:
        _fail(exc)
    results = run_checks(setup)
    for result in results:
        color = {"PASS": typer.colors.GREEN, "FAIL": typer.colors.RED, "INFO": typer.colors.YELLOW}[result.label]
        typer.echo(f"{typer.style(result.label, fg=color, bold=True)} {result.name}: {result.detail}")
    failed = any(not r.passed and not r.informational for r in results)
    return int(ExitCode.CHECK_FAILED if failed else ExitCode.OK)


@app.callback(invoke_without_command=True)
def main(
    ctx: typer.Context,
    seed_check: Annotated[
        bool, typer.Option("--seed-check", help="Run the invariant suite and exit.")
    ] = False,
    config: ConfigOption = None,
) -> None:
    """
    Simulate the take-off, loiter and landing of a tethered aircraft.
    """
    if seed_check:
        _configure_logging()
        raise typer.Exit(_report_checks(config))
    if ctx.invoked_subcommand is None:
        typer.echo(ctx.get_help())


@app.command("run")
def run_scenario_command(
    config: ConfigOption = None,
    out: OutOption = None,
    dt: Annotated[Optional[float], typer.Option("--dt", help="Integration step [s].")] = None,
    land_at: Annotated[
        Optional[float], typer.Option("--land-at", help="Landing command time [s].")
    ] = None,
):
    """
    Run the full scenario and write telemetry.csv, phases.csv and the LQR design dumps.
    """
    directory = _output_dir(out)
    _configure_logging(directory)
    try:
        setup, designs, result = simulate(_load(config, dt, land_at))
    except KiteCtolError as exc:
        _fail(exc)

    if result.telemetry:
        write_telemetry(result.telemetry, directory / "telemetry.csv")
    write_frame(phase_report(result), directory / "phases.csv")
    write_designs(designs, directory)

    for entry in result.phase_log:
        typer.echo(f"{entry.phase.value:>4}  {entry.entry:8.3f} -> {entry.exit:8.3f} s")
    if result.slack_count:
        typer.echo(typer.style(f"{result.slack_count} slack-tether records", fg=typer.colors.YELLOW))

    if result.exit_reason is ExitReason.TIMEOUT:
        stuck = result.stuck_phase.value if result.stuck_phase else "?"
        _fail(ScenarioTimeoutError(stuck, result.phase_log[-1].exit if result.phase_log else 0.0))
    if result.exit_reason is ExitReason.DYNAMICS_ERROR and result.error is not None:
        _fail(result.error)
    typer.echo(typer.style("Scenario complete", fg=typer.colors.GREEN, bold=True))


@app.command()
def linearize(config: ConfigOption = None, out: OutOption = None):
    """
    Print (and, with --out, write) A, B, K, P and closed-loop modes of the LQR phases.
    """
    _configure_logging(out)
    try:
        setup = _load(config).build_model()
        designs = synthesize_designs(setup.model, setup.lqr)
    except KiteCtolError as exc:
        _fail(exc)
    for design in designs.values():
        typer.echo(format_design(design))
    if out is not None:
        write_designs(designs, _output_dir(out))


@app.command()
def envelope(
    config: ConfigOption = None,
    out: OutOption = None,
    balance: Annotated[
        Optional[str], typer.Option("--balance", help="full, thrust or high_speed.")
    ] = None,
):
    """
    Write the level-speed grid per angle of attack and the beta_max summary.
    """
    directory = _output_dir(out)
    _configure_logging(directory)
    try:
        setup = _load(config).build_model()
    except KiteCtolError as exc:
        _fail(exc)
    chosen = balance or setup.balance
    if chosen not in ("full", "thrust", "high_speed"):
        typer.echo(typer.style(f"unknown balance {chosen!r}", fg=typer.colors.RED, bold=True), err=True)
        raise typer.Exit(int(ExitCode.CONFIG_ERROR))
    mode: Balance = chosen  # type: ignore[assignment]
    frames = level_speed_grid(setup.aircraft, setup.env, setup.polar, setup.envelope, mode)
    for alpha, frame in frames.items():
        write_frame(frame, directory / f"envelope_alpha_{math.degrees(alpha):g}.csv")
    write_frame(
        beta_max_table(setup.aircraft, setup.env, setup.polar, setup.envelope),
        directory / "envelope_summary.csv",
    )


@app.command()
def sweep(
    key: Annotated[str, typer.Option("--key", help="Dotted numeric config key.")],
    values: Annotated[str, typer.Option("--values", help="Comma-separated values.")],
    config: ConfigOption = None,
    out: OutOption = None,
    workers: Annotated[Optional[int], typer.Option("--workers", min=1)] = None,
):
    """
    Run one scenario per value and write telemetry_<i>.csv plus summary.csv.
    """
    directory = _output_dir(out)
    _configure_logging(directory)
    try:
        parsed: List[float] = [float(v) for v in values.split(",") if v.strip()]
        if not parsed:
            raise ValueError(values)
    except ValueError:
        typer.echo(typer.style(f"invalid values {values!r}", fg=typer.colors.RED, bold=True), err=True)
        raise typer.Exit(int(ExitCode.CONFIG_ERROR))
    try:
        summary = run_sweep(
            _load(config), key, parsed, directory, workers or get_settings().SWEEP_WORKERS
        )
    except KiteCtolError as exc:
        _fail(exc)
    typer.echo(summary.to_string(index=False))


@app.command()
def version():
    """
    Print the version of the kite-ctol CLI.
    """

    typer.echo(f"{APP_NAME} version: {VERSION}")


def run():
    app()


if __name__ == "__main__":
    app()
