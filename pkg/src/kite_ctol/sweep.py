"""Parameter sweeps: one full scenario per value of a numeric config key."""

import multiprocessing
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple, Union

import pandas as pd
from loguru import logger

from .config import RunConfig, RunSetup, apply_override, dump_config, parse_config
from .errors import KiteCtolError
from .supervisor import (
    SCENARIO_ORDER,
    PhaseId,
    ScenarioResult,
    run_scenario,
    synthesize_designs,
)
from .synthesis import LqrDesign
from .telemetry import write_frame, write_telemetry

SUMMARY_PHASES = [phase for phase in SCENARIO_ORDER if phase is not PhaseId.REST]


def simulate(config: RunConfig) -> Tuple[RunSetup, Dict[PhaseId, LqrDesign], ScenarioResult]:
    """Build the model, synthesize the LQR designs and run the scenario of ``config``."""
    setup = config.build_model()
    designs = synthesize_designs(setup.model, setup.lqr)
    result = run_scenario(
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
    return setup, designs, result


def _run_point(config_text: str, key: str, value: float, index: int, out_dir: str) -> Dict[str, Any]:
    """Run one sweep point. Config travels as YAML text so workers rebuild their own stack."""
    row: Dict[str, Any] = {"index": index, "key": key, "value": value}
    try:
        config = apply_override(parse_config(config_text), key, value)
        _, _, result = simulate(config)
    except KiteCtolError as exc:
        logger.warning("sweep point {}={} failed: {}", key, value, exc)
        row.update(exit_reason="error", stuck_phase="", final_time=float("nan"), error=str(exc))
        return row
    if result.telemetry:
        write_telemetry(result.telemetry, Path(out_dir) / f"telemetry_{index}.csv")
    row.update(
        exit_reason=result.exit_reason.value,
        stuck_phase=result.stuck_phase.value if result.stuck_phase else "",
        final_time=result.phase_log[-1].exit if result.phase_log else 0.0,
        error=str(result.error) if result.error else "",
    )
    for phase in SUMMARY_PHASES:
        entry = result.entry_for(phase)
        row[f"duration_{phase.value}"] = entry.duration if entry else float("nan")
    return row


def run_sweep(
    config: RunConfig,
    key: str,
    values: Sequence[float],
    out_dir: Union[str, Path],
    workers: int = 1,
) -> pd.DataFrame:
    """Run one scenario per value of ``key`` and write ``summary.csv``.

    Args:
        config (RunConfig): Base configuration.
        key (str): Dotted numeric key, e.g. ``aircraft.mass``.
        values (Sequence[float]): Values to sweep.
        out_dir (Union[str, Path]): Directory for ``telemetry_<i>.csv`` and ``summary.csv``.
        workers (int, optional): Worker processes; 1 runs sequentially. Defaults to 1.

    Returns:
        pd.DataFrame: One summary row per value, in input order.

    Raises:
        ConfigError: If ``key`` is not a numeric entry of the configuration.
    """
    if not values:
        raise ValueError("a sweep needs at least one value")
    # reject bad keys before any worker starts
    apply_override(config, key, values[0])
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    text = dump_config(config)
    tasks = [(text, key, float(value), index, str(out)) for index, value in enumerate(values)]
    logger.info(
        "sweeping {} over {} values with {}",
        key, len(values), "1 process" if workers == 1 else f"{workers} processes",
    )
    if workers == 1:
        rows: List[Dict[str, Any]] = [_run_point(*task) for task in tasks]
    else:
        with multiprocessing.Pool(processes=workers) as pool:
            rows = pool.starmap(_run_point, tasks)
    summary = pd.DataFrame(rows)
    write_frame(summary, out / "summary.csv")
    return summary
