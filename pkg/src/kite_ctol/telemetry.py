"""Plain-text artifacts: telemetry CSV, phase report and design dumps."""

import csv
import io
import math
from pathlib import Path
from typing import IO, Iterable, List, Mapping, Sequence, Union

import numpy as np
import pandas as pd
from loguru import logger

from .simkernel import TelemetryRecord
from .synthesis import CONTROL_NAMES, STATE_NAMES, LqrDesign

TELEMETRY_HEADER = (
    "t",
    "phase",
    "phi_deg",
    "beta_deg",
    "h",
    "va",
    "gamma_deg",
    "theta_deg",
    "alpha_deg",
    "fp",
    "omega_q_degs",
    "fl",
    "fd",
    "ft",
    "grounded",
)

Destination = Union[str, Path, IO[str]]


def telemetry_row(record: TelemetryRecord) -> List[Union[str, float, int]]:
    deg = math.degrees
    return [
        record.t,
        record.phase,
        deg(record.phi),
        deg(record.beta),
        record.height,
        record.airspeed,
        deg(record.gamma),
        deg(record.theta),
        deg(record.alpha),
        record.thrust,
        deg(record.pitch_rate),
        record.lift,
        record.drag,
        record.tension,
        int(record.grounded),
    ]


def format_telemetry(records: Sequence[TelemetryRecord]) -> str:
    """Render records as CSV; floats use their shortest round-trip form."""
    if not records:
        raise ValueError("no telemetry records to write")
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(TELEMETRY_HEADER)
    for record in records:
        writer.writerow(telemetry_row(record))
    return buffer.getvalue()


def write_telemetry(records: Sequence[TelemetryRecord], destination: Destination) -> int:
    """Write telemetry CSV to a path or an open text stream.

    Returns:
        int: Number of bytes written (UTF-8).

    Raises:
        ValueError: If ``records`` is empty.
        OSError: If the destination cannot be written.
    """
    text = format_telemetry(records)
    if isinstance(destination, (str, Path)):
        path = Path(destination)
        with path.open("w", encoding="utf-8", newline="") as f:
            f.write(text)
        logger.info("wrote {} telemetry rows to {}", len(records), path)
    else:
        destination.write(text)
    return len(text.encode("utf-8"))


def write_frame(frame: pd.DataFrame, path: Union[str, Path]) -> int:
    text = frame.to_csv(index=False, lineterminator="\n")
    Path(path).write_text(text, encoding="utf-8")
    logger.info("wrote {}", path)
    return len(text.encode("utf-8"))


def _matrix_lines(name: str, matrix: np.ndarray, rows: Sequence[str], columns: Sequence[str]) -> Iterable[str]:
    for i, row in enumerate(rows):
        for j, column in enumerate(columns):
            yield f"{name}[{row},{column}] = {float(matrix[i, j])!r}"


def format_design(design: LqrDesign) -> str:
    """Key-value dump of one LQR design: operating point, A, B, K, P and closed-loop modes."""
    point = design.point
    lines = [
        f"phase = {design.phase}",
        "x_ref = " + ", ".join(repr(float(v)) for v in point.x_ref),
        "u_ref = " + ", ".join(repr(float(v)) for v in point.u_ref),
        f"trim_residual = {point.residual!r}",
        f"trim_feasible = {str(point.feasible).lower()}",
        f"care_residual = {design.care.residual!r}",
        f"spectral_abscissa = {design.spectral_abscissa!r}",
    ]
    lines += _matrix_lines("A", design.linear_model.A, STATE_NAMES, STATE_NAMES)
    lines += _matrix_lines("B", design.linear_model.B, STATE_NAMES, CONTROL_NAMES)
    lines += _matrix_lines("K", design.K, CONTROL_NAMES, STATE_NAMES)
    lines += _matrix_lines("P", design.P, STATE_NAMES, STATE_NAMES)
    for index, mode in enumerate(design.closed_loop_modes()):
        imag = mode.eigenvalue.imag
        sign = "-" if imag < 0 else "+"
        lines.append(
            f"mode[{index}] = {mode.eigenvalue.real!r} {sign} {abs(imag)!r}j"
            f" damping={mode.damping_ratio!r} tau={mode.time_constant!r}"
        )
    return "\n".join(lines) + "\n"


def write_designs(designs: Mapping[object, LqrDesign], directory: Union[str, Path]) -> List[Path]:
    """Write ``design_<phase>.txt`` per design into ``directory``."""
    directory = Path(directory)
    written: List[Path] = []
    for design in designs.values():
        path = directory / f"design_{design.phase}.txt"
        path.write_text(format_design(design), encoding="utf-8")
        written.append(path)
        logger.info("wrote {}", path)
    return written
