"""
CSV output helpers for the flock command.

Every file has a fixed header from ``CsvSchemas`` and prints floats with 17
significant digits so values read back exactly. Line endings are always
``\\n`` so reruns produce byte-identical files on every platform.
"""

import csv
from pathlib import Path
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .constants import CsvSchemas


def format_value(value) -> str:
    """Render one cell; floats use the lossless format, None is empty."""
    if value is None:
        return ''
    if isinstance(value, (float, np.floating)):
        return format(float(value), CsvSchemas.FLOAT_FORMAT)
    return str(value)


class CsvWriter:
    """Schema-stable writers for each output file."""

    @staticmethod
    def write(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
        """
        Write header and rows, replacing any existing file.

        Args:
            path: destination file
            header: column names
            rows: row sequences, same length as the header

        Returns:
            The path written
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', newline='') as fh:
            writer = csv.writer(fh, lineterminator='\n')
            writer.writerow(header)
            for row in rows:
                writer.writerow([format_value(cell) for cell in row])
        return path

    @staticmethod
    def write_trajectory(directory: Path, log) -> Path:
        rows = (
            (t, agent, s.x, s.y, s.v, s.theta, s.omega)
            for t, snapshot in zip(log.times, log.states)
            for agent, s in enumerate(snapshot)
        )
        return CsvWriter.write(Path(directory) / CsvSchemas.TRAJECTORY_FILE, CsvSchemas.TRAJECTORY, rows)

    @staticmethod
    def write_metrics(directory: Path, log) -> Path:
        rows = ((m.t, m.speed_spread, m.heading_spread) for m in log.metrics)
        return CsvWriter.write(Path(directory) / CsvSchemas.METRICS_FILE, CsvSchemas.METRICS, rows)

    @staticmethod
    def write_sweep_summary(directory: Path, rows: List[Sequence]) -> Path:
        return CsvWriter.write(
            Path(directory) / CsvSchemas.SWEEP_SUMMARY_FILE, CsvSchemas.SWEEP_SUMMARY, rows
        )

    @staticmethod
    def write_oscillation(directory: Path, estimate) -> Path:
        rows = zip(estimate.pair_times, estimate.zeta_seq, estimate.omega_n_seq)
        return CsvWriter.write(
            Path(directory) / CsvSchemas.OSCILLATION_FILE, CsvSchemas.OSCILLATION, rows
        )

    @staticmethod
    def write_profile(directory: Path, profile: np.ndarray) -> Path:
        rows = ((float(bearing), float(mag)) for bearing, mag in profile)
        return CsvWriter.write(Path(directory) / CsvSchemas.PROFILE_FILE, CsvSchemas.PROFILE, rows)


def read_trajectory_rows(path: Path) -> List[dict]:
    """
    Rows of a trajectory CSV with numeric fields parsed.

    Raises:
        ValueError: if the header does not match the trajectory schema
    """
    with open(path, newline='') as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CsvSchemas.TRAJECTORY:
            raise ValueError(
                f"{path} is not a trajectory file: header {reader.fieldnames!r}"
            )
        rows = []
        for row in reader:
            parsed = {key: float(value) for key, value in row.items()}
            parsed['agent'] = int(parsed['agent'])
            rows.append(parsed)
    return rows


def column(rows: List[dict], agent: int, field: str) -> Optional[np.ndarray]:
    """One agent's column from parsed trajectory rows, None if the agent is absent."""
    values = [row[field] for row in rows if row['agent'] == agent]
    return np.array(values) if values else None
