from __future__ import annotations

import csv
import logging
from collections.abc import Sequence
from pathlib import Path

import numpy as np

from src.models.enums import POSE_AXES
from src.models.simulation import SimRecord

logger = logging.getLogger(__name__)

_RATE_AXES = tuple(f"{axis}_dot" for axis in POSE_AXES)
_MEASUREMENT_NAMES = (
    "s1", "s2", "s3", "s4", "s5", "s6", "phi", "theta", "psi", "wx", "wy", "wz",
)

CSV_COLUMNS: tuple[str, ...] = (
    ("t",)
    + tuple(f"q_true_{a}" for a in POSE_AXES)
    + tuple(f"qd_true_{a}" for a in _RATE_AXES)
    + tuple(f"q_des_{a}" for a in POSE_AXES)
    + tuple(f"xhat_{a}" for a in POSE_AXES + _RATE_AXES)
    + tuple(f"z_{m}" for m in _MEASUREMENT_NAMES)
    + tuple(f"u_{a}" for a in POSE_AXES)
    + tuple(f"F{i}" for i in range(1, 7))
    + ("e_l", "e_t", "e_cs")
)


def record_row(record: SimRecord) -> np.ndarray:
    return np.concatenate(
        [
            [record.t],
            record.xi_true[:6],
            record.xi_true[6:],
            record.xi_des[:6],
            record.xhat,
            record.z,
            record.u,
            record.F,
            [record.e_l, record.e_t, record.e_cs],
        ]
    )


def write_csv(records: Sequence[SimRecord], path: str | Path) -> Path:
    if not records:
        raise ValueError("Cannot write an empty record stream")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for record in records:
            writer.writerow(f"{value:.17g}" for value in record_row(record))
    logger.info("Wrote %d rows to %s", len(records), path)
    return path


def read_csv(path: str | Path) -> tuple[list[str], np.ndarray]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(value) for value in row] for row in reader]
    return header, np.asarray(rows, dtype=float).reshape(-1, len(header))
