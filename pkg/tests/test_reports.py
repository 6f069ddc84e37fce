from __future__ import annotations

import xml.etree.ElementTree as ET

import numpy as np
import pytest

from src.models.enums import POSE_AXES
from src.models.simulation import SimRecord
from src.reports.csv_log import CSV_COLUMNS, read_csv, record_row, write_csv
from src.reports.plots import render_plots


def _records(rng: np.random.Generator, count: int = 25) -> list[SimRecord]:
    return [
        SimRecord(
            t=0.01 * k,
            xi_true=rng.normal(size=12),
            xi_des=rng.normal(size=12),
            xhat=rng.normal(size=12),
            z=rng.normal(size=12),
            u=rng.normal(size=6),
            F=rng.normal(size=6),
            e_l=float(rng.uniform(1e-4, 1e-2)),
            e_t=float(rng.uniform(1e-3, 1e-1)),
            e_cs=float(rng.uniform(1e-3, 1e-1)),
        )
        for k in range(count)
    ]


def _ids(path) -> dict[str, ET.Element]:
    root = ET.parse(path).getroot()
    return {el.get("id"): el for el in root.iter() if el.get("id")}


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

def test_csv_schema():
    assert len(CSV_COLUMNS) == 58
    assert CSV_COLUMNS[:2] == ("t", "q_true_x")
    assert "qd_true_psi_dot" in CSV_COLUMNS
    assert "xhat_theta_dot" in CSV_COLUMNS
    assert CSV_COLUMNS[-9:] == ("F1", "F2", "F3", "F4", "F5", "F6", "e_l", "e_t", "e_cs")


def test_csv_round_trip_is_exact(tmp_path, rng):
    records = _records(rng)
    path = write_csv(records, tmp_path / "nested" / "run.csv")

    header, table = read_csv(path)

    assert header == list(CSV_COLUMNS)
    assert table.shape == (25, 58)
    np.testing.assert_array_equal(table, np.array([record_row(r) for r in records]))
    assert table[0, 0] == 0.0


def test_csv_is_newline_terminated(tmp_path, rng):
    path = write_csv(_records(rng, 3), tmp_path / "run.csv")
    text = path.read_text()

    assert text.endswith("\n")
    assert "\r" not in text
    assert len(text.splitlines()) == 4


def test_empty_records_rejected(tmp_path):
    with pytest.raises(ValueError):
        write_csv([], tmp_path / "run.csv")
    with pytest.raises(ValueError):
        render_plots([], tmp_path)


# ---------------------------------------------------------------------------
# Plots
# ---------------------------------------------------------------------------

def test_plots_are_written(tmp_path, rng):
    paths = render_plots(_records(rng), tmp_path / "plots")

    assert [p.name for p in paths] == ["positions.svg", "forces.svg", "errors.svg"]
    for path in paths:
        assert ET.parse(path).getroot().tag.endswith("svg")


def test_plot_series_ids(tmp_path, rng):
    positions, forces, errors = render_plots(_records(rng), tmp_path)

    position_ids = {i for i in _ids(positions) if i.startswith("positions-")}
    assert position_ids == {
        f"positions-{axis}-{kind}"
        for axis in POSE_AXES
        for kind in ("true", "estimated", "desired")
    }
    assert {i for i in _ids(forces) if i.startswith("force-")} == {f"force-F{i}" for i in range(1, 7)}
    assert {"errors-e_l", "errors-e_t", "errors-e_cs"} <= set(_ids(errors))


def test_error_annotation_matches_csv(tmp_path, rng):
    records = _records(rng)
    _, table = read_csv(write_csv(records, tmp_path / "run.csv"))
    errors = render_plots(records, tmp_path)[2]

    label = "".join(_ids(errors)["errors-final-e_l"].itertext()).strip()

    assert float(label) == table[-1, CSV_COLUMNS.index("e_l")]


def test_plots_are_reproducible(tmp_path, rng):
    records = _records(rng)
    first = render_plots(records, tmp_path / "a")
    second = render_plots(records, tmp_path / "b")

    for a, b in zip(first, second):
        assert a.read_bytes() == b.read_bytes()
