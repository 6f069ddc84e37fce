from __future__ import annotations

from pathlib import Path

import pytest

from src.schemas.loader import apply_overrides
from src.schemas.sim_config import SimConfig
from src.services.exceptions import ConfigValidationError, SimulationError
from src.services.simulation import run_closed_loop
from src.workers.sweep import SeedSweep, parse_seed_range, seed_csv_path


@pytest.fixture()
def short_config() -> SimConfig:
    return apply_overrides(SimConfig(), run={"scenario": "hold", "duration": 0.05})


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def test_parse_seed_range():
    assert parse_seed_range("3..7") == [3, 4, 5, 6, 7]
    assert parse_seed_range(" 4 .. 4 ") == [4]


@pytest.mark.parametrize("text", ["3-7", "..7", "a..b", "7..3"])
def test_parse_seed_range_rejects(text):
    with pytest.raises(ConfigValidationError) as exc_info:
        parse_seed_range(text)
    assert exc_info.value.key == "seeds"


def test_seed_csv_path():
    assert seed_csv_path(Path("out/run.csv"), 4) == Path("out/run-seed4.csv")
    assert seed_csv_path(Path("out/run"), 4) == Path("out/run-seed4.csv")


# ---------------------------------------------------------------------------
# Sweep
# ---------------------------------------------------------------------------

@pytest.mark.asyncio
async def test_sweep_runs_every_seed(short_config, tmp_path):
    sweep = SeedSweep(short_config, short_config.run.build(), tmp_path / "run.csv", max_workers=2)

    results = await sweep.run([1, 2, 3])

    assert [r.seed for r in results] == [1, 2, 3]
    assert all(r.ok for r in results)
    assert all(r.csv_path.exists() for r in results)
    assert len({r.e_l for r in results}) == 3


@pytest.mark.asyncio
async def test_sweep_matches_single_run(short_config, tmp_path):
    results = await SeedSweep(short_config, short_config.run.build(), tmp_path / "run.csv").run([8])

    config = apply_overrides(short_config, noise={"seed": 8})
    expected = run_closed_loop(config.run.build(), config)[-1]
    assert results[0].e_l == expected.e_l
    assert results[0].e_t == expected.e_t


@pytest.mark.asyncio
async def test_sweep_reports_failures(short_config, tmp_path, monkeypatch):
    def flaky(scenario, config):
        if config.noise.seed == 2:
            raise SimulationError("Step 0: singular", step=0)
        return run_closed_loop(scenario, config)

    monkeypatch.setattr("src.workers.sweep.run_closed_loop", flaky)

    results = await SeedSweep(short_config, short_config.run.build(), tmp_path / "run.csv").run([1, 2])

    assert results[0].ok
    assert not results[1].ok
    assert "singular" in results[1].error
    assert results[1].csv_path is None
    assert not (tmp_path / "run-seed2.csv").exists()
