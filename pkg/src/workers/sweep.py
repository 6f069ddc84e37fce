from __future__ import annotations

import asyncio
import logging
import re
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

from src.config import settings
from src.models.simulation import ScenarioSpec
from src.reports.csv_log import write_csv
from src.schemas.loader import apply_overrides
from src.schemas.sim_config import SimConfig
from src.services.exceptions import ConfigValidationError, StewartError
from src.services.simulation import run_closed_loop

logger = logging.getLogger(__name__)

_SEED_RANGE = re.compile(r"^\s*(\d+)\s*\.\.\s*(\d+)\s*$")


@dataclass(frozen=True, slots=True)
class SweepResult:
    seed: int
    csv_path: Path | None = None
    e_l: float | None = None
    e_t: float | None = None
    e_cs: float | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def parse_seed_range(text: str) -> list[int]:
    """``"3..7"`` -> ``[3, 4, 5, 6, 7]``."""
    match = _SEED_RANGE.match(text)
    if match is None:
        raise ConfigValidationError(f"Seed range must look like A..B, got '{text}'", key="seeds")
    first, last = int(match.group(1)), int(match.group(2))
    if last < first:
        raise ConfigValidationError(f"Empty seed range '{text}'", key="seeds")
    return list(range(first, last + 1))


def seed_csv_path(out: Path, seed: int) -> Path:
    return out.with_name(f"{out.stem}-seed{seed}{out.suffix or '.csv'}")


class SeedSweep:
    """Runs one closed-loop simulation per seed, a bounded number at a time."""

    def __init__(
        self,
        config: SimConfig,
        scenario: ScenarioSpec,
        out: Path,
        max_workers: int | None = None,
    ) -> None:
        self._config = config
        self._scenario = scenario
        self._out = Path(out)
        self._semaphore = asyncio.Semaphore(max_workers or settings.MAX_SWEEP_WORKERS)

    async def run(self, seeds: Sequence[int]) -> list[SweepResult]:
        logger.info("Sweeping %d seeds (%s scenario)", len(seeds), self._scenario.kind.value)
        tasks = [asyncio.create_task(self._run_seed(seed)) for seed in seeds]
        results = await asyncio.gather(*tasks)
        failed = sum(not r.ok for r in results)
        logger.info("Sweep finished: %d ok, %d failed", len(results) - failed, failed)
        return list(results)

    async def _run_seed(self, seed: int) -> SweepResult:
        async with self._semaphore:
            try:
                config = apply_overrides(self._config, noise={"seed": seed})
                records = await asyncio.to_thread(run_closed_loop, self._scenario, config)
                path = await asyncio.to_thread(write_csv, records, seed_csv_path(self._out, seed))
            except StewartError as exc:
                logger.warning("Seed %d failed: %s", seed, exc.message)
                return SweepResult(seed=seed, error=exc.message)
            except Exception as exc:
                logger.exception("Unexpected failure for seed %d", seed)
                return SweepResult(seed=seed, error=str(exc))

        final = records[-1]
        logger.info("Seed %d: e_l=%.3e e_t=%.3e", seed, final.e_l, final.e_t)
        return SweepResult(
            seed=seed, csv_path=path, e_l=final.e_l, e_t=final.e_t, e_cs=final.e_cs
        )
