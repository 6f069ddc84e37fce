"""Stewart platform simulator.

Usage:
    stewart run --scenario step --out step.csv --plots plots/
    stewart run --scenario sinusoid --seeds 1..8 --out runs/sinusoid.csv
    stewart config --config my.json
"""

from __future__ import annotations

import argparse
import asyncio
import logging
import sys
import time
from collections.abc import Sequence
from pathlib import Path

from src.config import settings
from src.models.enums import ExitCode, ScenarioKind
from src.models.simulation import ScenarioSpec, SimRecord
from src.reports.csv_log import write_csv
from src.reports.plots import render_plots
from src.schemas.loader import apply_overrides, dump_config, load_config
from src.schemas.sim_config import SimConfig
from src.services.exceptions import ConfigError, StewartError
from src.services.simulation import run_closed_loop
from src.workers.sweep import SeedSweep, SweepResult, parse_seed_range

logger = logging.getLogger(__name__)

# ── ANSI colours for terminal output ──────────────────────────────────────────

BOLD = "\033[1m"
DIM = "\033[2m"
RESET = "\033[0m"
RED = "\033[91m"
GREEN = "\033[92m"
CYAN = "\033[96m"


class _ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors as config errors instead of exiting."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise ConfigError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="stewart", description="Stewart platform closed-loop simulator")
    parser.add_argument("--log-level", help=f"logging level (default {settings.LOG_LEVEL})")
    commands = parser.add_subparsers(dest="command", required=True)

    run_cmd = commands.add_parser("run", help="simulate a scenario and write the CSV log")
    run_cmd.add_argument("--scenario", choices=[kind.value for kind in ScenarioKind])
    run_cmd.add_argument("--config", type=Path, help="JSON config file")
    run_cmd.add_argument("--out", type=Path, help="CSV output path (default <scenario>.csv)")
    run_cmd.add_argument("--plots", type=Path, help="directory for SVG plots")
    seeds = run_cmd.add_mutually_exclusive_group()
    seeds.add_argument("--seed", type=int, help="sensor noise seed")
    seeds.add_argument("--seeds", help="seed range A..B, simulated concurrently")
    run_cmd.add_argument("--duration", type=float, help="run length in seconds")
    run_cmd.add_argument(
        "--perfect-state", action="store_true", help="feed plant truth to the controller"
    )
    run_cmd.add_argument(
        "--literal-paper-reference",
        "--literal-reference",
        dest="literal_reference",
        action="store_true",
        help="use 0.4 as the z entry of the sinusoid velocity reference",
    )

    config_cmd = commands.add_parser("config", help="print the canonical config")
    config_cmd.add_argument("--config", type=Path, help="JSON config file")
    return parser


def _configure_logging(level: str | None) -> None:
    name = (level or settings.LOG_LEVEL).upper()
    if name not in logging.getLevelNamesMapping():
        raise ConfigError(f"Unknown log level '{name}'")
    logging.basicConfig(
        level=name,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def _load(path: Path | None) -> SimConfig:
    return load_config(path) if path is not None else SimConfig()


def _resolve_run_config(args: argparse.Namespace) -> SimConfig:
    run: dict[str, object] = {}
    if args.scenario is not None:
        run["scenario"] = args.scenario
    if args.duration is not None:
        run["duration"] = args.duration
    if args.perfect_state:
        run["perfect_state"] = True
    if args.literal_reference:
        run["literal_reference"] = True
    noise = {"seed": args.seed} if args.seed is not None else {}
    return apply_overrides(_load(args.config), run=run, noise=noise)


def print_summary(scenario: ScenarioSpec, records: Sequence[SimRecord], out: Path, elapsed: float) -> None:
    final = records[-1]
    print(f"\n{'=' * 60}")
    print(f"{BOLD}{CYAN}  {scenario.kind.value.upper()} SCENARIO{RESET}")
    print(f"{'=' * 60}\n")
    print(f"  {BOLD}Steps:{RESET}      {len(records)} ({scenario.duration:g} s at {scenario.dt:g} s)")
    print(f"  {BOLD}Final e_l:{RESET}  {final.e_l:.4e}")
    print(f"  {BOLD}Final e_t:{RESET}  {final.e_t:.4e}")
    print(f"  {BOLD}Final e_cs:{RESET} {final.e_cs:.4e}")
    print(f"\n  {DIM}CSV written to {out} in {elapsed:.1f}s{RESET}\n")


def print_sweep(results: Sequence[SweepResult]) -> None:
    print(f"\n{BOLD}  SEED SWEEP{RESET}\n")
    for result in results:
        if result.ok:
            print(
                f"    {GREEN}seed {result.seed:<6}{RESET} e_l={result.e_l:.4e} "
                f"e_t={result.e_t:.4e}  {DIM}{result.csv_path}{RESET}"
            )
        else:
            print(f"    {RED}seed {result.seed:<6} failed:{RESET} {result.error}")
    print()


def _run_command(args: argparse.Namespace) -> int:
    config = _resolve_run_config(args)
    scenario = config.run.build()
    out = args.out if args.out is not None else Path(f"{scenario.kind.value}.csv")

    if args.seeds:
        seeds = parse_seed_range(args.seeds)
        results = asyncio.run(SeedSweep(config, scenario, out).run(seeds))
        print_sweep(results)
        return ExitCode.OK if all(r.ok for r in results) else ExitCode.NUMERIC_ERROR

    started = time.perf_counter()
    records = run_closed_loop(scenario, config)
    write_csv(records, out)
    if args.plots is not None:
        render_plots(records, args.plots)
    print_summary(scenario, records, out, time.perf_counter() - started)
    return ExitCode.OK


def _config_command(args: argparse.Namespace) -> int:
    sys.stdout.write(dump_config(_load(args.config)))
    return ExitCode.OK


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        _configure_logging(args.log_level)
        if args.command == "config":
            return _config_command(args)
        return _run_command(args)
    except ConfigError as exc:
        print(f"{RED}Error:{RESET} {exc.message}", file=sys.stderr)
        return ExitCode.CONFIG_ERROR
    except StewartError as exc:
        print(f"{RED}Numeric failure:{RESET} {exc.message}", file=sys.stderr)
        return ExitCode.NUMERIC_ERROR
    except OSError as exc:
        print(f"{RED}Error:{RESET} cannot write output: {exc}", file=sys.stderr)
        return ExitCode.IO_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
