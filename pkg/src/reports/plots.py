"""SVG figures of a closed-loop run: pose traces, actuator forces and errors.

Every plotted series carries a stable ``gid`` so the SVG groups can be found
by id (``positions-<axis>-<kind>``, ``force-F<i>``, ``errors-<metric>``).
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from src.models.enums import POSE_AXES  # noqa: E402
from src.models.simulation import SimRecord  # noqa: E402

logger = logging.getLogger(__name__)

_SVG_STYLE = {
    "svg.fonttype": "none",
    "svg.hashsalt": "stewart-sim",
}
_UNITS = {"x": "m", "y": "m", "z": "m", "phi": "rad", "theta": "rad", "psi": "rad"}


def _save(fig: plt.Figure, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    logger.info("Wrote %s", path)
    return path


def _positions(records: Sequence[SimRecord], t: np.ndarray, path: Path) -> Path:
    true = np.array([r.xi_true[:6] for r in records])
    estimated = np.array([r.xhat[:6] for r in records])
    desired = np.array([r.xi_des[:6] for r in records])

    fig, axes = plt.subplots(3, 2, figsize=(11, 9), sharex=True)
    for i, (axis, ax) in enumerate(zip(POSE_AXES, axes.T.ravel())):
        ax.plot(t, true[:, i], color="tab:blue", label="true", gid=f"positions-{axis}-true")
        ax.plot(
            t, estimated[:, i], color="tab:orange", linestyle="--",
            label="estimated", gid=f"positions-{axis}-estimated",
        )
        ax.plot(
            t, desired[:, i], color="black", linestyle=":",
            label="desired", gid=f"positions-{axis}-desired",
        )
        ax.set_ylabel(f"{axis} ({_UNITS[axis]})")
        ax.grid(True)
    for ax in axes[-1]:
        ax.set_xlabel("time (s)")
    axes[0, 0].legend(loc="best")
    fig.suptitle("Platform pose")
    return _save(fig, path)


def _forces(records: Sequence[SimRecord], t: np.ndarray, path: Path) -> Path:
    forces = np.array([r.F for r in records])
    fig, ax = plt.subplots(figsize=(10, 5))
    for i in range(6):
        ax.plot(t, forces[:, i], label=f"F{i + 1}", gid=f"force-F{i + 1}")
    ax.set_xlabel("time (s)")
    ax.set_ylabel("actuator force (N)")
    ax.set_title("Actuator forces")
    ax.legend(loc="best", ncol=3)
    ax.grid(True)
    return _save(fig, path)


def _errors(records: Sequence[SimRecord], t: np.ndarray, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(10, 5))
    for name in ("e_l", "e_t", "e_cs"):
        ax.plot(t, [getattr(r, name) for r in records], label=name, gid=f"errors-{name}")
    final = records[-1].e_l
    ax.annotate(
        f"{final:.17g}",
        xy=(t[-1], final),
        xytext=(-10, 10),
        textcoords="offset points",
        ha="right",
        gid="errors-final-e_l",
    )
    ax.set_yscale("symlog", linthresh=1e-4)
    ax.set_xlabel("time (s)")
    ax.set_ylabel("error norm")
    ax.set_title("Error norms")
    ax.legend(loc="best")
    ax.grid(True)
    return _save(fig, path)


def render_plots(records: Sequence[SimRecord], directory: str | Path) -> list[Path]:
    if not records:
        raise ValueError("Cannot plot an empty record stream")
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    t = np.array([r.t for r in records])
    with plt.rc_context(_SVG_STYLE):
        return [
            _positions(records, t, directory / "positions.svg"),
            _forces(records, t, directory / "forces.svg"),
            _errors(records, t, directory / "errors.svg"),
        ]
