from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.models.enums import ScenarioKind
from src.services.exceptions import ConfigValidationError

DEFAULT_DURATIONS = {
    ScenarioKind.STEP: 60.0,
    ScenarioKind.SINUSOID: 20.0,
    ScenarioKind.HOLD: 10.0,
}


@dataclass(frozen=True, slots=True)
class ScenarioSpec:
    kind: ScenarioKind
    duration: float
    dt: float = 0.01
    substeps: int = 10
    perfect_state: bool = False
    literal_reference: bool = False

    def __post_init__(self) -> None:
        if self.duration <= 0:
            raise ConfigValidationError("duration must be positive", key="run.duration")
        if self.dt <= 0:
            raise ConfigValidationError("dt must be positive", key="run.dt")
        if self.substeps < 1:
            raise ConfigValidationError("substeps must be at least 1", key="run.substeps")
        ratio = self.duration / self.dt
        if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
            raise ConfigValidationError(
                f"dt={self.dt} does not divide duration={self.duration}", key="run.dt"
            )

    @property
    def steps(self) -> int:
        return int(round(self.duration / self.dt))


@dataclass(frozen=True, slots=True)
class SensorNoiseSpec:
    leg_sigma: float
    angle_sigma: float
    rate_sigma: float
    seed: int

    def __post_init__(self) -> None:
        for name in ("leg_sigma", "angle_sigma", "rate_sigma"):
            if getattr(self, name) < 0:
                raise ConfigValidationError(f"{name} must be non-negative", key=f"noise.{name}")

    @property
    def sigmas(self) -> np.ndarray:
        return np.concatenate(
            [
                np.full(6, self.leg_sigma),
                np.full(3, self.angle_sigma),
                np.full(3, self.rate_sigma),
            ]
        )


@dataclass(frozen=True, slots=True, eq=False)
class SimRecord:
    """One control step of a closed-loop run."""

    t: float
    xi_true: np.ndarray
    xi_des: np.ndarray
    xhat: np.ndarray
    z: np.ndarray
    u: np.ndarray
    F: np.ndarray
    e_l: float
    e_t: float
    e_cs: float
    cov_asymmetry: float = 0.0
    cov_min_eig: float = 0.0
    saturated: bool = False
