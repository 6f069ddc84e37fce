from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator

from src.models.control import LqrWeights
from src.models.dynamics import RigidBodyParams
from src.models.enums import LinearizationPose, ScenarioKind
from src.models.estimation import NoiseCovariances
from src.models.geometry import PlatformGeometry
from src.models.simulation import DEFAULT_DURATIONS, ScenarioSpec, SensorNoiseSpec
from src.services.kinematics import build_geometry

Vector3 = list[float]


def _fixed_length(v: list[float], size: int) -> list[float]:
    if len(v) != size:
        raise ValueError(f"Expected {size} values, got {len(v)}")
    return v


def _non_negative(v: list[float]) -> list[float]:
    if any(x < 0 for x in v):
        raise ValueError("Values must be non-negative")
    return v


class _Block(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GeometryConfig(_Block):
    base_radius: float = Field(default=0.20, gt=0)
    platform_radius: float = Field(default=0.16, gt=0)
    base_pair_centers_deg: list[float] = Field(default_factory=lambda: [0.0, 120.0, 240.0])
    platform_pair_centers_deg: list[float] = Field(default_factory=lambda: [60.0, 180.0, 300.0])
    pair_half_offset_deg: float = Field(default=20.0, ge=0, lt=60)
    control_point: Vector3 = Field(default_factory=lambda: [0.0, 0.0, 0.0])
    home_height: float = Field(default=0.32, gt=0)

    @field_validator("base_pair_centers_deg", "platform_pair_centers_deg", "control_point")
    @classmethod
    def check_three_values(cls, v: list[float]) -> list[float]:
        return _fixed_length(v, 3)

    def build(self) -> PlatformGeometry:
        return build_geometry(
            r_b=self.base_radius,
            r_p=self.platform_radius,
            base_centers=np.radians(self.base_pair_centers_deg),
            platform_centers=np.radians(self.platform_pair_centers_deg),
            half_offset=np.radians(self.pair_half_offset_deg),
            c_p=self.control_point,
            home_height=self.home_height,
        )


class MassConfig(_Block):
    platform_mass: float = Field(default=0.528, gt=0)
    platform_inertia: list[list[float]] = Field(
        default_factory=lambda: [
            [0.03, 0.01, 0.01],
            [0.01, 0.03, 0.01],
            [0.01, 0.01, 0.02],
        ]
    )
    top_mass: float = Field(default=0.027, gt=0)
    bottom_mass: float = Field(default=0.1187, gt=0)
    top_com_distance: float = Field(default=0.1, gt=0)
    bottom_com_distance: float = Field(default=0.13861, gt=0)
    gravity: Vector3 = Field(default_factory=lambda: [0.0, 0.0, -9.81])

    @field_validator("platform_inertia")
    @classmethod
    def check_inertia(cls, v: list[list[float]]) -> list[list[float]]:
        matrix = np.asarray(v, dtype=float)
        if matrix.shape != (3, 3):
            raise ValueError("platform_inertia must be a 3x3 matrix")
        if not np.allclose(matrix, matrix.T, atol=1e-12):
            raise ValueError("platform_inertia must be symmetric")
        if np.linalg.eigvalsh(matrix)[0] <= 0:
            raise ValueError("platform_inertia must be positive definite")
        return v

    @field_validator("gravity")
    @classmethod
    def check_gravity(cls, v: list[float]) -> list[float]:
        return _fixed_length(v, 3)

    def build(self) -> RigidBodyParams:
        return RigidBodyParams(
            m_p=self.platform_mass,
            I_p=np.asarray(self.platform_inertia, dtype=float),
            m_t=self.top_mass,
            m_b=self.bottom_mass,
            l_t=self.top_com_distance,
            l_b=self.bottom_com_distance,
            g=np.asarray(self.gravity, dtype=float),
        )


class ControllerConfig(_Block):
    state_weights: list[float] = Field(
        default_factory=lambda: [30.0, 30.0, 5.0, 30.0, 30.0, 200.0, 3.0, 3.0, 1.0, 3.0, 3.0, 20.0]
    )
    input_weights: list[float] = Field(default_factory=lambda: [10.0] * 6)
    force_limit: float | None = Field(default=None, gt=0)
    linearize_at: LinearizationPose = LinearizationPose.ENCODER

    @field_validator("state_weights")
    @classmethod
    def check_state_weights(cls, v: list[float]) -> list[float]:
        return _non_negative(_fixed_length(v, 12))

    @field_validator("input_weights")
    @classmethod
    def check_input_weights(cls, v: list[float]) -> list[float]:
        _fixed_length(v, 6)
        if any(x <= 0 for x in v):
            raise ValueError("Input weights must be strictly positive")
        return v

    def build(self) -> LqrWeights:
        return LqrWeights(
            state_weights=np.asarray(self.state_weights, dtype=float),
            input_weights=np.asarray(self.input_weights, dtype=float),
        )


class EkfConfig(_Block):
    predict_cov: list[float] = Field(default_factory=lambda: [1.0] * 6 + [5.0] * 6)
    innov_cov: list[float] = Field(
        default_factory=lambda: [10.0] * 6 + [1.0, 1.0, 1.0, 3.0, 3.0, 3.0]
    )
    initial_cov: list[float] = Field(default_factory=lambda: [1.0] * 6 + [0.01] * 6)

    @field_validator("predict_cov", "innov_cov", "initial_cov")
    @classmethod
    def check_diagonal(cls, v: list[float]) -> list[float]:
        return _non_negative(_fixed_length(v, 12))

    def build(self) -> NoiseCovariances:
        return NoiseCovariances(
            predict_cov=np.diag(self.predict_cov),
            innov_cov=np.diag(self.innov_cov),
            initial_cov=np.diag(self.initial_cov),
        )


class NoiseConfig(_Block):
    leg_sigma: float = Field(default=5e-5, ge=0)
    angle_sigma: float = Field(default=5e-4, ge=0)
    rate_sigma: float = Field(default=1e-3, ge=0)
    seed: int = Field(default=42, ge=0)

    def build(self) -> SensorNoiseSpec:
        return SensorNoiseSpec(
            leg_sigma=self.leg_sigma,
            angle_sigma=self.angle_sigma,
            rate_sigma=self.rate_sigma,
            seed=self.seed,
        )


class RunConfig(_Block):
    scenario: ScenarioKind = ScenarioKind.STEP
    # dt is declared before duration so the duration check can see it
    dt: float = Field(default=0.01, gt=0)
    duration: float | None = Field(default=None, gt=0)
    substeps: int = Field(default=10, ge=1)
    perfect_state: bool = False
    literal_reference: bool = False

    @field_validator("duration")
    @classmethod
    def check_divisible(cls, v: float | None, info: ValidationInfo) -> float | None:
        dt = info.data.get("dt")
        if v is None or dt is None:
            return v
        ratio = v / dt
        if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
            raise ValueError(f"duration {v} is not a whole number of dt={dt} steps")
        return v

    def build(self) -> ScenarioSpec:
        duration = self.duration if self.duration is not None else DEFAULT_DURATIONS[self.scenario]
        return ScenarioSpec(
            kind=self.scenario,
            duration=duration,
            dt=self.dt,
            substeps=self.substeps,
            perfect_state=self.perfect_state,
            literal_reference=self.literal_reference,
        )


class SimConfig(_Block):
    geometry: GeometryConfig = Field(default_factory=GeometryConfig)
    mass: MassConfig = Field(default_factory=MassConfig)
    controller: ControllerConfig = Field(default_factory=ControllerConfig)
    ekf: EkfConfig = Field(default_factory=EkfConfig)
    noise: NoiseConfig = Field(default_factory=NoiseConfig)
    run: RunConfig = Field(default_factory=RunConfig)
