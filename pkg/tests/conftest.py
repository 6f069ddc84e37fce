from __future__ import annotations

import numpy as np
import pytest

from src.models.dynamics import RigidBodyParams
from src.models.geometry import PlatformGeometry
from src.schemas.sim_config import SimConfig
from src.services.kinematics import build_geometry


# ---------------------------------------------------------------------------
# Workspace sampling
# ---------------------------------------------------------------------------

HOME = np.array([0.0, 0.0, 0.32, 0.0, 0.0, 0.0])
MAX_OFFSET = 0.08
MAX_ANGLE = 0.15
MAX_SPEED = 0.2
MAX_RATE = 0.5


def sample_pose(rng: np.random.Generator) -> np.ndarray:
    """Random pose with ||t - home|| <= 0.08 m and |r| <= 0.15 rad per angle."""
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    t = HOME[:3] + direction * MAX_OFFSET * rng.uniform() ** (1 / 3)
    r = rng.uniform(-MAX_ANGLE, MAX_ANGLE, size=3)
    return np.concatenate([t, r])


def sample_state(rng: np.random.Generator) -> np.ndarray:
    qdot = np.concatenate(
        [rng.uniform(-MAX_SPEED, MAX_SPEED, 3), rng.uniform(-MAX_RATE, MAX_RATE, 3)]
    )
    return np.concatenate([sample_pose(rng), qdot])


# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------

@pytest.fixture()
def default_config() -> SimConfig:
    return SimConfig()


@pytest.fixture()
def geom(default_config) -> PlatformGeometry:
    return default_config.geometry.build()


@pytest.fixture()
def params(default_config) -> RigidBodyParams:
    return default_config.mass.build()


@pytest.fixture()
def home() -> np.ndarray:
    return HOME.copy()


@pytest.fixture()
def vertical_geom() -> PlatformGeometry:
    """Both rings of equal radius with coincident joint angles: every leg is vertical."""
    return build_geometry(
        r_b=0.2,
        r_p=0.2,
        base_centers=np.radians([0.0, 120.0, 240.0]),
        platform_centers=np.radians([60.0, 180.0, 300.0]),
        half_offset=np.radians(30.0),
    )


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20240607)
