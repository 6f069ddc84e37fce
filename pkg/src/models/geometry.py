from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True, slots=True, eq=False)
class PlatformGeometry:
    """Joint layout of the base and platform rings.

    ``b`` and ``p`` are (6, 3) arrays in the base and platform frames; leg i
    connects ``b[i]`` to ``p[i]``. Angles are radians.
    """

    r_b: float
    r_p: float
    base_pair_centers: np.ndarray
    platform_pair_centers: np.ndarray
    pair_half_offset: float
    b: np.ndarray
    p: np.ndarray
    c_p: np.ndarray = field(default_factory=lambda: np.zeros(3))
    home_height: float = 0.32

    @property
    def home(self) -> Pose:
        return Pose(t=np.array([0.0, 0.0, self.home_height]), r=np.zeros(3))


@dataclass(frozen=True, slots=True, eq=False)
class Pose:
    t: np.ndarray
    r: np.ndarray

    @classmethod
    def from_vector(cls, q: np.ndarray) -> Pose:
        q = np.asarray(q, dtype=float)
        return cls(t=q[:3].copy(), r=q[3:6].copy())

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.t, self.r])

    def __array__(self, dtype=None, copy=None) -> np.ndarray:
        v = self.vector
        return v if dtype is None else v.astype(dtype)


@dataclass(frozen=True, slots=True, eq=False)
class Twist:
    v: np.ndarray
    rdot: np.ndarray

    @classmethod
    def from_vector(cls, qdot: np.ndarray) -> Twist:
        qdot = np.asarray(qdot, dtype=float)
        return cls(v=qdot[:3].copy(), rdot=qdot[3:6].copy())

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.v, self.rdot])

    def __array__(self, dtype=None, copy=None) -> np.ndarray:
        v = self.vector
        return v if dtype is None else v.astype(dtype)


@dataclass(frozen=True, slots=True, eq=False)
class LegKinematics:
    # per-leg rows, all in the base frame
    l: np.ndarray  # noqa: E741
    s: np.ndarray
    n: np.ndarray
    q_p: np.ndarray
    rotation: np.ndarray
    arms: np.ndarray
