from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True, slots=True, eq=False)
class RigidBodyParams:
    """Masses, inertias and COM distances of the platform and the legs.

    The leg parts are slender rods, so ``I_t`` and ``I_b`` are derived from
    the masses and COM distances rather than stored.
    """

    m_p: float
    I_p: np.ndarray
    m_t: float
    m_b: float
    l_t: float
    l_b: float
    g: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, -9.81]))

    @property
    def I_t(self) -> np.ndarray:
        a = self.m_t * self.l_t**2 / 3.0
        return np.diag([a, a, 0.0])

    @property
    def I_b(self) -> np.ndarray:
        a = self.m_b * self.l_b**2 / 3.0
        return np.diag([a, a, 0.0])

    @property
    def leg_inertia(self) -> float:
        """Transverse inertia of a whole leg, acting on the projector P = I - nn^T."""
        return float(self.I_t[0, 0] + self.I_b[0, 0])


@dataclass(frozen=True, slots=True, eq=False)
class DynamicsMatrices:
    """Task-space equations of motion, M nu_dot + C nu + G = H F.

    Expressed in twist coordinates nu = [v; omega] with omega in the base
    frame; ``twist`` is the nu the matrices were evaluated at.
    """

    M: np.ndarray
    Cqdot: np.ndarray
    G: np.ndarray
    H: np.ndarray
    twist: np.ndarray
