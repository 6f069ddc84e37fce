from __future__ import annotations

import logging

import numpy as np
from numpy.typing import ArrayLike

from src.models.control import GainMatrix, LqrWeights
from src.models.dynamics import RigidBodyParams
from src.models.geometry import PlatformGeometry, Pose
from src.services.dynamics import assemble_eom
from src.services.exceptions import ControlSynthesisError
from src.services.kinematics import twist_rate

logger = logging.getLogger(__name__)

AXES = 6
HURWITZ_MARGIN = 1e-12


def double_integrator() -> tuple[np.ndarray, np.ndarray]:
    """State matrices of qddot = u with state [q; qdot]."""
    A = np.zeros((2 * AXES, 2 * AXES))
    A[:AXES, AXES:] = np.eye(AXES)
    B = np.zeros((2 * AXES, AXES))
    B[AXES:, :] = np.eye(AXES)
    return A, B


def _diagonal(matrix: ArrayLike, size: int, name: str) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim == 1:
        matrix = np.diag(matrix)
    if matrix.shape != (size, size):
        raise ControlSynthesisError(f"{name} must be {size}x{size}, got {matrix.shape}")
    diag = np.diag(matrix)
    if np.any(matrix - np.diag(diag)):
        raise ControlSynthesisError(f"{name} must be diagonal")
    if np.any(diag < 0):
        raise ControlSynthesisError(f"{name} has negative weights")
    return diag


def solve_care(N: ArrayLike, O: ArrayLike) -> np.ndarray:  # noqa: E741
    """Solve the Riccati equation of six decoupled double integrators.

    Per axis, with position weight n1, velocity weight n2 and input weight o,
    the 2x2 solution is d2 = sqrt(n1 o), d3 = sqrt(o n2 + 2 o d2) and
    d1 = d2 d3 / o.
    """
    n = _diagonal(N, 2 * AXES, "State weight N")
    o = _diagonal(O, AXES, "Input weight O")
    if np.any(o <= 0):
        raise ControlSynthesisError("Input weights must be strictly positive")

    n1, n2 = n[:AXES], n[AXES:]
    undetectable = (n1 <= 0) & (n2 <= 0)
    if np.any(undetectable):
        axes = np.flatnonzero(undetectable).tolist()
        raise ControlSynthesisError(f"Axes {axes} carry no state weight")

    d2 = np.sqrt(n1 * o)
    d3 = np.sqrt(o * n2 + 2.0 * o * d2)
    d1 = d2 * d3 / o

    D = np.zeros((2 * AXES, 2 * AXES))
    idx = np.arange(AXES)
    D[idx, idx] = d1
    D[idx, idx + AXES] = d2
    D[idx + AXES, idx] = d2
    D[idx + AXES, idx + AXES] = d3
    return D


def care_residual(D: np.ndarray, N: ArrayLike, O: ArrayLike) -> float:  # noqa: E741
    A, B = double_integrator()
    state_weight = np.diag(_diagonal(N, 2 * AXES, "State weight N"))
    input_weight = np.diag(_diagonal(O, AXES, "Input weight O"))
    residual = A.T @ D + D @ A - D @ B @ np.linalg.solve(input_weight, B.T) @ D + state_weight
    return float(np.max(np.abs(residual)))


def lqr_gain(D: np.ndarray, O: ArrayLike) -> GainMatrix:  # noqa: E741
    A, B = double_integrator()
    o = _diagonal(O, AXES, "Input weight O")
    K = (B.T @ D) / o[:, None]
    poles = np.linalg.eigvals(A - B @ K)
    if poles.real.max() >= -HURWITZ_MARGIN:
        raise ControlSynthesisError(
            f"Closed loop is not Hurwitz (max real part {poles.real.max():.3e})"
        )
    return GainMatrix(K=K, closed_loop_poles=poles)


def synthesize(weights: LqrWeights) -> GainMatrix:
    D = solve_care(weights.N, weights.O)
    gain = lqr_gain(D, weights.O)
    logger.debug("LQR gain synthesized, slowest pole %.4f", gain.closed_loop_poles.real.max())
    return gain


def virtual_control(xhat: ArrayLike, xi_des: ArrayLike, K: GainMatrix | np.ndarray) -> np.ndarray:
    gain = K.K if isinstance(K, GainMatrix) else np.asarray(K)
    return -gain @ (np.asarray(xhat, dtype=float) - np.asarray(xi_des, dtype=float))


def feedback_linearize(
    q: Pose | ArrayLike,
    qdot: ArrayLike,
    u: ArrayLike,
    geom: PlatformGeometry,
    params: RigidBodyParams,
) -> np.ndarray:
    """Actuator forces that make the Euler-coordinate acceleration equal u."""
    eom = assemble_eom(q, qdot, geom, params)
    nu_dot = twist_rate(q, qdot, u)
    return np.linalg.solve(eom.H, eom.M @ nu_dot + eom.Cqdot + eom.G)


def saturate_forces(F: ArrayLike, f_max: float | None) -> tuple[np.ndarray, bool]:
    F = np.asarray(F, dtype=float)
    if f_max is None:
        return F, False
    clipped = np.clip(F, -f_max, f_max)
    saturated = bool(np.any(clipped != F))
    if saturated:
        logger.debug("Actuator forces saturated at +/-%.3f N", f_max)
    return clipped, saturated
