"""Joint layout, rotation conventions and leg kinematics of the platform.

Conventions used throughout the package:

* a pose ``q`` is ``[x, y, z, phi, theta, psi]`` with ZYX Euler angles,
  ``R = Rz(psi) @ Ry(theta) @ Rx(phi)``;
* the state velocity ``qdot`` carries Euler-angle rates;
* a twist ``nu`` is ``[v; omega]`` with ``omega`` the angular velocity in the
  base frame. Jacobians and the equations of motion live in twist coordinates
  and are converted at the boundary with :func:`twist`, :func:`twist_rate`
  and :func:`euler_acceleration`.

Per-leg quantities are stacked as ``(6, 3)`` arrays, one row per leg.
"""

from __future__ import annotations

import logging

import numpy as np
from numpy.typing import ArrayLike

from src.models.geometry import LegKinematics, PlatformGeometry, Pose
from src.services.exceptions import (
    ForwardKinematicsError,
    InvalidGeometryError,
    LegCollapseError,
    SingularJacobianError,
    SingularOrientationError,
)

logger = logging.getLogger(__name__)

SINGULAR_PITCH_MARGIN = 1e-3
MIN_LEG_LENGTH = 1e-9
FK_TOLERANCE = 1e-9
FK_MAX_ITERATIONS = 100
FK_MAX_CONDITION = 1e12


# ---------------------------------------------------------------------------
# Layout
# ---------------------------------------------------------------------------

def build_geometry(
    r_b: float,
    r_p: float,
    base_centers: ArrayLike,
    platform_centers: ArrayLike,
    half_offset: float,
    c_p: ArrayLike | None = None,
    home_height: float = 0.32,
) -> PlatformGeometry:
    """Place six joints on each ring as three mirror pairs.

    Base joint 2k sits at ``base_centers[k] - half_offset`` and 2k+1 at
    ``base_centers[k] + half_offset``. Platform joint 2k is the ``+`` joint of
    the preceding platform pair and 2k+1 the ``-`` joint of pair k, so
    neighbouring legs lean in opposite directions.
    """
    if r_b <= 0 or r_p <= 0:
        raise InvalidGeometryError(f"Radii must be positive, got r_b={r_b}, r_p={r_p}")
    base_centers = np.asarray(base_centers, dtype=float)
    platform_centers = np.asarray(platform_centers, dtype=float)
    if base_centers.shape != (3,) or platform_centers.shape != (3,):
        raise InvalidGeometryError("Exactly three pair centers are required per ring")

    base_angles = np.repeat(base_centers, 2) + np.tile([-half_offset, half_offset], 3)
    platform_angles = np.empty(6)
    platform_angles[0::2] = np.roll(platform_centers, 1) + half_offset
    platform_angles[1::2] = platform_centers - half_offset

    return PlatformGeometry(
        r_b=float(r_b),
        r_p=float(r_p),
        base_pair_centers=base_centers,
        platform_pair_centers=platform_centers,
        pair_half_offset=float(half_offset),
        b=_ring(r_b, base_angles),
        p=_ring(r_p, platform_angles),
        c_p=np.zeros(3) if c_p is None else np.asarray(c_p, dtype=float),
        home_height=float(home_height),
    )


def _ring(radius: float, angles: np.ndarray) -> np.ndarray:
    return radius * np.column_stack([np.cos(angles), np.sin(angles), np.zeros_like(angles)])


# ---------------------------------------------------------------------------
# Rotations and rate maps
# ---------------------------------------------------------------------------

def rotation_zyx(r: ArrayLike) -> np.ndarray:
    phi, theta, psi = np.asarray(r, dtype=float)
    cf, sf = np.cos(phi), np.sin(phi)
    ct, st = np.cos(theta), np.sin(theta)
    cp, sp = np.cos(psi), np.sin(psi)
    return np.array(
        [
            [cp * ct, cp * st * sf - sp * cf, cp * st * cf + sp * sf],
            [sp * ct, sp * st * sf + cp * cf, sp * st * cf - cp * sf],
            [-st, ct * sf, ct * cf],
        ]
    )


def skew(v: ArrayLike) -> np.ndarray:
    x, y, z = np.asarray(v, dtype=float)
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def _check_pitch(theta: float) -> None:
    if not abs(theta) < np.pi / 2 - SINGULAR_PITCH_MARGIN:
        raise SingularOrientationError(
            f"Pitch {theta:.6f} rad is too close to the Euler-rate singularity", theta=float(theta)
        )


def euler_rate_matrix(r: ArrayLike) -> np.ndarray:
    """T(phi, theta) with omega_p = T @ rdot."""
    phi, theta, _ = np.asarray(r, dtype=float)
    _check_pitch(theta)
    cf, sf = np.cos(phi), np.sin(phi)
    ct, st = np.cos(theta), np.sin(theta)
    return np.array(
        [
            [1.0, 0.0, -st],
            [0.0, cf, ct * sf],
            [0.0, -sf, ct * cf],
        ]
    )


def euler_rate_matrix_derivative(r: ArrayLike, rdot: ArrayLike) -> np.ndarray:
    phi, theta, _ = np.asarray(r, dtype=float)
    dphi, dtheta, _ = np.asarray(rdot, dtype=float)
    cf, sf = np.cos(phi), np.sin(phi)
    ct, st = np.cos(theta), np.sin(theta)
    return np.array(
        [
            [0.0, 0.0, -ct * dtheta],
            [0.0, -sf * dphi, -st * dtheta * sf + ct * cf * dphi],
            [0.0, -cf * dphi, -st * dtheta * cf - ct * sf * dphi],
        ]
    )


def euler_rate_to_body_rate(r: ArrayLike, rdot: ArrayLike) -> np.ndarray:
    return euler_rate_matrix(r) @ np.asarray(rdot, dtype=float)


def body_rate_to_base_rate(R: np.ndarray, omega_p: ArrayLike) -> np.ndarray:
    return R @ np.asarray(omega_p, dtype=float)


def twist(q: ArrayLike, qdot: ArrayLike) -> np.ndarray:
    """Base-frame twist [v; omega] of a state given in Euler-rate coordinates."""
    q = np.asarray(q, dtype=float)
    qdot = np.asarray(qdot, dtype=float)
    R = rotation_zyx(q[3:])
    omega = body_rate_to_base_rate(R, euler_rate_to_body_rate(q[3:], qdot[3:]))
    return np.concatenate([qdot[:3], omega])


def twist_rate(q: ArrayLike, qdot: ArrayLike, qddot: ArrayLike) -> np.ndarray:
    """Time derivative of :func:`twist`: alpha = R (T rddot + Tdot rdot)."""
    q = np.asarray(q, dtype=float)
    qdot = np.asarray(qdot, dtype=float)
    qddot = np.asarray(qddot, dtype=float)
    r, rdot = q[3:], qdot[3:]
    R = rotation_zyx(r)
    alpha = R @ (euler_rate_matrix(r) @ qddot[3:] + euler_rate_matrix_derivative(r, rdot) @ rdot)
    return np.concatenate([qddot[:3], alpha])


def euler_acceleration(q: ArrayLike, qdot: ArrayLike, nu_dot: ArrayLike) -> np.ndarray:
    """Inverse of :func:`twist_rate`: recover [a; rddot] from [a; alpha]."""
    q = np.asarray(q, dtype=float)
    qdot = np.asarray(qdot, dtype=float)
    nu_dot = np.asarray(nu_dot, dtype=float)
    r, rdot = q[3:], qdot[3:]
    R = rotation_zyx(r)
    rhs = R.T @ nu_dot[3:] - euler_rate_matrix_derivative(r, rdot) @ rdot
    rddot = np.linalg.solve(euler_rate_matrix(r), rhs)
    return np.concatenate([nu_dot[:3], rddot])


# ---------------------------------------------------------------------------
# Leg kinematics
# ---------------------------------------------------------------------------

def inverse_kinematics(q: Pose | ArrayLike, geom: PlatformGeometry) -> LegKinematics:
    q = np.asarray(q, dtype=float)
    t, r = q[:3], q[3:6]
    _check_pitch(r[1])
    R = rotation_zyx(r)
    arms = geom.p @ R.T
    q_p = t + arms
    leg_vectors = q_p - geom.b
    s = np.linalg.norm(leg_vectors, axis=1)
    if np.any(s < MIN_LEG_LENGTH):
        raise LegCollapseError(f"Leg length below {MIN_LEG_LENGTH} m at pose {q}", lengths=s)
    return LegKinematics(l=leg_vectors, s=s, n=leg_vectors / s[:, None], q_p=q_p, rotation=R, arms=arms)


def joint_velocity(q: Pose | ArrayLike, qdot: ArrayLike, geom: PlatformGeometry) -> np.ndarray:
    """Velocities of the six platform joints, q_dot_p = v + omega x (R p)."""
    q = np.asarray(q, dtype=float)
    nu = twist(q, qdot)
    arms = geom.p @ rotation_zyx(q[3:6]).T
    return nu[:3] + np.cross(nu[3:], arms)


def leg_rate(legkin: LegKinematics, qdot_p: np.ndarray) -> np.ndarray:
    return np.einsum("ij,ij->i", legkin.n, qdot_p)


def _axial_projector(n: np.ndarray) -> np.ndarray:
    # n~^T n~ = I - n n^T, stacked per leg
    return np.eye(3) - n[..., :, None] * n[..., None, :]


def leg_part_velocities(
    legkin: LegKinematics, qdot_p: np.ndarray, l_t: float, l_b: float
) -> tuple[np.ndarray, np.ndarray]:
    """COM velocities of the upper (moving) and lower (fixed) leg parts."""
    s = legkin.s[:, None]
    transverse = np.einsum("ijk,ik->ij", _axial_projector(legkin.n), qdot_p)
    v_t = qdot_p - l_t * transverse / s
    v_b = l_b * transverse / s
    return v_t, v_b


def leg_angular_velocity(legkin: LegKinematics, qdot_p: np.ndarray) -> np.ndarray:
    return np.cross(legkin.n, qdot_p) / legkin.s[:, None]


def kinematic_jacobian(q: Pose | ArrayLike, geom: PlatformGeometry) -> np.ndarray:
    """Twist Jacobian: row i is [n_i, (R p_i) x n_i], so s_dot = J @ nu."""
    legs = inverse_kinematics(q, geom)
    return np.hstack([legs.n, np.cross(legs.arms, legs.n)])


def pose_jacobian(q: Pose | ArrayLike, geom: PlatformGeometry) -> np.ndarray:
    """Jacobian of the leg lengths with respect to q = [t, r]."""
    q = np.asarray(q, dtype=float)
    r = q[3:6]
    mapping = np.eye(6)
    mapping[3:, 3:] = rotation_zyx(r) @ euler_rate_matrix(r)
    return kinematic_jacobian(q, geom) @ mapping


def forward_kinematics(
    lengths: ArrayLike,
    q_guess: Pose | ArrayLike,
    geom: PlatformGeometry,
    tol: float = FK_TOLERANCE,
    max_iterations: int = FK_MAX_ITERATIONS,
) -> Pose:
    """Newton-Raphson on s(q) - lengths with full steps."""
    lengths = np.asarray(lengths, dtype=float)
    q = np.array(q_guess, dtype=float)
    residual_norm = np.inf

    for iteration in range(max_iterations + 1):
        if not np.all(np.isfinite(q)):
            raise ForwardKinematicsError(
                "Forward kinematics diverged to a non-finite pose",
                iterations=iteration,
                residual=float(residual_norm),
            )
        residual = inverse_kinematics(q, geom).s - lengths
        residual_norm = float(np.max(np.abs(residual)))
        if residual_norm <= tol or iteration == max_iterations:
            break

        jac = pose_jacobian(q, geom)
        condition = float(np.linalg.cond(jac))
        if condition > FK_MAX_CONDITION:
            raise SingularJacobianError(
                f"Leg-length Jacobian is singular (cond={condition:.3e})", condition=condition
            )
        q = q - np.linalg.solve(jac, residual)

    if residual_norm > tol:
        raise ForwardKinematicsError(
            f"Forward kinematics did not converge in {max_iterations} iterations "
            f"(residual {residual_norm:.3e} m)",
            iterations=max_iterations,
            residual=residual_norm,
        )

    if residual_norm > 0.0:
        # polish: one last Newton step from the converged iterate
        q = q - np.linalg.solve(pose_jacobian(q, geom), residual)

    logger.debug("Forward kinematics converged in %d iterations", iteration)
    return Pose.from_vector(q)
