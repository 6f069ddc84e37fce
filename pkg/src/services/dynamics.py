"""Leg and platform dynamics and the assembled task-space equations of motion.

Every per-leg function accepts a single leg (``n`` of shape (3,), scalar
``s``) or all six stacked (``n`` of shape (6, 3), ``s`` of shape (6,)).

The assembled model is written in twist coordinates,

    M(q) nu_dot + C(q, nu) nu + G(q) = H(q) F,

and :func:`forward_dynamics` converts the result back to Euler-angle
accelerations.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from src.models.dynamics import DynamicsMatrices, RigidBodyParams
from src.models.geometry import PlatformGeometry, Pose
from src.services.exceptions import (
    IllConditionedInertiaError,
    LegCollapseError,
    SingularConfigurationError,
)
from src.services.kinematics import (
    euler_acceleration,
    inverse_kinematics,
    rotation_zyx,
    skew,
    twist,
    twist_rate,
)

MIN_LEG_LENGTH = 1e-6
MAX_FORCE_MAP_CONDITION = 1e8
MAX_INERTIA_CONDITION = 1e10


def _check_leg_length(s: np.ndarray) -> None:
    if np.any(np.asarray(s) < MIN_LEG_LENGTH):
        raise LegCollapseError(f"Leg length below {MIN_LEG_LENGTH} m", lengths=np.asarray(s))


def _outer(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a[..., :, None] * b[..., None, :]


def _projector(n: np.ndarray) -> np.ndarray:
    return np.eye(3) - _outer(n, n)


def _matvec(A: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.einsum("...jk,...k->...j", A, x)


def _skew_stack(v: np.ndarray) -> np.ndarray:
    out = np.zeros(v.shape[:-1] + (3, 3))
    out[..., 0, 1], out[..., 0, 2] = -v[..., 2], v[..., 1]
    out[..., 1, 0], out[..., 1, 2] = v[..., 2], -v[..., 0]
    out[..., 2, 0], out[..., 2, 1] = -v[..., 1], v[..., 0]
    return out


def _leg_operators(arms: np.ndarray) -> np.ndarray:
    """Stacked [I | (R p~ R^T)^T] maps from the twist to each joint velocity."""
    ops = np.zeros((arms.shape[0], 3, 6))
    ops[:, :, :3] = np.eye(3)
    ops[:, :, 3:] = -_skew_stack(arms)
    return ops


# ---------------------------------------------------------------------------
# Leg terms
# ---------------------------------------------------------------------------

def leg_mass_matrices(
    n: ArrayLike, s: ArrayLike, params: RigidBodyParams
) -> tuple[np.ndarray, np.ndarray]:
    n = np.asarray(n, dtype=float)
    s = np.asarray(s, dtype=float)
    _check_leg_length(s)
    P = _projector(n)
    s3 = s[..., None, None]
    A = np.eye(3) - params.l_t * P / s3
    M1 = params.m_t * np.swapaxes(A, -1, -2) @ A
    M2 = params.leg_inertia * P / s3**2
    return M1, M2


def leg_coriolis(
    n: ArrayLike, s: ArrayLike, qdot_p: ArrayLike, params: RigidBodyParams
) -> np.ndarray:
    """C_a such that C_a @ qdot_p is the velocity-product force of one leg."""
    n = np.asarray(n, dtype=float)
    s = np.asarray(s, dtype=float)
    u = np.asarray(qdot_p, dtype=float)
    _check_leg_length(s)
    P = _projector(n)
    Pu = _matvec(P, u)
    axial = np.einsum("...j,...j->...", n, u)[..., None, None]
    s3 = s[..., None, None]
    m_t, l_t = params.m_t, params.l_t

    n_Pu = _outer(n, Pu)
    Pu_n = _outer(Pu, n)
    return (
        (m_t * l_t / s3**2) * (n_Pu + axial * P + Pu_n)
        - (m_t * l_t**2 / s3**3) * (axial * P + Pu_n)
        - (2.0 * params.leg_inertia / s3**3) * Pu_n
    )


def leg_applied_forces(
    n: ArrayLike, s: ArrayLike, f: ArrayLike, params: RigidBodyParams
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Actuator force and the gravity loads of the upper and lower leg parts."""
    n = np.asarray(n, dtype=float)
    s = np.asarray(s, dtype=float)
    f = np.asarray(f, dtype=float)
    P = _projector(n)
    s3 = s[..., None, None]
    A = np.eye(3) - params.l_t * P / s3
    Q_f = n * f[..., None]
    Q_mtg = _matvec(A, params.m_t * params.g)
    Q_mbg = _matvec(params.l_b * P / s3, params.m_b * params.g)
    return Q_f, Q_mtg, Q_mbg


def leg_constraint_force(
    q: Pose | ArrayLike,
    qdot: ArrayLike,
    qddot: ArrayLike,
    leg_index: int,
    geom: PlatformGeometry,
    params: RigidBodyParams,
    f_i: float,
) -> np.ndarray:
    """Force the platform exerts on leg ``leg_index`` at its upper joint."""
    q = np.asarray(q, dtype=float)
    legs = inverse_kinematics(q, geom)
    nu = twist(q, qdot)
    nu_dot = twist_rate(q, qdot, qddot)

    n, s, arm = legs.n[leg_index], legs.s[leg_index], legs.arms[leg_index]
    omega = nu[3:]
    qdot_p = nu[:3] + np.cross(omega, arm)
    joint_acc = nu_dot[:3] + np.cross(nu_dot[3:], arm)
    centripetal = np.cross(omega, np.cross(omega, arm))

    M1, M2 = leg_mass_matrices(n, s, params)
    L = M1 + M2
    C_a = leg_coriolis(n, s, qdot_p, params)
    Q_f, Q_mtg, Q_mbg = leg_applied_forces(n, s, f_i, params)
    return L @ joint_acc + C_a @ qdot_p + L @ centripetal - (Q_f + Q_mtg + Q_mbg)


# ---------------------------------------------------------------------------
# Platform and assembly
# ---------------------------------------------------------------------------

def _platform_terms(
    R: np.ndarray, omega: np.ndarray, geom: PlatformGeometry, params: RigidBodyParams
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    rc = R @ geom.c_p
    J_c = np.hstack([np.eye(3), skew(rc).T])
    I_w = R @ params.I_p @ R.T
    M_p = params.m_p * J_c.T @ J_c
    M_p[3:, 3:] += I_w
    C_p = np.zeros((6, 6))
    C_p[3:, 3:] = skew(omega) @ I_w
    return M_p, C_p, J_c, rc


def platform_matrices(
    q: Pose | ArrayLike, qdot: ArrayLike, geom: PlatformGeometry, params: RigidBodyParams
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Platform inertia M_p, velocity matrix C_p and the 6x18 joint-force map H_p."""
    q = np.asarray(q, dtype=float)
    R = rotation_zyx(q[3:6])
    omega = twist(q, qdot)[3:]
    M_p, C_p, _, _ = _platform_terms(R, omega, geom, params)
    arms = geom.p @ R.T
    H_p = np.vstack([np.tile(np.eye(3), 6), np.hstack(list(_skew_stack(arms)))])
    return M_p, C_p, H_p


def assemble_eom(
    q: Pose | ArrayLike, qdot: ArrayLike, geom: PlatformGeometry, params: RigidBodyParams
) -> DynamicsMatrices:
    q = np.asarray(q, dtype=float)
    legs = inverse_kinematics(q, geom)
    _check_leg_length(legs.s)
    nu = twist(q, qdot)
    omega = nu[3:]

    M_p, C_p, J_c, rc = _platform_terms(legs.rotation, omega, geom, params)
    ops = _leg_operators(legs.arms)
    qdot_p = nu[:3] + np.cross(omega, legs.arms)

    M1, M2 = leg_mass_matrices(legs.n, legs.s, params)
    L = M1 + M2
    C_a = leg_coriolis(legs.n, legs.s, qdot_p, params)
    _, Q_mtg, Q_mbg = leg_applied_forces(legs.n, legs.s, np.zeros(6), params)

    M = M_p + np.einsum("lji,ljk,lkm->im", ops, L, ops)
    leg_forces = _matvec(C_a, qdot_p) + _matvec(L, np.cross(omega, np.cross(omega, legs.arms)))
    Cqdot = (
        C_p @ nu
        + J_c.T @ (params.m_p * np.cross(omega, np.cross(omega, rc)))
        + np.einsum("lji,lj->i", ops, leg_forces)
    )
    G = -J_c.T @ (params.m_p * params.g) - np.einsum("lji,lj->i", ops, Q_mtg + Q_mbg)
    H = np.vstack([legs.n.T, np.cross(legs.arms, legs.n).T])

    condition = float(np.linalg.cond(H))
    if condition > MAX_FORCE_MAP_CONDITION:
        raise SingularConfigurationError(
            f"Force map is near-singular (cond={condition:.3e})", condition=condition
        )
    return DynamicsMatrices(M=M, Cqdot=Cqdot, G=G, H=H, twist=nu)


def forward_dynamics(
    q: Pose | ArrayLike,
    qdot: ArrayLike,
    F: ArrayLike,
    geom: PlatformGeometry,
    params: RigidBodyParams,
) -> np.ndarray:
    """Euler-coordinate acceleration qddot produced by actuator forces F."""
    eom = assemble_eom(q, qdot, geom, params)
    rhs = eom.H @ np.asarray(F, dtype=float) - eom.Cqdot - eom.G

    condition = float(np.linalg.cond(eom.M))
    if condition > MAX_INERTIA_CONDITION:
        raise IllConditionedInertiaError(
            f"Inertia matrix is ill-conditioned (cond={condition:.3e})", condition=condition
        )
    try:
        nu_dot = cho_solve(cho_factor(eom.M), rhs)
    except LinAlgError as exc:
        raise IllConditionedInertiaError(
            f"Inertia matrix is not positive definite: {exc}", condition=condition
        ) from exc
    return euler_acceleration(q, qdot, nu_dot)


def gravity_compensation(
    q: Pose | ArrayLike, geom: PlatformGeometry, params: RigidBodyParams
) -> np.ndarray:
    eom = assemble_eom(q, np.zeros(6), geom, params)
    return np.linalg.solve(eom.H, eom.G)


def kinetic_energy(
    q: Pose | ArrayLike, qdot: ArrayLike, geom: PlatformGeometry, params: RigidBodyParams
) -> float:
    eom = assemble_eom(q, qdot, geom, params)
    return float(0.5 * eom.twist @ eom.M @ eom.twist)
