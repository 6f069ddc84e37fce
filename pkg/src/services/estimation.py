"""Extended Kalman filter fusing leg encoders, Euler angles and body rates.

The filter propagates the state with a forward-Euler double integrator and
corrects it with the nonlinear measurement map

    z = [s_1..s_6, phi, theta, psi, omega_px, omega_py, omega_pz].
"""

from __future__ import annotations

import logging

import numpy as np
from numpy.typing import ArrayLike
from scipy.linalg import solve

from src.models.estimation import ANGLES, LENGTHS, RATES, EkfState, NoiseCovariances
from src.models.geometry import PlatformGeometry
from src.services.exceptions import InnovationSingularError
from src.services.kinematics import (
    euler_rate_matrix,
    euler_rate_to_body_rate,
    forward_kinematics,
    inverse_kinematics,
    pose_jacobian,
)

logger = logging.getLogger(__name__)

STATE_SIZE = 12
MAX_INNOVATION_CONDITION = 1e12
PSD_TOLERANCE = 1e-9


def discretize(dt: float) -> tuple[np.ndarray, np.ndarray]:
    A_d = np.eye(STATE_SIZE)
    A_d[:6, 6:] = dt * np.eye(6)
    B_d = np.zeros((STATE_SIZE, 6))
    B_d[6:, :] = dt * np.eye(6)
    return A_d, B_d


def wrap_angle(x: ArrayLike) -> np.ndarray:
    """Map angles to (-pi, pi]."""
    x = np.asarray(x, dtype=float)
    return x - 2.0 * np.pi * np.ceil((x - np.pi) / (2.0 * np.pi))


def predict(
    ekf: EkfState, u: ArrayLike, A_d: np.ndarray, B_d: np.ndarray, cov: NoiseCovariances
) -> EkfState:
    xhat = A_d @ ekf.xhat + B_d @ np.asarray(u, dtype=float)
    P = A_d @ ekf.P @ A_d.T + cov.predict_cov
    return EkfState(xhat=xhat, P=P)


def measurement_model(xi: ArrayLike, geom: PlatformGeometry) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    r, rdot = xi[3:6], xi[9:12]
    z = np.empty(STATE_SIZE)
    z[LENGTHS] = inverse_kinematics(xi[:6], geom).s
    z[ANGLES] = r
    z[RATES] = euler_rate_to_body_rate(r, rdot)
    return z


def measurement_jacobian(xi: ArrayLike, geom: PlatformGeometry) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    phi, theta, _ = xi[3:6]
    dphi, dtheta, dpsi = xi[9:12]
    cf, sf = np.cos(phi), np.sin(phi)
    ct, st = np.cos(theta), np.sin(theta)

    gamma = np.zeros((STATE_SIZE, STATE_SIZE))
    gamma[LENGTHS, :6] = pose_jacobian(xi[:6], geom)
    gamma[ANGLES, 3:6] = np.eye(3)
    # d(T rdot)/dr; T does not depend on psi
    gamma[RATES, 3] = [0.0, -sf * dtheta + cf * ct * dpsi, -cf * dtheta - sf * ct * dpsi]
    gamma[RATES, 4] = [-ct * dpsi, -sf * st * dpsi, -cf * st * dpsi]
    gamma[RATES, 9:12] = euler_rate_matrix(xi[3:6])
    return gamma


def kalman_gain(P: np.ndarray, gamma: np.ndarray, W: np.ndarray) -> np.ndarray:
    S = gamma @ P @ gamma.T + W
    condition = float(np.linalg.cond(S))
    if condition > MAX_INNOVATION_CONDITION:
        raise InnovationSingularError(
            f"Innovation covariance is singular (cond={condition:.3e})", condition=condition
        )
    # K = P G^T S^-1, solved as S K^T = G P with S symmetric positive definite
    return solve(S, gamma @ P, assume_a="pos").T


def update(
    ekf: EkfState,
    z: ArrayLike,
    gamma: np.ndarray,
    cov: NoiseCovariances,
    geom: PlatformGeometry,
) -> EkfState:
    innovation = np.asarray(z, dtype=float) - measurement_model(ekf.xhat, geom)
    innovation[ANGLES] = wrap_angle(innovation[ANGLES])

    K = kalman_gain(ekf.P, gamma, cov.innov_cov)
    xhat = ekf.xhat + K @ innovation
    P = (np.eye(STATE_SIZE) - K @ gamma) @ ekf.P
    P = 0.5 * (P + P.T)

    state = EkfState(xhat=xhat, P=P)
    min_eig = state.min_eigenvalue
    if min_eig < -PSD_TOLERANCE:
        logger.warning("Covariance lost positive semi-definiteness (min eigenvalue %.3e)", min_eig)
    return state


def initialize(
    encoder_lengths: ArrayLike, geom: PlatformGeometry, P0: np.ndarray
) -> EkfState:
    pose = forward_kinematics(encoder_lengths, geom.home, geom)
    xhat = np.concatenate([pose.vector, np.zeros(6)])
    return EkfState(xhat=xhat, P=np.array(P0, dtype=float))


class ExtendedKalmanFilter:
    """Owns the filter state of one control loop."""

    def __init__(self, geom: PlatformGeometry, cov: NoiseCovariances, dt: float) -> None:
        self._geom = geom
        self._cov = cov
        self._A_d, self._B_d = discretize(dt)
        self._state: EkfState | None = None

    @property
    def state(self) -> EkfState:
        if self._state is None:
            raise RuntimeError("Filter used before initialize()")
        return self._state

    def initialize(self, encoder_lengths: ArrayLike) -> EkfState:
        self._state = initialize(encoder_lengths, self._geom, self._cov.initial_cov)
        return self._state

    def step(self, u: ArrayLike, z: ArrayLike) -> EkfState:
        prior = predict(self.state, u, self._A_d, self._B_d, self._cov)
        gamma = measurement_jacobian(prior.xhat, self._geom)
        self._state = update(prior, z, gamma, self._cov, self._geom)
        return self._state
